#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "qpwalk/qpwalk.hpp"
#include "qpwalk/format.hpp"

namespace qpwalk::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;
constexpr int kUsage = 64;

struct Options {
    std::string model_path;
    std::optional<std::uint64_t> seed;
    bool as_json = false;
    std::string out_dir;

    int terms = 64;
    int depth = 8;
    int grid_n = 10;
    int grid_m = 10;
    std::string csv_path;
    int rn = 8;
    double alpha = 0.0;
    int phases = 8;
    int L = 80;
    int window = 20;
    double rho = 0.5;
    bool print = false;

    bool jsq_stability = false;
    bool jsq_kernel = false;
    bool jsq_solve = false;
    bool jsq_compare = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return shortest(v); }

RateStencil resolve_model(const Options& o) {
    if (!o.model_path.empty()) return load_stencil(o.model_path);
    if (o.seed) return random_product_form_stencil(*o.seed);
    throw UsageError("a model is required: pass --model <path> or --seed <n>");
}

void require_ergodic(const RateStencil& st) {
    auto v = is_ergodic(st);
    if (!v.ergodic) {
        throw ValidationError("stencil is not ergodic (case " + to_string(v.which) +
                              "); no equilibrium distribution exists");
    }
}

LadderOptions ladder_options(const Options& o) {
    LadderOptions lo;
    lo.max_terms = o.terms;
    lo.depth = o.depth;
    return lo;
}

// Sends a report either to the stream or to a file under --out.
class Sink {
public:
    Sink(const Options& o, std::ostream& out) : opts_(o), out_(out) {}

    void emit(const std::string& name, const std::string& text) {
        if (opts_.out_dir.empty()) {
            out_ << text;
            return;
        }
        write_file(name, text);
    }

    void write_file(const std::string& name, const std::string& text) {
        std::filesystem::path p = name;
        if (!opts_.out_dir.empty() && p.is_relative()) {
            std::filesystem::create_directories(opts_.out_dir);
            p = std::filesystem::path(opts_.out_dir) / p;
        }
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + p.string());
        f << text;
    }

private:
    const Options& opts_;
    std::ostream& out_;
};

json drift_json(const Drift& d) { return json::array({d.x, d.y}); }

void cmd_stability(const Options& o, const RateStencil& st, Sink& sink) {
    auto v = is_ergodic(st);
    if (o.as_json) {
        json j;
        j["M"] = drift_json(v.drifts.interior);
        j["M_horizontal"] = drift_json(v.drifts.horizontal);
        j["M_vertical"] = drift_json(v.drifts.vertical);
        j["conditions"] = {{"Mx", v.mx},
                           {"My", v.my},
                           {"horizontal_cross", v.horizontal_cross},
                           {"vertical_cross", v.vertical_cross}};
        j["case"] = to_string(v.which);
        j["ergodic"] = v.ergodic;
        j["boundary_case"] = v.boundary_case;
        j["qbd"] = {{"horizontal_phase_ergodic", v.qbd.horizontal_phase_ergodic},
                    {"vertical_phase_ergodic", v.qbd.vertical_phase_ergodic},
                    {"horizontal_drift", v.qbd.horizontal_drift},
                    {"vertical_drift", v.qbd.vertical_drift},
                    {"verdict", v.qbd.verdict}};
        j["agreement"] = v.agreement;
        if (!v.note.empty()) j["note"] = v.note;
        sink.emit("stability.json", j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    auto vec = [](const Drift& d) { return "(" + num(d.x) + ", " + num(d.y) + ")"; };
    os << "M=" << vec(v.drifts.interior) << "\n"
       << "M_horizontal=" << vec(v.drifts.horizontal) << "\n"
       << "M_vertical=" << vec(v.drifts.vertical) << "\n"
       << "Mx=" << num(v.mx) << "\n"
       << "My=" << num(v.my) << "\n"
       << "horizontal_cross=" << num(v.horizontal_cross) << "\n"
       << "vertical_cross=" << num(v.vertical_cross) << "\n"
       << "case=" << to_string(v.which) << "\n"
       << "ergodic=" << (v.ergodic ? "true" : "false") << "\n"
       << "qbd_verdict=" << (v.qbd.verdict ? "true" : "false") << "\n"
       << "agreement=" << (v.agreement ? "true" : "false") << "\n";
    if (!v.note.empty()) os << "note=" << v.note << "\n";
    sink.emit("stability.txt", os.str());
}

void cmd_kernel(const Options& o, const RateStencil& st, Sink& sink) {
    auto sys = build_kernel_system(st);
    const std::pair<const char*, const Poly2*> polys[] = {
        {"K", &sys.K}, {"A", &sys.A}, {"B", &sys.B}, {"C", &sys.C}};
    if (o.as_json) {
        json j;
        for (auto [name, p] : polys) {
            json terms = json::array();
            for (auto t : p->terms()) terms.push_back({{"x", t.i}, {"y", t.j}, {"coef", t.coef}});
            j[name] = terms;
        }
        sink.emit("kernel.json", j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    for (auto [name, p] : polys) {
        if (o.print) {
            os << name << ":";
            for (auto t : p->terms()) os << " " << num(t.coef) << "*x^" << t.i << "*y^" << t.j;
            os << "\n";
        } else {
            os << name << " = " << p->to_string() << "\n";
        }
    }
    sink.emit("kernel.txt", os.str());
}

void cmd_solve(const Options& o, const RateStencil& st, Sink& sink) {
    require_ergodic(st);
    // Assembly rejects ladders that do not sum to a probability measure.
    auto sol = solve(st, ladder_options(o));
    const auto& L = sol.ladder();
    if (o.as_json) {
        json j;
        j["terms"] = L.size();
        j["requested_terms"] = L.requested_terms;
        j["stop"] = to_string(L.stop);
        j["alpha"] = L.alphas;
        j["beta"] = L.betas;
        j["d"] = L.d;
        j["e"] = L.e;
        j["c"] = L.c;
        std::vector<double> f;
        for (std::size_t k = 0; k < L.size(); ++k) f.push_back(L.f(k));
        j["f"] = f;
        j["rows"] = L.rows;
        sink.emit("ladder.json", j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "k,alpha,beta,d,e,c,f\n";
    for (std::size_t k = 0; k < L.size(); ++k) {
        os << k << "," << num(L.alphas[k]) << "," << num(L.betas[k]) << "," << num(L.d[k]) << ","
           << num(L.e[k]) << "," << num(L.c[k]) << "," << num(L.f(k)) << "\n";
    }
    sink.emit("ladder.csv", os.str());
}

std::string grid_csv(const std::function<double(int, int)>& pi, int N, int M) {
    std::ostringstream os;
    os << "n,m,pi\n";
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) os << n << "," << m << "," << num(pi(n, m)) << "\n";
    return os.str();
}

void cmd_evaluate(const Options& o, const RateStencil& st, Sink& sink) {
    if (o.grid_n < 1 || o.grid_m < 1) throw ValidationError("--grid needs positive sizes");
    require_ergodic(st);
    auto sol = solve(st, ladder_options(o));
    auto pi = [&](int n, int m) { return sol.pi(n, m); };
    std::string csv = grid_csv(pi, o.grid_n, o.grid_m);
    if (!o.csv_path.empty()) sink.write_file(o.csv_path, csv);
    if (o.as_json) {
        json j;
        j["pi00"] = sol.pi00();
        j["terms"] = sol.ladder().size();
        json grid = json::array();
        for (int n = 0; n < o.grid_n; ++n) {
            json row = json::array();
            for (int m = 0; m < o.grid_m; ++m) row.push_back(sol.pi(n, m));
            grid.push_back(row);
        }
        j["pi"] = grid;
        sink.emit("evaluate.json", j.dump(2) + "\n");
    } else if (o.csv_path.empty()) {
        sink.emit("evaluate.csv", csv);
    }
}

json matrix_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
        rows.push_back(r);
    }
    return rows;
}

void cmd_rmatrix(const Options& o, const RateStencil& st, Sink& sink) {
    require_ergodic(st);
    auto sol = solve(st, ladder_options(o));
    auto rn = build_RN(sol, o.rn);
    if (o.as_json) {
        json j;
        j["N"] = rn.N;
        j["D"] = std::vector<double>(rn.D.data(), rn.D.data() + rn.D.size());
        j["R"] = matrix_json(rn.R);
        j["condition"] = rn.condition;
        j["ill_conditioned"] = rn.ill_conditioned;
        j["row_residual"] = eigen_row_residual(rn);
        j["spectral_radius"] = spectral_radius(rn);
        sink.emit("rmatrix.json", j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "N=" << rn.N << "\n"
       << "condition=" << num(rn.condition) << (rn.ill_conditioned ? " (ill-conditioned)" : "")
       << "\n"
       << "row_residual=" << num(eigen_row_residual(rn)) << "\n"
       << "spectral_radius=" << num(spectral_radius(rn)) << "\n";
    for (int i = 0; i < rn.N; ++i) {
        for (int j = 0; j < rn.N; ++j) os << (j ? "," : "") << num(rn.R(i, j));
        os << "\n";
    }
    sink.emit("rmatrix.txt", os.str());
}

void cmd_resolvent(const Options& o, const RateStencil& st, Sink& sink) {
    require_ergodic(st);
    auto sol = solve(st, ladder_options(o));
    auto row = resolvent_eval(sol, o.alpha, o.phases);
    if (o.as_json) {
        json j;
        j["alpha"] = o.alpha;
        j["resolvent"] = row;
        sink.emit("resolvent.json", j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "m,value\n";
    for (std::size_t m = 0; m < row.size(); ++m) os << m << "," << num(row[m]) << "\n";
    sink.emit("resolvent.csv", os.str());
}

void cmd_oracle(const Options& o, const RateStencil& st, Sink& sink) {
    require_valid(st);
    auto chain = build_truncated(st, o.L);
    auto sol = stationary(chain);
    auto pi = [&](int n, int m) { return sol.at(n, m); };
    std::string csv = grid_csv(pi, o.L + 1, o.L + 1);
    if (!o.csv_path.empty()) sink.write_file(o.csv_path, csv);
    if (o.as_json) {
        json j;
        j["L"] = o.L;
        j["states"] = chain.states();
        j["residual"] = sol.residual;
        double window_mass = 0.0;
        for (int n = 0; n <= std::min(o.window, o.L); ++n)
            for (int m = 0; m <= std::min(o.window, o.L); ++m) window_mass += sol.at(n, m);
        j["window"] = o.window;
        j["window_mass"] = window_mass;
        sink.emit("oracle.json", j.dump(2) + "\n");
    } else if (o.csv_path.empty()) {
        sink.emit("oracle.csv", csv);
    }
}

void cmd_compare(const Options& o, const RateStencil& st, Sink& sink) {
    require_ergodic(st);
    auto sol = solve(st, ladder_options(o));
    auto chain = build_truncated(st, o.L);
    auto orc = stationary(chain);
    auto rep = compare(sol, orc, o.window);
    auto bal = balance_residual(sol, std::min(o.window, 15));
    if (o.as_json) {
        json j;
        j["terms"] = sol.ladder().size();
        j["L"] = o.L;
        j["window"] = o.window;
        j["tv"] = rep.tv;
        j["max_rel"] = rep.max_rel;
        j["worst_cell"] = {rep.worst_n, rep.worst_m};
        j["oracle_residual"] = orc.residual;
        j["balance_residual"] = bal.max();
        sink.emit("compare.json", j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "terms=" << sol.ladder().size() << "\n"
       << "L=" << o.L << "\n"
       << "window=" << o.window << "\n"
       << "tv=" << num(rep.tv) << "\n"
       << "max_rel=" << num(rep.max_rel) << "\n"
       << "worst_cell=(" << rep.worst_n << "," << rep.worst_m << ")\n"
       << "oracle_residual=" << num(orc.residual) << "\n"
       << "balance_residual=" << num(bal.max()) << "\n";
    sink.emit("compare.txt", os.str());
}

void cmd_jsq(const Options& o, Sink& sink) {
    auto st = jsq_stencil(o.rho);
    bool any = false;
    if (o.jsq_stability) cmd_stability(o, st, sink), any = true;
    if (o.jsq_kernel) cmd_kernel(o, st, sink), any = true;
    if (o.jsq_solve) cmd_solve(o, st, sink), any = true;
    if (o.jsq_compare) cmd_compare(o, st, sink), any = true;
    if (!any) sink.emit("jsq.json", stencil_to_json(st).dump(2) + "\n");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Equilibrium solver for nearest-neighbour random walks in the quarter plane"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--model", o.model_path, "Model file (JSON)");
    app.add_option("--seed", o.seed, "Use a random product-form model drawn with this seed");
    app.add_flag("--json", o.as_json, "Machine-readable output");
    app.add_option("--out", o.out_dir, "Write reports and CSV files into this directory");

    auto ladder_flags = [&](CLI::App* c) {
        c->add_option("--terms", o.terms, "Maximum number of product-form terms")
            ->check(CLI::Range(1, 4096));
        c->add_option("--depth", o.depth, "Eigenvector entries kept per term")->check(CLI::Range(3, 4096));
    };

    auto* stab = app.add_subcommand("stability", "Drift vectors and ergodicity verdict");
    auto* kern = app.add_subcommand("kernel", "Functional-equation polynomials K, A, B, C");
    kern->add_flag("--print", o.print, "List monomials with explicit powers");
    auto* solv = app.add_subcommand("solve", "Product-form ladder");
    ladder_flags(solv);
    auto* eval = app.add_subcommand("evaluate", "Equilibrium probabilities on a grid");
    ladder_flags(eval);
    eval->add_option("--grid", [&](CLI::results_t r) {
            if (r.size() != 2) return false;
            try {
                o.grid_n = std::stoi(r[0]);
                o.grid_m = std::stoi(r[1]);
            } catch (const std::exception&) {
                return false;
            }
            return true;
        }, "Grid size N M (states n < N, m < M)")
        ->expected(2)
        ->type_name("N M");
    eval->add_option("--csv", o.csv_path, "Write the grid as CSV to this file");
    auto* rmat = app.add_subcommand("rmatrix", "Truncated rate matrix R_N");
    ladder_flags(rmat);
    rmat->add_option("--n", o.rn, "Truncation N")->check(CLI::Range(1, 64));
    auto* reso = app.add_subcommand("resolvent", "Resolvent row at alpha");
    ladder_flags(reso);
    reso->add_option("--alpha", o.alpha, "Resolvent argument")->required();
    reso->add_option("--phases", o.phases, "Entries to print")->check(CLI::Range(1, 4096));
    auto* orac = app.add_subcommand("oracle", "Truncated-chain stationary law");
    orac->add_option("--L", o.L, "Box size")->check(CLI::Range(2, 2000));
    orac->add_option("--csv", o.csv_path, "Write the law as CSV to this file");
    orac->add_option("--window", o.window, "Window for the reported mass");
    auto* comp = app.add_subcommand("compare", "Spectral solution against the truncated chain");
    ladder_flags(comp);
    comp->add_option("--L", o.L, "Box size")->check(CLI::Range(2, 2000));
    comp->add_option("--window", o.window, "Comparison window W (n, m <= W)")->check(CLI::Range(0, 2000));
    auto* jsq = app.add_subcommand("jsq", "Join-the-shortest-queue model");
    jsq->add_option("--rho", o.rho, "Load per server")->required();
    jsq->add_flag("--stability", o.jsq_stability, "Print the stability verdict");
    jsq->add_flag("--kernel", o.jsq_kernel, "Print the polynomials");
    jsq->add_flag("--solve", o.jsq_solve, "Print the ladder");
    jsq->add_flag("--compare", o.jsq_compare, "Compare with the truncated chain");
    ladder_flags(jsq);
    jsq->add_option("--L", o.L, "Box size for --compare")->check(CLI::Range(2, 2000));
    jsq->add_option("--window", o.window, "Comparison window for --compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        Sink sink(o, out);
        if (jsq->parsed()) {
            cmd_jsq(o, sink);
            return kOk;
        }
        RateStencil st = resolve_model(o);
        if (stab->parsed()) cmd_stability(o, st, sink);
        else if (kern->parsed()) cmd_kernel(o, st, sink);
        else if (solv->parsed()) cmd_solve(o, st, sink);
        else if (eval->parsed()) cmd_evaluate(o, st, sink);
        else if (rmat->parsed()) cmd_rmatrix(o, st, sink);
        else if (reso->parsed()) cmd_resolvent(o, st, sink);
        else if (orac->parsed()) cmd_oracle(o, st, sink);
        else if (comp->parsed()) cmd_compare(o, st, sink);
        return kOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace qpwalk::cli
