#include "qpwalk/oracle.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpwalk/errors.hpp"
#include "qpwalk/spectral.hpp"

namespace qpwalk {

TruncatedChain build_truncated(const RateStencil& stencil, int L) {
    if (L < 2) throw ValidationError("box size L must be >= 2");
    validate(stencil);  // throws on negative or non-finite rates
    TruncatedChain ch;
    ch.L = L;
    const int N = ch.states();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 6);
    for (int n = 0; n <= L; ++n) {
        for (int m = 0; m <= L; ++m) {
            const StepRates& r = stencil.at_state(n, m);
            const int i = ch.index(n, m);
            double out = 0.0;
            // Ascending column order; the diagonal is the negated sum in
            // that same order, so each row sums to exactly zero.
            for (int s = -1; s <= 1; ++s) {
                for (int t = -1; t <= 1; ++t) {
                    double rate = r(s, t);
                    int a = n + s, b = m + t;
                    if (rate == 0.0 || a < 0 || b < 0 || a > L || b > L) continue;
                    trip.emplace_back(i, ch.index(a, b), rate);
                    out += rate;
                }
            }
            trip.emplace_back(i, i, -out);
            ch.max_rate = std::max(ch.max_rate, out);
        }
    }
    ch.Q.resize(N, N);
    ch.Q.setFromTriplets(trip.begin(), trip.end());
    ch.Q.makeCompressed();

    std::vector<std::vector<int>> incoming(N);
    for (int i = 0; i < N; ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it)
            if (it.col() != i) incoming[it.col()].push_back(i);

    auto sweep = [&](auto&& neighbours) {
        std::vector<char> seen(N, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            neighbours(i, [&](int j) {
                if (!seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            });
        }
        return seen;
    };
    ch.retained = sweep([&](int i, auto&& visit) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it)
            if (it.col() != i) visit(static_cast<int>(it.col()));
    });
    auto back = sweep([&](int i, auto&& visit) {
        for (int j : incoming[i]) visit(j);
    });
    ch.irreducible = true;
    for (int i = 0; i < N; ++i) ch.irreducible = ch.irreducible && (!ch.retained[i] || back[i]);
    return ch;
}

namespace {

double residual_of(const TruncatedChain& ch, const std::vector<double>& pi) {
    // (pi Q)_j accumulated row by row.
    std::vector<double> r(pi.size(), 0.0);
    for (int i = 0; i < ch.states(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it)
            r[it.col()] += pi[i] * it.value();
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return ch.max_rate > 0.0 ? worst / ch.max_rate : worst;
}

}  // namespace

OracleSolution stationary(const TruncatedChain& ch, double residual_target) {
    if (!ch.irreducible) {
        throw NumericalError("truncated chain is reducible: some reachable state cannot return to the origin");
    }
    const int N = ch.states();
    std::vector<int> local(N, -1);
    std::vector<int> global;
    for (int i = 0; i < N; ++i) {
        if (ch.retained[i]) {
            local[i] = static_cast<int>(global.size());
            global.push_back(i);
        }
    }
    const int n = static_cast<int>(global.size());

    // Q^T restricted to the retained states, with the origin equation
    // replaced by pi(0,0) = 1.
    std::vector<Eigen::Triplet<double>> trip;
    for (int li = 0; li < n; ++li) {
        int i = global[li];
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it) {
            int lj = local[it.col()];
            if (lj <= 0) continue;
            trip.emplace_back(lj, li, it.value());
        }
    }
    trip.emplace_back(0, 0, 1.0);
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(0) = 1.0;

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw NumericalError("sparse factorization of the box generator failed");
    Eigen::VectorXd x = lu.solve(b);

    OracleSolution out;
    out.L = ch.L;
    out.pi.assign(N, 0.0);
    auto store = [&] {
        double sum = x.sum();
        for (int li = 0; li < n; ++li) out.pi[global[li]] = x(li) / sum;
        out.residual = residual_of(ch, out.pi);
    };
    store();
    for (int it = 0; it < 3 && !(out.residual <= residual_target); ++it) {
        Eigen::VectorXd corr = lu.solve(b - A * x);
        x += corr;
        store();
    }
    if (!(out.residual <= residual_target)) {
        std::ostringstream os;
        os << "stationary solve missed the residual target: " << out.residual;
        throw NumericalError(os.str());
    }
    return out;
}

CompareReport compare(const Measure& a, const Measure& b, int W) {
    double sa = 0.0, sb = 0.0;
    for (int n = 0; n <= W; ++n)
        for (int m = 0; m <= W; ++m) {
            sa += a(n, m);
            sb += b(n, m);
        }
    CompareReport rep;
    for (int n = 0; n <= W; ++n) {
        for (int m = 0; m <= W; ++m) {
            double pa = a(n, m) / sa, pb = b(n, m) / sb;
            rep.tv += std::abs(pa - pb);
            double rel = std::abs(pa - pb) / std::max(std::abs(pb), 1e-300);
            if (rel > rep.max_rel) {
                rep.max_rel = rel;
                rep.worst_n = n;
                rep.worst_m = m;
            }
        }
    }
    rep.tv *= 0.5;
    return rep;
}

CompareReport compare(const SpectralSolution& sol, const OracleSolution& oracle, int W) {
    if (W > oracle.L) throw ValidationError("comparison window exceeds the oracle box");
    return compare([&](int n, int m) { return sol.pi(n, m); },
                   [&](int n, int m) { return oracle.at(n, m); }, W);
}

double BalanceReport::max() const { return std::max({interior, horizontal, vertical, origin}); }

BalanceReport balance_residual(const Measure& pi, const RateStencil& st, int W) {
    BalanceReport rep;
    for (int n = 0; n <= W; ++n) {
        for (int m = 0; m <= W; ++m) {
            double out = st.at_state(n, m).total() * pi(n, m);
            double in = 0.0;
            for (int s = -1; s <= 1; ++s) {
                for (int t = -1; t <= 1; ++t) {
                    int a = n - s, b = m - t;
                    if (a < 0 || b < 0 || (s == 0 && t == 0)) continue;
                    double rate = st.at_state(a, b)(s, t);
                    if (rate != 0.0) in += rate * pi(a, b);
                }
            }
            double scale = std::max(std::abs(out), std::abs(in));
            if (scale == 0.0) continue;
            double r = std::abs(out - in) / scale;
            double& slot = n > 0 && m > 0 ? rep.interior
                           : n > 0        ? rep.horizontal
                           : m > 0        ? rep.vertical
                                          : rep.origin;
            slot = std::max(slot, r);
        }
    }
    return rep;
}

BalanceReport balance_residual(const SpectralSolution& sol, int W) {
    return balance_residual([&](int n, int m) { return sol.pi(n, m); }, sol.stencil(), W);
}

}  // namespace qpwalk
