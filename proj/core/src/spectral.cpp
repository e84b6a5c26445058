#include "qpwalk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpwalk/errors.hpp"

namespace qpwalk {

SpectralSolution::SpectralSolution(ProductFormLadder ladder, RateStencil stencil)
    : ladder_(std::move(ladder)), stencil_(std::move(stencil)) {
    const auto& L = ladder_;
    if (L.size() == 0 || L.d.size() != L.size() || L.c.size() != L.size()) {
        throw NumericalError("ladder is incomplete");
    }
    for (std::size_t k = 0; k < L.size(); ++k) {
        if (!(std::abs(L.alphas[k]) < 1.0) || !(std::abs(L.betas[k]) < 1.0)) {
            std::ostringstream os;
            os << "non-summable series: |alpha| or |beta| >= 1 at k = " << k;
            throw NumericalError(os.str());
        }
    }
    double r = stencil_.origin.total();
    if (!(r > 0.0)) throw ValidationError("origin exit rate must be positive");
    pi00_raw_ = (raw(0, 1) * stencil_.vertical(0, -1) + raw(1, 0) * stencil_.horizontal(-1, 0) +
                 raw(1, 1) * stencil_.interior(-1, -1)) /
                r;

    double S = pi00_raw_;
    for (std::size_t k = 0; k < L.size(); ++k) {
        double a = L.alphas[k], b = L.betas[k];
        S += L.d[k] * b / (1.0 - b);
        double tail = 0.0;
        if (k == 0) {
            tail = L.c[0] * b / (1.0 - b);
        } else {
            double bp = L.betas[k - 1];
            tail = L.c[k] * bp / (1.0 - bp) + L.g[k] * b / (1.0 - b);
        }
        S += a / (1.0 - a) * (L.e[k] + tail);
    }
    if (!(S > 0.0) || !std::isfinite(S)) throw NumericalError("assembled mass is not positive");
    mass_ = S;

    double peak = 0.0, low = 0.0;
    for (int n = 0; n <= 30; ++n) {
        for (int m = 0; m <= 30; ++m) {
            double v = raw(n, m);
            peak = std::max(peak, v);
            low = std::min(low, v);
        }
    }
    if (low < -1e-10 * peak) {
        std::ostringstream os;
        os << "assembled measure is negative: min " << low / S << " relative to total mass";
        throw NumericalError(os.str());
    }
}

double SpectralSolution::series(int n, int m, double* tail) const {
    const auto& L = ladder_;
    if (n == 0 && m == 0) {
        if (tail) *tail = 0.0;
        return pi00_raw_;
    }
    double sum = 0.0, last = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < L.size(); ++k) {
        double t;
        if (n == 0) {
            t = L.d[k] * std::pow(L.betas[k], m);
        } else if (m == 0) {
            t = L.e[k] * std::pow(L.alphas[k], n);
        } else {
            t = std::pow(L.alphas[k], n) * L.eigvec(k, m);
        }
        sum += t;
        prev = last;
        last = t;
    }
    if (tail) {
        if (L.size() < 2 || last == 0.0) {
            *tail = std::abs(last);
        } else {
            double ratio = std::abs(last / prev);
            *tail = ratio < 1.0 ? std::abs(last) * ratio / (1.0 - ratio)
                                : std::numeric_limits<double>::infinity();
        }
    }
    return sum;
}

double SpectralSolution::raw(int n, int m) const {
    if (n < 0 || m < 0) throw ValidationError("state coordinates must be >= 0");
    return series(n, m, nullptr);
}

double SpectralSolution::pi(int n, int m) const { return raw(n, m) / mass_; }

Evaluation SpectralSolution::pi_detailed(int n, int m) const {
    if (n < 0 || m < 0) throw ValidationError("state coordinates must be >= 0");
    double tail = 0.0;
    double v = series(n, m, &tail);
    return {v / mass_, tail / mass_};
}

double SpectralSolution::pgf(double x, double y) const {
    const auto& L = ladder_;
    auto geo = [](double r, double z) { return r * z / (1.0 - r * z); };
    double s = pi00_raw_;
    for (std::size_t k = 0; k < L.size(); ++k) {
        double a = L.alphas[k], b = L.betas[k];
        s += L.d[k] * geo(b, y);
        double row = L.e[k];
        if (k == 0) {
            row += L.c[0] * geo(b, y);
        } else {
            row += L.c[k] * geo(L.betas[k - 1], y) + L.g[k] * geo(b, y);
        }
        s += geo(a, x) * row;
    }
    return s / mass_;
}

std::vector<double> SpectralSolution::level(int n, int phases) const {
    std::vector<double> out;
    for (int m = 0; m < phases; ++m) out.push_back(pi(n, m));
    return out;
}

SpectralSolution assemble(const ProductFormLadder& ladder, const RateStencil& stencil) {
    return SpectralSolution(ladder, stencil);
}

SpectralSolution solve(const RateStencil& stencil, const LadderOptions& opts) {
    auto sys = build_kernel_system(stencil);
    return assemble(solve_ladder(sys, opts), stencil);
}

double pi_eval(const SpectralSolution& sol, int n, int m) { return sol.pi(n, m); }

double pgf_eval(const SpectralSolution& sol, double x, double y) {
    if (!(std::abs(x) < 1.0 && std::abs(y) < 1.0)) {
        throw ValidationError("generating function is evaluated only inside the open unit bidisk");
    }
    return sol.pgf(x, y);
}

FunctionalResidual functional_equation_residual(const SpectralSolution& sol, double x, double y) {
    auto sys = build_kernel_system(sol.stencil());
    double terms[4] = {sys.K(x, y) * pgf_eval(sol, x, y), sys.A(x, y) * pgf_eval(sol, x, 0.0),
                       sys.B(x, y) * pgf_eval(sol, 0.0, y), sys.C(x, y) * sol.pi00()};
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return {std::abs(sum), scale};
}

TruncatedRateMatrix build_RN(const SpectralSolution& sol, int N, double condition_warn) {
    const auto& L = sol.ladder();
    if (N < 1) throw ValidationError("N must be >= 1");
    if (static_cast<std::size_t>(N) > L.size()) {
        std::ostringstream os;
        os << "ladder has " << L.size() << " terms, fewer than N = " << N;
        throw ValidationError(os.str());
    }
    TruncatedRateMatrix out;
    out.N = N;
    out.D.resize(N);
    out.P.resize(N, N);
    for (int k = 0; k < N; ++k) {
        out.D(k) = L.alphas[k];
        for (int m = 0; m < N; ++m) out.P(k, m) = L.eigvec(k, m);
    }
    out.R = out.P.partialPivLu().solve(out.D.asDiagonal() * out.P);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.P);
    auto sv = svd.singularValues();
    out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                            : std::numeric_limits<double>::infinity();
    out.ill_conditioned = out.condition > condition_warn;
    return out;
}

double eigen_row_residual(const TruncatedRateMatrix& rn) {
    double worst = 0.0;
    for (int k = 0; k < rn.N; ++k) {
        Eigen::RowVectorXd row = rn.P.row(k);
        double scale = row.cwiseAbs().maxCoeff();
        if (scale == 0.0) continue;
        Eigen::RowVectorXd r = row * rn.R - rn.D(k) * row;
        worst = std::max(worst, r.cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

double spectral_radius(const TruncatedRateMatrix& rn) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(rn.R, false);
    double rho = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) rho = std::max(rho, std::abs(es.eigenvalues()[i]));
    return rho;
}

std::vector<double> resolvent_eval(const SpectralSolution& sol, double alpha, int phases) {
    const auto& L = sol.ladder();
    if (alpha == 0.0) throw ValidationError("resolvent argument must be nonzero");
    for (std::size_t k = 0; k < L.size(); ++k) {
        if (std::abs(alpha - L.alphas[k]) <= 1e-10 * std::max(1.0, std::abs(L.alphas[k]))) {
            std::ostringstream os;
            os << "resolvent pole: alpha is within 1e-10 of alpha_" << k;
            throw NumericalError(os.str());
        }
    }
    std::vector<double> out(static_cast<std::size_t>(std::max(phases, 0)), 0.0);
    for (std::size_t k = 0; k < L.size(); ++k) {
        double w = L.alphas[k] / (alpha - L.alphas[k]) / sol.mass();
        for (int m = 0; m < phases; ++m) out[m] += w * L.eigvec(k, m);
    }
    return out;
}

std::vector<double> resolvent_direct(const SpectralSolution& sol, const TruncatedRateMatrix& rn,
                                     double alpha) {
    Eigen::VectorXd pi1(rn.N);
    for (int m = 0; m < rn.N; ++m) pi1(m) = sol.pi(1, m);
    Eigen::MatrixXd M = alpha * Eigen::MatrixXd::Identity(rn.N, rn.N) - rn.R;
    Eigen::VectorXd x = M.transpose().partialPivLu().solve(pi1);
    return {x.data(), x.data() + x.size()};
}

}  // namespace qpwalk
