#include "qpwalk/compensation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "qpwalk/errors.hpp"

namespace qpwalk {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Converged: return "converged";
        case StopReason::TermLimit: return "term-limit";
        case StopReason::AlphaFloor: return "alpha-floor";
    }
    return "unknown";
}

double ProductFormLadder::f(std::size_t k) const {
    if (k == 0 || c[k] == 0.0) return 0.0;
    return g[k] / c[k];
}

double ProductFormLadder::eigvec(std::size_t k, int m) const {
    if (m == 0) return e[k];
    if (k == 0) return c[0] * std::pow(betas[0], m);
    return c[k] * std::pow(betas[k - 1], m) + g[k] * std::pow(betas[k], m);
}

namespace {

using Poly1 = std::vector<double>;  // ascending powers of x

Poly1 column(const Poly2& p, int j) { return {p.coef(0, j), p.coef(1, j), p.coef(2, j)}; }

Poly1 mul(const Poly1& a, const Poly1& b) {
    Poly1 out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly1 axpy(double s, const Poly1& a, const Poly1& b) {
    Poly1 out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += s * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

double horner(const Poly1& p, double x) {
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<std::complex<double>> poly_roots(Poly1 p) {
    double big = 0.0;
    for (double c : p) big = std::max(big, std::abs(c));
    while (!p.empty() && std::abs(p.back()) <= 1e-14 * big) p.pop_back();
    int deg = static_cast<int>(p.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

double polish(const Poly1& p, double x) {
    Poly1 dp;
    for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(static_cast<double>(i) * p[i]);
    for (int it = 0; it < 3; ++it) {
        double d = horner(dp, x);
        if (d == 0.0) break;
        double step = horner(p, x) / d;
        if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::abs(x)) break;
        x -= step;
    }
    return x;
}

double rel_value(const Poly2& p, double x, double y) {
    double scale = 0.0;
    for (const auto& t : p.terms())
        scale = std::max(scale, std::abs(t.coef * std::pow(x, t.i) * std::pow(y, t.j)));
    return scale > 0.0 ? std::abs(p(x, y)) / scale : 0.0;
}

struct CommonRoot {
    double x;
    double y;
};

Poly2 transpose(const Poly2& p) {
    Poly2 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.add(j, i, p.coef(i, j));
    return out;
}

// K and P + K both as polynomials in the second variable; P + K has no
// constant term there, so (P + K)/y = a2 y + a1 shares the roots of P with
// K away from y = 0. The resultant of K and that linear factor is
// K2 a1^2 - K1 a1 a2 + K0 a2^2.
Poly1 resultant(const Poly2& k, const Poly2& pk, Poly1* a1_out = nullptr, Poly1* a2_out = nullptr) {
    Poly1 k0 = column(k, 0), k1 = column(k, 1), k2 = column(k, 2);
    Poly1 a1 = column(pk, 1), a2 = column(pk, 2);
    if (a1_out) *a1_out = a1;
    if (a2_out) *a2_out = a2;
    return axpy(1.0, mul(k2, mul(a1, a1)), axpy(-1.0, mul(k1, mul(a1, a2)), mul(k0, mul(a2, a2))));
}

std::vector<CommonRoot> common_roots(const KernelSystem& sys) {
    Poly1 a1, a2;
    Poly1 res = resultant(sys.K, sys.A + sys.K, &a1, &a2);

    std::vector<CommonRoot> out;
    for (auto z : poly_roots(res)) {
        double x = z.real();
        if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(x))) continue;
        if (x <= 1.0 + 1e-8) continue;
        x = polish(res, x);
        double den = horner(a2, x);
        if (den == 0.0) continue;
        double y = -horner(a1, x) / den;
        if (rel_value(sys.K, x, y) > 1e-10 || rel_value(sys.A, x, y) > 1e-10) continue;
        out.push_back({x, y});
    }
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.x < b.x; });
    return out;
}

// alpha^2 beta^2 p(1/alpha, 1/beta), evaluated without forming 1/alpha.
double scaled_eval(const Poly2& p, double alpha, double beta) {
    double v = 0.0;
    for (const auto& t : p.terms()) v += t.coef * std::pow(alpha, 2 - t.i) * std::pow(beta, 2 - t.j);
    return v;
}

// alpha^2 * (coefficients of p(1/alpha, y) in y).
std::array<double, 3> scaled_in_y(const Poly2& p, double alpha) {
    std::array<double, 3> out{};
    for (int j = 0; j < 3; ++j)
        out[j] = p.coef(2, j) + alpha * (p.coef(1, j) + alpha * p.coef(0, j));
    return out;
}

void require_close(double got, double want, const char* what, std::size_t k) {
    if (!(std::abs(got / want - 1.0) <= 1e-8)) {
        std::ostringstream os;
        os << "ladder consistency failure at k = " << k << ": " << what << " gave " << got
           << ", expected " << want;
        throw NumericalError(os.str());
    }
}

void degenerate(const char* what, std::size_t k) {
    std::ostringstream os;
    os << "division-degenerate step at k = " << k << ": " << what << " vanishes";
    throw NumericalError(os.str());
}

// Runs the recursion over the ladder; with tol > 0 it stops once both
// boundary contributions fall below tol relative to the head and returns
// the number of pairs kept.
std::size_t recurse(const KernelSystem& sys, ProductFormLadder& L, double p00, double tol) {
    const std::size_t n = L.size();
    L.d.assign(n, 0.0);
    L.e.assign(n, 0.0);
    L.e[0] = p00;
    for (std::size_t k = 0; k < n; ++k) {
        double a = L.alphas[k], b = L.betas[k];
        double av = scaled_eval(sys.A, a, b);
        double bv = scaled_eval(sys.B, a, b);
        if (bv == 0.0) degenerate("B", k);
        double lim = limit_ratio_at(sys, 1.0 / a, 1.0 / b);
        L.d[k] = -a * av * L.e[k] / (bv * b * lim);
        if (tol > 0.0 && k > 0 &&
            std::abs(L.d[k] * b) < tol * std::abs(L.d[0] * L.betas[0]) &&
            std::abs(L.e[k] * a) < tol * std::abs(L.e[0] * L.alphas[0])) {
            return k + 1;
        }
        if (k + 1 == n) break;
        double an = L.alphas[k + 1];
        double av1 = scaled_eval(sys.A, an, b);
        double bv1 = scaled_eval(sys.B, an, b);
        if (av1 == 0.0) degenerate("A", k + 1);
        double lim1 = limit_ratio_at(sys, 1.0 / an, 1.0 / b);
        L.e[k + 1] = -bv1 * L.d[k] * b * lim1 / (an * av1);
    }
    return n;
}

// c * b^m without forming b^m, which underflows deep in the ladder.
double scaled_power(double c, double b, int m) {
    if (c == 0.0 || b == 0.0) return 0.0;
    double mag = std::exp(std::log(std::abs(c)) + m * std::log(std::abs(b)));
    bool negative = (c < 0.0) != (b < 0.0 && m % 2 == 1);
    return negative ? -mag : mag;
}

}  // namespace

std::vector<std::complex<double>> resultant_roots(const KernelSystem& sys, Boundary b) {
    if (b == Boundary::Horizontal) return poly_roots(resultant(sys.K, sys.A + sys.K));
    return poly_roots(resultant(transpose(sys.K), transpose(sys.B + sys.K)));
}

std::vector<double> starting_candidates(const KernelSystem& sys) {
    std::vector<double> out;
    for (auto r : common_roots(sys)) out.push_back(r.x);
    return out;
}

double find_starting_alpha(const KernelSystem& sys) {
    auto roots = common_roots(sys);
    if (roots.empty()) {
        throw NumericalError("no feasible starting pair: K and A share no root with x > 1");
    }
    if (roots.size() > 1) {
        std::ostringstream os;
        os << "multiple feasible starting pairs are not supported (" << roots.size()
           << " candidates with x > 1)";
        throw NumericalError(os.str());
    }
    return 1.0 / roots.front().x;
}

ProductFormLadder extend_ladder(const KernelSystem& sys, double alpha0, int K, double alpha_floor) {
    if (K < 0) throw ValidationError("ladder length must be >= 0");
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw NumericalError("alpha_0 must lie in (0,1)");
    ProductFormLadder L;
    L.requested_terms = K + 1;
    L.stop = StopReason::TermLimit;
    L.alphas.push_back(alpha0);
    for (std::size_t k = 0;; ++k) {
        auto yb = y_branches(sys, 1.0 / L.alphas[k]);
        if (k > 0) require_close(yb.minus, 1.0 / L.betas[k - 1], "y-(1/alpha_k)", k);
        L.betas.push_back(1.0 / yb.plus);
        if (static_cast<int>(k) == K) break;
        auto xb = x_branches(sys, yb.plus);
        require_close(xb.minus, 1.0 / L.alphas[k], "x-(1/beta_k)", k);
        double next = 1.0 / xb.plus;
        if (std::abs(next) < alpha_floor) {
            L.stop = StopReason::AlphaFloor;
            break;
        }
        L.alphas.push_back(next);
    }
    return L;
}

void coefficient_recursion(const KernelSystem& sys, ProductFormLadder& ladder, double p00) {
    recurse(sys, ladder, p00, 0.0);
}

std::vector<double> eigenvector_tail(const KernelSystem& sys, double alpha_k, double p_k0, int M) {
    auto k = scaled_in_y(sys.K, alpha_k);
    auto a = scaled_in_y(sys.A + sys.K, alpha_k);
    if (k[0] == 0.0) throw NumericalError("degenerate denominator: K(1/alpha, 0) = 0");
    std::vector<double> p(static_cast<std::size_t>(std::max(M, 0)), 0.0);
    if (M >= 1) p[0] = -a[1] * p_k0 / k[0];
    if (M >= 2) p[1] = -(k[1] * p[0] + a[2] * p_k0) / k[0];
    for (int i = 3; i <= M; ++i) p[i - 1] = -(k[1] * p[i - 2] + k[2] * p[i - 3]) / k[0];
    return p;
}

ProductFit fit_product_form(const ProductFormLadder& L, std::size_t k,
                            const std::vector<double>& tail) {
    if (tail.size() < 2) throw ValidationError("fit needs p(k,1) and p(k,2)");
    double bb = k == 0 ? L.beta_minus1 : L.betas[k - 1];
    double bs = L.betas[k];
    if (bb == bs) throw NumericalError("coincident geometric rates in product-form fit");
    double p1 = tail[0], p2 = tail[1];
    double u = (p1 * bs - p2) / (bb * (bs - bb));
    double w = (p2 - p1 * bb) / (bs * (bs - bb));

    for (std::size_t m = 3; m <= tail.size(); ++m) {
        double cu = scaled_power(u, bb, static_cast<int>(m));
        double cw = scaled_power(w, bs, static_cast<int>(m));
        double scale = std::max({std::abs(cu), std::abs(cw), std::abs(tail[m - 1])});
        if (scale < 1e-280) continue;  // too close to the subnormal range to compare
        // Row 0 lacks its dominant root, so the recurrence amplifies rounding.
        double amp = k == 0 ? std::max(1.0, std::pow(std::abs(bb / bs), m - 2.0)) : 1.0;
        if (std::abs(cu + cw - tail[m - 1]) > 1e-10 * amp * scale) {
            std::ostringstream os;
            os << "product-form fit failed at k = " << k << ", m = " << m;
            throw NumericalError(os.str());
        }
    }

    ProductFit fit;
    if (k == 0) {
        fit.c = w;
        fit.spurious = p1 != 0.0 ? std::abs(u * bb / p1) : 0.0;
        if (fit.spurious > 1e-8) {
            throw NumericalError("row 0 is not a single geometric: starting pair inconsistent");
        }
    } else {
        fit.c = u;
        fit.g = w;
    }
    return fit;
}

ProductFormLadder solve_ladder(const KernelSystem& sys, const LadderOptions& opts) {
    if (opts.max_terms < 1) throw ValidationError("max_terms must be >= 1");
    if (opts.depth < 3) throw ValidationError("depth must be >= 3");
    auto roots = common_roots(sys);
    double alpha0 = find_starting_alpha(sys);
    double x0 = roots.front().x;

    ProductFormLadder L = extend_ladder(sys, alpha0, opts.max_terms - 1, opts.alpha_floor);
    auto head = y_branches(sys, x0);
    if (std::abs(roots.front().y / head.minus - 1.0) > 1e-8) {
        throw NumericalError("common root of K and A is not on the backward branch");
    }
    L.beta_minus1 = 1.0 / head.minus;

    std::size_t kept = recurse(sys, L, opts.p00, opts.contribution_tol);
    if (kept < L.size()) {
        L.alphas.resize(kept);
        L.betas.resize(kept);
        L.d.resize(kept);
        L.e.resize(kept);
        L.stop = StopReason::Converged;
    }
    L.requested_terms = opts.max_terms;

    const std::size_t n = L.size();
    L.c.assign(n, 0.0);
    L.g.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        auto tail = eigenvector_tail(sys, L.alphas[k], L.e[k], opts.depth);
        auto fit = fit_product_form(L, k, tail);
        L.c[k] = fit.c;
        L.g[k] = fit.g;
        if (k == 0) L.head_spurious = fit.spurious;
    }
    L.rows.assign(n, {});
    for (std::size_t k = 0; k < n; ++k)
        for (int m = 0; m <= opts.depth; ++m) L.rows[k].push_back(L.eigvec(k, m));
    return L;
}

}  // namespace qpwalk
