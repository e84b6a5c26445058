#include "qpwalk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpwalk/errors.hpp"
#include "qpwalk/format.hpp"

namespace qpwalk {

double Poly2::operator()(double x, double y) const {
    auto c = in_y(x);
    return c[0] + y * (c[1] + y * c[2]);
}

std::array<double, 3> Poly2::in_y(double x) const {
    std::array<double, 3> out{};
    for (int j = 0; j < 3; ++j) out[j] = coef(0, j) + x * (coef(1, j) + x * coef(2, j));
    return out;
}

std::array<double, 3> Poly2::in_x(double y) const {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = coef(i, 0) + y * (coef(i, 1) + y * coef(i, 2));
    return out;
}

Poly2 Poly2::dx() const {
    Poly2 out;
    for (int i = 1; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.add(i - 1, j, i * coef(i, j));
    return out;
}

Poly2 Poly2::dy() const {
    Poly2 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 1; j < 3; ++j) out.add(i, j - 1, j * coef(i, j));
    return out;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 out = *this;
    for (std::size_t k = 0; k < c_.size(); ++k) out.c_[k] += o.c_[k];
    return out;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + (-o); }

Poly2 Poly2::operator-() const {
    Poly2 out;
    for (std::size_t k = 0; k < c_.size(); ++k) out.c_[k] = -c_[k];
    return out;
}

std::vector<Poly2::Term> Poly2::terms() const {
    std::vector<Term> out;
    for (int deg = 0; deg <= 4; ++deg) {
        for (int i = 0; i <= deg; ++i) {
            int j = deg - i;
            if (i > 2 || j > 2) continue;
            if (coef(i, j) != 0.0) out.push_back({i, j, coef(i, j)});
        }
    }
    return out;
}

std::string Poly2::to_string() const {
    auto ts = terms();
    if (ts.empty()) return "0";
    std::ostringstream os;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        double c = ts[k].coef;
        if (k > 0) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        os << shortest(std::abs(c));
        if (ts[k].i > 0) os << "*x" << (ts[k].i > 1 ? "^2" : "");
        if (ts[k].j > 0) os << "*y" << (ts[k].j > 1 ? "^2" : "");
    }
    return os.str();
}

Poly2 class_polynomial(const StepRates& rates) {
    Poly2 p;
    for (int s = -1; s <= 1; ++s)
        for (int t = -1; t <= 1; ++t)
            if (rates(s, t) != 0.0) p.add(s + 1, t + 1, rates(s, t));
    p.add(1, 1, -rates.total());
    return p;
}

KernelSystem build_kernel_system(const RateStencil& stencil) {
    require_valid(stencil);
    KernelSystem sys;
    sys.stencil = stencil;
    Poly2 hq = class_polynomial(stencil.interior);
    Poly2 hh = class_polynomial(stencil.horizontal);
    Poly2 hv = class_polynomial(stencil.vertical);
    Poly2 hr = class_polynomial(stencil.origin);
    sys.K = hq;
    sys.A = hh - hq;
    sys.B = hv - hq;
    sys.C = hq - hh - hv + hr;
    return sys;
}

double kernel_residual(const KernelSystem& sys, double alpha, double beta) {
    // alpha^2 beta^2 K(1/alpha, 1/beta), term by term.
    double sum = 0.0;
    double scale = 0.0;
    for (const auto& t : sys.K.terms()) {
        double v = t.coef * std::pow(alpha, 2 - t.i) * std::pow(beta, 2 - t.j);
        sum += v;
        scale = std::max(scale, std::abs(v));
    }
    return scale > 0.0 ? std::abs(sum) / scale : std::abs(sum);
}

QuadraticRoots ordered_roots(double c0, double c1, double c2, double tie_tol) {
    if (c2 == 0.0) throw NumericalError("quadratic kernel view has zero leading coefficient");
    double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) {
        double scale = c1 * c1 + std::abs(4.0 * c2 * c0);
        if (disc < -1e-14 * scale) {
            std::ostringstream os;
            os << "complex kernel branch: discriminant " << disc;
            throw NumericalError(os.str());
        }
        disc = 0.0;
    }
    double s = std::sqrt(disc);
    double big = (-c1 - std::copysign(s, c1)) / (2.0 * c2);
    double small = big != 0.0 ? c0 / (c2 * big) : 0.0;
    if (std::abs(small) > std::abs(big)) std::swap(big, small);
    if (std::abs(big) - std::abs(small) < tie_tol * std::abs(big) || big == 0.0) {
        std::ostringstream os;
        os << "branch degeneracy: roots " << big << " and " << small << " tie in modulus";
        throw NumericalError(os.str());
    }
    return {big, small};
}

BranchPoint y_branches(const KernelSystem& sys, double x) {
    auto c = sys.K.in_y(x);
    auto r = ordered_roots(c[0], c[1], c[2]);
    Poly2 kx = sys.K.dx();
    Poly2 ky = sys.K.dy();
    auto slope = [&](double y) { return -kx(x, y) / ky(x, y); };
    return {x, r.larger, r.smaller, slope(r.larger), slope(r.smaller)};
}

BranchPoint x_branches(const KernelSystem& sys, double y) {
    auto c = sys.K.in_x(y);
    auto r = ordered_roots(c[0], c[1], c[2]);
    Poly2 kx = sys.K.dx();
    Poly2 ky = sys.K.dy();
    auto slope = [&](double x) { return -ky(x, y) / kx(x, y); };
    return {y, r.larger, r.smaller, slope(r.larger), slope(r.smaller)};
}

double limit_ratio_at(const KernelSystem& sys, double x0, double y0) {
    double kx = sys.K.dx()(x0, y0);
    double ky = sys.K.dy()(x0, y0);
    if (kx == 0.0) throw NumericalError("singular limit: K_x vanishes on the branch");
    // Ratios first: both factors grow like x0^2 far down the ladder.
    return (y0 / x0) * (y0 / x0) * (ky / -kx);
}

double branch_limit_ratio(const KernelSystem& sys, double x0, Branch branch, double beta) {
    auto bp = y_branches(sys, x0);
    double y = branch == Branch::Plus ? bp.plus : bp.minus;
    if (std::abs(y * beta - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "beta " << beta << " is not on the requested branch at x = " << x0 << " (branch y = "
           << y << ")";
        throw NumericalError(os.str());
    }
    return limit_ratio_at(sys, x0, y);
}

}  // namespace qpwalk
