#pragma once

#include <array>
#include <string>
#include <vector>

#include "qpwalk/model.hpp"

namespace qpwalk {

/// Polynomial in (x, y) with degree at most 2 in each variable.
class Poly2 {
public:
    struct Term {
        int i;  ///< power of x
        int j;  ///< power of y
        double coef;
    };

    double coef(int i, int j) const { return c_[i * 3 + j]; }
    void add(int i, int j, double v) { c_[i * 3 + j] += v; }

    double operator()(double x, double y) const;
    /// Coefficients (c0, c1, c2) of y^0, y^1, y^2 at fixed x.
    std::array<double, 3> in_y(double x) const;
    /// Coefficients of x^0, x^1, x^2 at fixed y.
    std::array<double, 3> in_x(double y) const;

    Poly2 dx() const;
    Poly2 dy() const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator-() const;

    /// Nonzero terms ordered by total degree, then by x-degree.
    std::vector<Term> terms() const;
    std::string to_string() const;

private:
    std::array<double, 9> c_{};
};

/// xy * (sum x^s y^t rate(s,t) - total) as a polynomial.
Poly2 class_polynomial(const StepRates& rates);

/// The functional-equation polynomials, in x = 1/alpha, y = 1/beta.
///
///   K Pi(x,y) + A Pi(x,0) + B Pi(0,y) + C pi00 = 0
struct KernelSystem {
    RateStencil stencil;
    Poly2 K;
    Poly2 A;
    Poly2 B;
    Poly2 C;
};

/// Throws ValidationError if the stencil is not valid.
KernelSystem build_kernel_system(const RateStencil& stencil);

/// Relative residual of the product-form kernel equation at (alpha, beta).
double kernel_residual(const KernelSystem& sys, double alpha, double beta);

/// Roots of c0 + c1 z + c2 z^2 ordered by modulus, larger first.
/// Throws NumericalError on complex roots or a modulus tie.
struct QuadraticRoots {
    double larger;
    double smaller;
};
QuadraticRoots ordered_roots(double c0, double c1, double c2, double tie_tol = 1e-10);

/// The two roots of K along one variable with implicit derivatives.
struct BranchPoint {
    double arg;
    double plus;    ///< larger modulus, the forward branch
    double minus;   ///< smaller modulus, the backward branch
    double d_plus;  ///< derivative of the plus branch with respect to arg
    double d_minus;
};

/// Roots y of K(x, y) = 0.
BranchPoint y_branches(const KernelSystem& sys, double x);
/// Roots x of K(x, y) = 0.
BranchPoint x_branches(const KernelSystem& sys, double y);

enum class Branch { Plus, Minus };

/// lim_{x->x0} (1/x - 1/x0) / (1/y_b(x) - beta) where y_b(x0) = 1/beta,
/// i.e. y^2 K_y / (x^2 (-K_x)) at (x0, 1/beta).
/// Throws NumericalError if beta does not lie on the branch or K_x = 0.
double branch_limit_ratio(const KernelSystem& sys, double x0, Branch branch, double beta);

/// The same limit at a point (x0, y0) already known to lie on K = 0.
double limit_ratio_at(const KernelSystem& sys, double x0, double y0);

}  // namespace qpwalk
