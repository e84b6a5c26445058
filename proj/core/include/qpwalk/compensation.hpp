#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qpwalk/kernel.hpp"

namespace qpwalk {

enum class StopReason { Converged, TermLimit, AlphaFloor };

std::string to_string(StopReason r);

struct LadderOptions {
    int max_terms = 64;             ///< number of (alpha, beta) pairs at most
    double contribution_tol = 1e-17;  ///< stop once both boundary terms fall below this, relative to the head
    double alpha_floor = 1e-60;
    int depth = 8;                  ///< eigenvector entries kept per row, m = 0..depth
    double p00 = 1.0;
};

/// Series of product forms for one starting pair.
///
///   pi(0,m) = sum d_k beta_k^m,  pi(n,0) = sum e_k alpha_k^n
///   pi(n,m) = sum alpha_k^n p(k,m) for n, m > 0
///   p(0,m)  = c_0 beta_0^m,  p(k,m) = c_k beta_{k-1}^m + g_k beta_k^m  (g_k = c_k f_k)
struct ProductFormLadder {
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> d;
    std::vector<double> e;
    std::vector<double> c;
    std::vector<double> g;
    std::vector<std::vector<double>> rows;  ///< p(k, 0..depth)
    double beta_minus1 = 0.0;  ///< 1/y-(1/alpha_0), the common root with A
    double head_spurious = 0.0;  ///< relative weight of beta_minus1 in row 0
    int requested_terms = 0;
    StopReason stop = StopReason::TermLimit;

    std::size_t size() const { return alphas.size(); }
    double f(std::size_t k) const;
    /// p(k, m) from the fitted closed form (m >= 1) or e_k (m = 0).
    double eigvec(std::size_t k, int m) const;
};

enum class Boundary { Horizontal, Vertical };

/// All roots of the resultant that eliminates the common root of K and A
/// (Horizontal, roots in x) or of K and B (Vertical, roots in y).
/// Includes complex roots and the trivial root 1.
std::vector<std::complex<double>> resultant_roots(const KernelSystem& sys, Boundary b);

/// All real x > 1 with a common y-root of K(x, .) and A(x, .), ascending.
std::vector<double> starting_candidates(const KernelSystem& sys);

/// alpha_0 = 1/x for the unique feasible candidate. Throws NumericalError
/// if there is none or more than one.
double find_starting_alpha(const KernelSystem& sys);

/// beta_k = 1/y+(1/alpha_k), alpha_{k+1} = 1/x+(1/beta_k) for k = 0..K,
/// stopping early below alpha_floor. Only alphas and betas are filled.
ProductFormLadder extend_ladder(const KernelSystem& sys, double alpha0, int K,
                                double alpha_floor = 1e-60);

/// Fills d and e by alternately closing the vertical and horizontal
/// boundary equations, starting from e_0 = p00.
void coefficient_recursion(const KernelSystem& sys, ProductFormLadder& ladder, double p00 = 1.0);

/// p(k, 1..M) from power-series coefficient extraction at x = 1/alpha_k.
std::vector<double> eigenvector_tail(const KernelSystem& sys, double alpha_k, double p_k0, int M);

struct ProductFit {
    double c = 0.0;      ///< weight of beta_{k-1}^m (row 0: beta_0^m)
    double g = 0.0;      ///< weight of beta_k^m, equal to c_k f_k (row 0: unused)
    double spurious = 0.0;  ///< row 0 only: relative weight on beta_minus1
};

/// Fits row k from its first two tail entries and validates the fit
/// against the recurrence at m = 3..M. tail holds p(k, 1..M).
ProductFit fit_product_form(const ProductFormLadder& ladder, std::size_t k,
                            const std::vector<double>& tail);

/// find_starting_alpha, then the ladder, coefficients and row fits.
ProductFormLadder solve_ladder(const KernelSystem& sys, const LadderOptions& opts = {});

}  // namespace qpwalk
