#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "qpwalk/compensation.hpp"

namespace qpwalk {

struct Evaluation {
    double value;
    double tail_bound;  ///< geometric extrapolation of the omitted ladder terms
};

class SpectralSolution {
public:
    /// Throws NumericalError if some |alpha_k| or |beta_k| >= 1 or the
    /// assembled measure is negative beyond rounding.
    SpectralSolution(ProductFormLadder ladder, RateStencil stencil);

    const ProductFormLadder& ladder() const { return ladder_; }
    const RateStencil& stencil() const { return stencil_; }
    double pi00() const { return pi00_raw_ / mass_; }
    /// Unnormalized total mass with p00 = 1 scaling.
    double mass() const { return mass_; }

    double pi(int n, int m) const;
    Evaluation pi_detailed(int n, int m) const;
    /// Unnormalized series value; (0, 0) gives the origin mass.
    double raw(int n, int m) const;

    /// Generating function, |x|, |y| < 1.
    double pgf(double x, double y) const;

    std::vector<double> level(int n, int phases) const;

private:
    double series(int n, int m, double* tail) const;

    ProductFormLadder ladder_;
    RateStencil stencil_;
    double pi00_raw_ = 0.0;
    double mass_ = 1.0;
};

SpectralSolution assemble(const ProductFormLadder& ladder, const RateStencil& stencil);

/// Convenience: kernel system, ladder and assembly.
SpectralSolution solve(const RateStencil& stencil, const LadderOptions& opts = {});

double pi_eval(const SpectralSolution& sol, int n, int m);
/// Throws ValidationError outside the open unit bidisk.
double pgf_eval(const SpectralSolution& sol, double x, double y);

struct FunctionalResidual {
    double residual;
    double scale;  ///< largest of the four term magnitudes
};

/// K Pi(x,y) + A Pi(x,0) + B Pi(0,y) + C pi00 at a point of the bidisk.
FunctionalResidual functional_equation_residual(const SpectralSolution& sol, double x, double y);

struct TruncatedRateMatrix {
    int N = 0;
    Eigen::VectorXd D;  ///< alpha_0..alpha_{N-1}
    Eigen::MatrixXd P;  ///< row k is p(k, 0..N-1)
    Eigen::MatrixXd R;  ///< P^{-1} D P, so that P R = D P
    double condition = 1.0;
    bool ill_conditioned = false;
};

TruncatedRateMatrix build_RN(const SpectralSolution& sol, int N, double condition_warn = 1e12);

/// max_k |p_k R - alpha_k p_k|_inf / |p_k|_inf
double eigen_row_residual(const TruncatedRateMatrix& rn);

double spectral_radius(const TruncatedRateMatrix& rn);

/// sum_k alpha_k / (alpha - alpha_k) * pi-normalized p(k, 0..phases-1).
/// Throws NumericalError within 1e-10 of a pole.
std::vector<double> resolvent_eval(const SpectralSolution& sol, double alpha, int phases);

/// pi_1 (alpha I - R_N)^{-1} by a direct linear solve.
std::vector<double> resolvent_direct(const SpectralSolution& sol, const TruncatedRateMatrix& rn,
                                     double alpha);

}  // namespace qpwalk
