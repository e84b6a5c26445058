#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <vector>

#include "qpwalk/model.hpp"

namespace qpwalk {

class SpectralSolution;

/// The walk restricted to the box 0 <= n, m <= L, with transitions that
/// would leave the box removed and the diagonal adjusted.
struct TruncatedChain {
    int L = 0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> Q;
    std::vector<char> retained;  ///< states reachable from the origin
    bool irreducible = false;    ///< every retained state reaches the origin
    double max_rate = 0.0;

    int index(int n, int m) const { return n * (L + 1) + m; }
    int states() const { return (L + 1) * (L + 1); }
};

/// Throws ValidationError for L < 2 or bad rates.
TruncatedChain build_truncated(const RateStencil& stencil, int L);

/// Stationary law on the box, row-major in (n, m); zero off the retained set.
struct OracleSolution {
    int L = 0;
    std::vector<double> pi;
    double residual = 0.0;  ///< |pi Q|_inf / max rate

    double at(int n, int m) const { return pi[n * (L + 1) + m]; }
};

/// Throws NumericalError if the chain is reducible or the residual target
/// is missed.
OracleSolution stationary(const TruncatedChain& chain, double residual_target = 1e-12);

struct CompareReport {
    double tv = 0.0;
    double max_rel = 0.0;
    int worst_n = 0;
    int worst_m = 0;
};

using Measure = std::function<double(int, int)>;

/// Total variation of the two measures restricted to n, m <= W and
/// renormalized there, plus cell-wise relative error against b.
CompareReport compare(const Measure& a, const Measure& b, int W);
CompareReport compare(const SpectralSolution& sol, const OracleSolution& oracle, int W);

struct BalanceReport {
    double interior = 0.0;
    double horizontal = 0.0;
    double vertical = 0.0;
    double origin = 0.0;
    double max() const;
};

/// Largest relative imbalance |out - in| / max(out, in) of the balance
/// equations at states n, m <= W.
BalanceReport balance_residual(const Measure& pi, const RateStencil& stencil, int W);
BalanceReport balance_residual(const SpectralSolution& sol, int W);

}  // namespace qpwalk
