#pragma once

#include <string>

#include "qpwalk/model.hpp"

namespace qpwalk {

struct Drift {
    double x = 0.0;
    double y = 0.0;
};

/// Mean jump vectors in rate units: M for the interior, M' for the
/// horizontal boundary, M'' for the vertical boundary.
struct DriftVectors {
    Drift interior;
    Drift horizontal;
    Drift vertical;

    /// Mx*M'y - My*M'x
    double horizontal_cross() const;
    /// My*M''x - Mx*M''y
    double vertical_cross() const;
};

enum class ErgodicCase { None, I, II, III };

std::string to_string(ErgodicCase c);

/// Drift check through the two level-structured views of the walk.
///
/// The H view takes n as level and m as phase; its phase process is a
/// birth-death chain on m that is ergodic iff q(-1,1) is below the south
/// total. The V view swaps the roles. When a phase process is ergodic, its
/// geometric stationary vector x gives the level drift comparison
/// x A1 1 < x A-1 1.
struct QbdCheck {
    bool horizontal_phase_ergodic = false;  ///< q(-1,1) < q(-1,-1)+q(0,-1)+q(1,-1)
    bool vertical_phase_ergodic = false;    ///< q(1,-1) < q(-1,-1)+q(-1,0)+q(-1,1)
    bool horizontal_drift = false;          ///< valid only if horizontal_phase_ergodic
    bool vertical_drift = false;            ///< valid only if vertical_phase_ergodic
    double horizontal_up = 0.0;             ///< x^H A1^H 1
    double horizontal_down = 0.0;           ///< x^H A-1^H 1
    double vertical_up = 0.0;               ///< x^V A1^V 1
    double vertical_down = 0.0;             ///< x^V A-1^V 1
    bool verdict = false;                   ///< ergodicity assembled from the four flags
};

struct StabilityVerdict {
    bool ergodic = false;
    ErgodicCase which = ErgodicCase::None;
    bool boundary_case = false;  ///< some required quantity is exactly zero
    DriftVectors drifts;
    double mx = 0.0;
    double my = 0.0;
    double horizontal_cross = 0.0;
    double vertical_cross = 0.0;
    QbdCheck qbd;
    bool agreement = false;  ///< ergodic == qbd.verdict
    std::string note;
};

DriftVectors drift_vectors(const RateStencil& stencil);

QbdCheck qbd_drift_check(const RateStencil& stencil);

/// Ergodicity from the sign conditions on M, M', M''. Throws
/// ValidationError for an invalid stencil or when M = 0. Drift components,
/// cross products and the QBD comparisons within 1e-12 (relative) of zero
/// are treated as zero.
StabilityVerdict is_ergodic(const RateStencil& stencil);

}  // namespace qpwalk
