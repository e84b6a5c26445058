#include "qpwalk/stability.hpp"

#include <algorithm>
#include <cmath>

#include "qpwalk/errors.hpp"

namespace qpwalk {

std::string to_string(ErgodicCase c) {
    switch (c) {
        case ErgodicCase::I: return "i";
        case ErgodicCase::II: return "ii";
        case ErgodicCase::III: return "iii";
        case ErgodicCase::None: break;
    }
    return "none";
}

namespace {

// Differences of rate sums that cancel analytically come out as a few ulps
// of either sign; those are ties.
constexpr double kTieTol = 1e-12;

double snap(double v, double scale) { return std::abs(v) <= kTieTol * scale ? 0.0 : v; }

bool strictly_less(double a, double b) { return snap(a - b, std::max(std::abs(a), std::abs(b))) < 0.0; }

Drift mean_jump(const StepRates& r) {
    Drift d;
    for (int s = -1; s <= 1; ++s) {
        for (int t = -1; t <= 1; ++t) {
            d.x += s * r(s, t);
            d.y += t * r(s, t);
        }
    }
    d.x = snap(d.x, r.total());
    d.y = snap(d.y, r.total());
    return d;
}

double cross(double a, double b, double c, double d) { return snap(a * b - c * d, std::abs(a * b) + std::abs(c * d)); }

// Mass at phase 0 of the birth-death chain with birth rate b0 from phase 0,
// birth rate b from phases >= 1 and death rate mu; requires b < mu.
double phase_zero_mass(double b0, double b, double mu) {
    double tail = (b0 / mu) / (1.0 - b / mu);
    return 1.0 / (1.0 + tail);
}

}  // namespace

double DriftVectors::horizontal_cross() const {
    return cross(interior.x, horizontal.y, interior.y, horizontal.x);
}

double DriftVectors::vertical_cross() const {
    return cross(interior.y, vertical.x, interior.x, vertical.y);
}

DriftVectors drift_vectors(const RateStencil& st) {
    return {mean_jump(st.interior), mean_jump(st.horizontal), mean_jump(st.vertical)};
}

QbdCheck qbd_drift_check(const RateStencil& st) {
    const auto& q = st.interior;
    const auto& h = st.horizontal;
    const auto& v = st.vertical;
    double south = q(-1, -1) + q(0, -1) + q(1, -1);
    double west = q(-1, -1) + q(-1, 0) + q(-1, 1);

    QbdCheck out;
    out.horizontal_phase_ergodic = strictly_less(q(-1, 1), south);
    out.vertical_phase_ergodic = strictly_less(q(1, -1), west);

    if (out.horizontal_phase_ergodic) {
        double x0 = phase_zero_mass(h(-1, 1) + h(0, 1) + h(1, 1), q(-1, 1), south);
        out.horizontal_up = x0 * (h(1, 0) + h(1, 1)) + (1.0 - x0) * (q(1, -1) + q(1, 0) + q(1, 1));
        out.horizontal_down = x0 * (h(-1, 0) + h(-1, 1)) + (1.0 - x0) * west;
        out.horizontal_drift = strictly_less(out.horizontal_up, out.horizontal_down);
    }
    if (out.vertical_phase_ergodic) {
        double x0 = phase_zero_mass(v(1, -1) + v(1, 0) + v(1, 1), q(1, -1), west);
        out.vertical_up = x0 * (v(0, 1) + v(1, 1)) + (1.0 - x0) * (q(-1, 1) + q(0, 1) + q(1, 1));
        out.vertical_down = x0 * (v(0, -1) + v(1, -1)) + (1.0 - x0) * south;
        out.vertical_drift = strictly_less(out.vertical_up, out.vertical_down);
    }

    if (out.vertical_phase_ergodic && out.horizontal_phase_ergodic) {
        out.verdict = out.horizontal_drift && out.vertical_drift;
    } else if (out.vertical_phase_ergodic) {
        out.verdict = out.vertical_drift;
    } else if (out.horizontal_phase_ergodic) {
        out.verdict = out.horizontal_drift;
    }
    return out;
}

StabilityVerdict is_ergodic(const RateStencil& st) {
    require_valid(st);
    StabilityVerdict out;
    out.drifts = drift_vectors(st);
    out.mx = out.drifts.interior.x;
    out.my = out.drifts.interior.y;
    if (out.mx == 0.0 && out.my == 0.0) {
        throw ValidationError("zero-drift unsupported: interior drift M = (0,0)");
    }
    out.horizontal_cross = out.drifts.horizontal_cross();
    out.vertical_cross = out.drifts.vertical_cross();

    const double c3 = out.horizontal_cross;
    const double c4 = out.vertical_cross;
    if (out.mx < 0.0 && out.my < 0.0) {
        out.which = ErgodicCase::I;
        out.ergodic = c3 < 0.0 && c4 < 0.0;
        out.boundary_case = (c3 == 0.0 && c4 <= 0.0) || (c4 == 0.0 && c3 <= 0.0);
    } else if (out.mx < 0.0) {
        out.which = ErgodicCase::II;
        out.ergodic = c4 < 0.0;
        out.boundary_case = c4 == 0.0;
    } else if (out.my < 0.0) {
        out.which = ErgodicCase::III;
        out.ergodic = c3 < 0.0;
        out.boundary_case = c3 == 0.0;
    } else {
        out.which = ErgodicCase::None;
        out.boundary_case = out.mx == 0.0 || out.my == 0.0;
    }
    if (out.boundary_case) {
        out.note = "boundary case: a required strict inequality holds with equality";
    }

    out.qbd = qbd_drift_check(st);
    out.agreement = out.qbd.verdict == out.ergodic;
    return out;
}

}  // namespace qpwalk
