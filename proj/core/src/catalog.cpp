#include "qpwalk/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qpwalk/compensation.hpp"
#include "qpwalk/errors.hpp"
#include "qpwalk/oracle.hpp"
#include "qpwalk/spectral.hpp"
#include "qpwalk/stability.hpp"

namespace qpwalk {

RateStencil jsq_stencil(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be > 0");
    RateStencil st;
    st.interior.set(1, -1, 2.0 * rho);
    st.interior.set(0, -1, 1.0);
    st.interior.set(-1, 1, 1.0);
    st.horizontal.set(0, 1, 2.0 * rho);
    st.horizontal.set(-1, 1, 2.0);
    st.vertical.set(1, -1, 2.0 * rho);
    st.vertical.set(0, -1, 1.0);
    st.origin.set(0, 1, 2.0 * rho);
    return st;
}

namespace {

using Steps = std::vector<std::pair<int, int>>;

const Steps kInterior = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {1, -1}};
const Steps kHorizontal = {{-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}};
const Steps kVertical = {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}};
const Steps kOrigin = {{0, 1}, {1, 1}, {1, 0}};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    StepRates draw(const Steps& steps, double p) {
        StepRates r;
        for (auto [s, t] : steps)
            if (uniform() < p) r.set(s, t, uniform(0.1, 2.0));
        return r;
    }

private:
    std::mt19937_64 rng_;
};

RateStencil draw_valid(Sampler& rng) {
    for (;;) {
        RateStencil st{rng.draw(kInterior, 0.6), rng.draw(kHorizontal, 0.6),
                       rng.draw(kVertical, 0.6), rng.draw(kOrigin, 0.6)};
        if (!validate(st).empty()) continue;
        Drift m = drift_vectors(st).interior;
        if (m.x == 0.0 && m.y == 0.0) continue;
        return st;
    }
}

[[noreturn]] void exhausted(const char* what, std::uint64_t seed) {
    std::ostringstream os;
    os << what << ": rejection budget exhausted for seed " << seed;
    throw NumericalError(os.str());
}

// Imbalance out - in at state (n, m) under the series, ignoring inflow from
// the origin.
double deficit(const SpectralSolution& sol, const RateStencil& st, int n, int m) {
    double out = st.at_state(n, m).total() * sol.raw(n, m);
    double in = 0.0;
    for (int s = -1; s <= 1; ++s) {
        for (int t = -1; t <= 1; ++t) {
            int a = n - s, b = m - t;
            if (a < 0 || b < 0 || (s == 0 && t == 0) || (a == 0 && b == 0)) continue;
            in += st.at_state(a, b)(s, t) * sol.raw(a, b);
        }
    }
    return out - in;
}

}  // namespace

RateStencil random_valid_stencil(std::uint64_t seed) {
    Sampler rng(seed);
    return draw_valid(rng);
}

RateStencil random_stencil(std::uint64_t seed, bool ergodic) {
    Sampler rng(seed);
    for (int tries = 0; tries < 100000; ++tries) {
        RateStencil st = draw_valid(rng);
        if (is_ergodic(st).ergodic == ergodic) return st;
    }
    exhausted("random_stencil", seed);
}

RateStencil random_product_form_stencil(std::uint64_t seed) {
    Sampler rng(seed);
    for (int tries = 0; tries < 2000000; ++tries) {
        RateStencil st;
        st.interior = rng.draw({{-1, 0}, {-1, -1}, {0, -1}}, 0.6);
        st.interior.set(-1, 1, rng.uniform(0.1, 2.0));
        st.interior.set(1, -1, rng.uniform(0.1, 2.0));
        st.horizontal = rng.draw(kHorizontal, 0.5);
        st.vertical = rng.draw(kVertical, 0.5);
        st.origin.set(0, 1, 1.0);  // placeholder; the series does not depend on it
        if (!validate(st).empty()) continue;
        if (!is_ergodic(st).ergodic) continue;

        try {
            auto sys = build_kernel_system(st);
            // A second family of product forms from the vertical boundary
            // would appear as a common root of K and B outside the unit disk.
            bool extra = false;
            for (auto y : resultant_roots(sys, Boundary::Vertical))
                extra = extra || std::abs(y) > 1.0 + 1e-9;
            if (extra) continue;
            int outside = 0;
            bool real_positive = true;
            for (auto x : resultant_roots(sys, Boundary::Horizontal)) {
                if (std::abs(x) <= 1.0 + 1e-9) continue;
                ++outside;
                real_positive = real_positive && std::abs(x.imag()) <= 1e-9 && x.real() > 1.0;
            }
            if (outside != 1 || !real_positive) continue;

            SpectralSolution trial = assemble(solve_ladder(sys), st);
            const int states[3][2] = {{0, 1}, {1, 1}, {1, 0}};
            double D[3], total = 0.0, scale = 0.0;
            for (int i = 0; i < 3; ++i) {
                D[i] = deficit(trial, st, states[i][0], states[i][1]);
                total += D[i];
                scale = std::max(scale, st.at_state(states[i][0], states[i][1]).total() *
                                            trial.raw(states[i][0], states[i][1]));
            }
            if (!(total > 0.0)) continue;
            if (*std::min_element(D, D + 3) < -1e-12 * scale) continue;

            double pi00 = total / rng.uniform(0.5, 3.0);
            st.origin = StepRates{};
            for (int i = 0; i < 3; ++i)
                if (D[i] > 1e-14 * total) st.origin.set(states[i][0], states[i][1], D[i] / pi00);
            if (!validate(st).empty()) continue;
            if (!build_truncated(st, 8).irreducible) continue;
            solve(st);
            return st;
        } catch (const NumericalError&) {
            continue;
        }
    }
    exhausted("random_product_form_stencil", seed);
}

}  // namespace qpwalk
