#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace qpwalk {

/// Transition rates of one state class, indexed by the step (s, t) with
/// s, t in {-1, 0, 1}. s moves the first coordinate n, t the second m.
/// The (0, 0) entry is always zero.
class StepRates {
public:
    StepRates() = default;

    double operator()(int s, int t) const { return rates_[index(s, t)]; }
    void set(int s, int t, double rate);

    /// Exit rate of a state in this class.
    double total() const;
    StepRates scaled(double c) const;

    bool operator==(const StepRates&) const = default;

private:
    static std::size_t index(int s, int t);
    std::array<double, 9> rates_{};
};

struct RateStencil {
    StepRates interior;    ///< q, states n > 0, m > 0
    StepRates horizontal;  ///< h, states (n, 0), n > 0
    StepRates vertical;    ///< v, states (0, m), m > 0
    StepRates origin;      ///< r, state (0, 0)

    /// Rates that apply at state (n, m).
    const StepRates& at_state(int n, int m) const;
    RateStencil scaled(double c) const;

    bool operator==(const RateStencil&) const = default;
};

enum class Condition {
    InteriorForbiddenStep,   ///< no interior steps to N, NE, E
    HorizontalDownwardStep,  ///< h has no t = -1 steps
    VerticalLeftwardStep,    ///< v has no s = -1 steps
    OriginOutsideQuadrant,   ///< r only has (0,1), (1,1), (1,0)
    SouthRate,               ///< q(-1,-1) + q(0,-1) + q(1,-1) > 0
    WestRate,                ///< q(-1,-1) + q(-1,0) + q(-1,1) > 0
    HorizontalReflecting,    ///< h(-1,1) + h(0,1) + h(1,1) > 0
    VerticalReflecting,      ///< v(1,1) + v(1,0) + v(1,-1) > 0
    OriginExit,              ///< r(0,1) + r(1,1) + r(1,0) > 0
};

std::string_view to_string(Condition c);

struct Violation {
    Condition condition;
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// Structural and non-degeneracy checks. An empty report means valid.
/// Throws ValidationError when a rate is negative or not finite.
ValidationReport validate(const RateStencil& stencil);

/// Throws ValidationError listing every violation if the report is not empty.
void require_valid(const RateStencil& stencil);

/// Largest per-class exit rate; bounds the exit rate of every state.
double uniformization_bound(const RateStencil& stencil);

}  // namespace qpwalk
