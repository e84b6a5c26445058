#include "qpwalk/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpwalk/errors.hpp"

namespace qpwalk {

std::size_t StepRates::index(int s, int t) {
    if (s < -1 || s > 1 || t < -1 || t > 1) {
        throw ValidationError("step out of range: (" + std::to_string(s) + "," +
                              std::to_string(t) + ")");
    }
    return static_cast<std::size_t>((s + 1) * 3 + (t + 1));
}

void StepRates::set(int s, int t, double rate) {
    if (s == 0 && t == 0) {
        throw ValidationError("step (0,0) carries no rate");
    }
    if (!std::isfinite(rate) || rate < 0.0) {
        std::ostringstream os;
        os << "rate for step (" << s << "," << t << ") must be finite and >= 0, got " << rate;
        throw ValidationError(os.str());
    }
    rates_[index(s, t)] = rate;
}

double StepRates::total() const {
    double sum = 0.0;
    for (double r : rates_) sum += r;
    return sum;
}

StepRates StepRates::scaled(double c) const {
    StepRates out;
    for (std::size_t i = 0; i < rates_.size(); ++i) out.rates_[i] = c * rates_[i];
    return out;
}

const StepRates& RateStencil::at_state(int n, int m) const {
    if (n > 0 && m > 0) return interior;
    if (n > 0) return horizontal;
    if (m > 0) return vertical;
    return origin;
}

RateStencil RateStencil::scaled(double c) const {
    return {interior.scaled(c), horizontal.scaled(c), vertical.scaled(c), origin.scaled(c)};
}

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::InteriorForbiddenStep: return "interior-forbidden-step";
        case Condition::HorizontalDownwardStep: return "horizontal-downward-step";
        case Condition::VerticalLeftwardStep: return "vertical-leftward-step";
        case Condition::OriginOutsideQuadrant: return "origin-outside-quadrant";
        case Condition::SouthRate: return "south-rate";
        case Condition::WestRate: return "west-rate";
        case Condition::HorizontalReflecting: return "horizontal-reflecting";
        case Condition::VerticalReflecting: return "vertical-reflecting";
        case Condition::OriginExit: return "origin-exit";
    }
    return "unknown";
}

namespace {

void check_rates(const StepRates& r, const char* name) {
    for (int s = -1; s <= 1; ++s) {
        for (int t = -1; t <= 1; ++t) {
            double v = r(s, t);
            if (!std::isfinite(v) || v < 0.0) {
                std::ostringstream os;
                os << name << " rate (" << s << "," << t << ") must be finite and >= 0";
                throw ValidationError(os.str());
            }
        }
    }
}

std::string step_list(const StepRates& r, const std::vector<std::pair<int, int>>& steps) {
    std::ostringstream os;
    bool first = true;
    for (auto [s, t] : steps) {
        if (r(s, t) != 0.0) {
            os << (first ? "" : " ") << "(" << s << "," << t << ")=" << r(s, t);
            first = false;
        }
    }
    return os.str();
}

}  // namespace

ValidationReport validate(const RateStencil& st) {
    check_rates(st.interior, "interior");
    check_rates(st.horizontal, "horizontal");
    check_rates(st.vertical, "vertical");
    check_rates(st.origin, "origin");

    ValidationReport report;
    const auto& q = st.interior;
    const auto& h = st.horizontal;
    const auto& v = st.vertical;
    const auto& r = st.origin;

    if (q(0, 1) != 0.0 || q(1, 1) != 0.0 || q(1, 0) != 0.0) {
        report.push_back({Condition::InteriorForbiddenStep,
                          step_list(q, {{0, 1}, {1, 1}, {1, 0}})});
    }
    if (h(-1, -1) != 0.0 || h(0, -1) != 0.0 || h(1, -1) != 0.0) {
        report.push_back({Condition::HorizontalDownwardStep,
                          step_list(h, {{-1, -1}, {0, -1}, {1, -1}})});
    }
    if (v(-1, -1) != 0.0 || v(-1, 0) != 0.0 || v(-1, 1) != 0.0) {
        report.push_back({Condition::VerticalLeftwardStep,
                          step_list(v, {{-1, -1}, {-1, 0}, {-1, 1}})});
    }
    if (r(-1, -1) != 0.0 || r(-1, 0) != 0.0 || r(-1, 1) != 0.0 || r(0, -1) != 0.0 ||
        r(1, -1) != 0.0) {
        report.push_back({Condition::OriginOutsideQuadrant,
                          step_list(r, {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {1, -1}})});
    }
    if (!(q(-1, -1) + q(0, -1) + q(1, -1) > 0.0)) {
        report.push_back({Condition::SouthRate, "interior south total is 0"});
    }
    if (!(q(-1, -1) + q(-1, 0) + q(-1, 1) > 0.0)) {
        report.push_back({Condition::WestRate, "interior west total is 0"});
    }
    if (!(h(-1, 1) + h(0, 1) + h(1, 1) > 0.0)) {
        report.push_back({Condition::HorizontalReflecting, "horizontal upward total is 0"});
    }
    if (!(v(1, 1) + v(1, 0) + v(1, -1) > 0.0)) {
        report.push_back({Condition::VerticalReflecting, "vertical rightward total is 0"});
    }
    if (!(r(0, 1) + r(1, 1) + r(1, 0) > 0.0)) {
        report.push_back({Condition::OriginExit, "origin exit total is 0"});
    }
    return report;
}

void require_valid(const RateStencil& stencil) {
    auto report = validate(stencil);
    if (report.empty()) return;
    std::ostringstream os;
    os << "invalid stencil:";
    for (const auto& v : report) {
        os << " [" << to_string(v.condition);
        if (!v.detail.empty()) os << ": " << v.detail;
        os << "]";
    }
    throw ValidationError(os.str());
}

double uniformization_bound(const RateStencil& st) {
    return std::max({st.interior.total(), st.horizontal.total(), st.vertical.total(),
                     st.origin.total()});
}

}  // namespace qpwalk
