#include "qpwalk/model_io.hpp"

#include <charconv>
#include <fstream>

#include "qpwalk/errors.hpp"

namespace qpwalk {

namespace {

constexpr const char* kClasses[] = {"interior", "horizontal", "vertical", "origin"};

template <class Stencil>
auto& class_ref(Stencil& st, int i) {
    switch (i) {
        case 0: return st.interior;
        case 1: return st.horizontal;
        case 2: return st.vertical;
        default: return st.origin;
    }
}

int parse_component(std::string_view text, const std::string& key) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < -1 || value > 1) {
        throw ValidationError("bad step key \"" + key + "\"; expected \"s,t\" with s,t in {-1,0,1}");
    }
    return value;
}

std::pair<int, int> parse_step(const std::string& key) {
    auto comma = key.find(',');
    if (comma == std::string::npos) {
        throw ValidationError("bad step key \"" + key + "\"; expected \"s,t\"");
    }
    std::string_view sv(key);
    return {parse_component(sv.substr(0, comma), key), parse_component(sv.substr(comma + 1), key)};
}

}  // namespace

RateStencil stencil_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("model must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* c : kClasses) known = known || key == c;
        if (!known) throw ValidationError("unknown model key \"" + key + "\"");
    }
    RateStencil st;
    for (int i = 0; i < 4; ++i) {
        if (!j.contains(kClasses[i])) continue;
        const auto& cls = j.at(kClasses[i]);
        if (!cls.is_object()) {
            throw ValidationError(std::string("\"") + kClasses[i] + "\" must be an object");
        }
        for (const auto& [key, val] : cls.items()) {
            auto [s, t] = parse_step(key);
            if (!val.is_number()) {
                throw ValidationError(std::string(kClasses[i]) + " \"" + key + "\" is not a number");
            }
            class_ref(st, i).set(s, t, val.get<double>());
        }
    }
    return st;
}

nlohmann::json stencil_to_json(const RateStencil& st) {
    nlohmann::json j = nlohmann::json::object();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json cls = nlohmann::json::object();
        const StepRates& r = class_ref(st, i);
        for (int s = -1; s <= 1; ++s) {
            for (int t = -1; t <= 1; ++t) {
                if (r(s, t) != 0.0) cls[std::to_string(s) + "," + std::to_string(t)] = r(s, t);
            }
        }
        j[kClasses[i]] = cls;
    }
    return j;
}

RateStencil load_stencil(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model file " + path.string() + ": " + e.what());
    }
    return stencil_from_json(j);
}

}  // namespace qpwalk
