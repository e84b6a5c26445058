#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "qpwalk/model.hpp"

namespace qpwalk {

/// Parses the model format: an object with keys "interior", "horizontal",
/// "vertical" and "origin", each mapping step strings "s,t" to rates.
/// Unknown keys are rejected; absent steps are zero.
RateStencil stencil_from_json(const nlohmann::json& j);
nlohmann::json stencil_to_json(const RateStencil& stencil);

RateStencil load_stencil(const std::filesystem::path& path);

}  // namespace qpwalk
