#pragma once

#include <cstdint>

#include "qpwalk/model.hpp"

namespace qpwalk {

/// Two-server join-the-shortest-queue with arrival rate 2 rho and unit
/// service rates, folded so that n = min(q1, q2) and m = |q1 - q2|.
RateStencil jsq_stencil(double rho);

/// Random valid stencil whose ergodicity verdict equals `ergodic`.
/// Deterministic per seed. Throws NumericalError if the rejection budget
/// runs out.
RateStencil random_stencil(std::uint64_t seed, bool ergodic);

/// Random valid stencil with no ergodicity requirement (M != 0).
RateStencil random_valid_stencil(std::uint64_t seed);

/// Random ergodic stencil whose equilibrium is a single series of product
/// forms valid at every state except the origin. The interior and
/// boundary rates are drawn; the origin rates are then chosen to close the
/// balance equations at (0,1), (1,0) and (1,1).
RateStencil random_product_form_stencil(std::uint64_t seed);

}  // namespace qpwalk
