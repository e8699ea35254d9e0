#pragma once

#include "trifpp/rng.hpp"

#include <cstdint>

namespace trifpp {

// Exact draw from the critical offspring law theta.
std::int64_t sample_theta(Rng& rng);

// Exact draw from the size-biased law k * theta(k), k >= 1.
std::int64_t sample_theta_sizebiased(Rng& rng);

// Largest k with survival(k) >= u, for a non-increasing survival function. Capped at
// 2^62, which only the size-biased law reaches (u below about 8e-10).
std::int64_t invert_survival(double u, bool size_biased);

}  // namespace trifpp
