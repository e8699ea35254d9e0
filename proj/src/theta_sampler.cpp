#include "trifpp/theta_sampler.hpp"

#include "trifpp/exact_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trifpp {

namespace {

constexpr std::int64_t kMaxDraw = std::int64_t{1} << 62;

double survival(std::int64_t k, bool size_biased) {
  return size_biased ? theta_sizebiased_survival(k) : theta_survival(k);
}

}  // namespace

std::int64_t invert_survival(double u, bool size_biased) {
  const LawTables& t = LawTables::instance();
  const auto& s = size_biased ? t.sizebiased_survival_head() : t.survival_head();
  if (u > s.back()) {
    // first index with s[k] < u; answer is the one before it
    auto it = std::partition_point(s.begin(), s.end(), [u](double v) { return v >= u; });
    return static_cast<std::int64_t>(it - s.begin()) - 1;
  }
  // Tail: bracket by doubling, then bisect on the closed-form survival.
  std::int64_t lo = static_cast<std::int64_t>(s.size()) - 1;  // survival(lo) >= u
  std::int64_t hi = lo * 2;
  while (survival(hi, size_biased) >= u) {
    lo = hi;
    if (hi == kMaxDraw) return kMaxDraw;
    hi = hi >= kMaxDraw / 2 ? kMaxDraw : hi * 2;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (survival(mid, size_biased) >= u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::int64_t sample_theta(Rng& rng) {
  double u = uniform_open(rng);
  if (u > 0.25) return 0;  // P(theta >= 1) = 1/4
  if (u > 0.125) return 1;  // P(theta >= 2) = 1/8
  return invert_survival(u, false);
}

std::int64_t sample_theta_sizebiased(Rng& rng) {
  double u = uniform_open(rng);
  if (u > 0.875) return 1;  // P(theta_bar >= 2) = 7/8
  return invert_survival(u, true);
}

}  // namespace trifpp
