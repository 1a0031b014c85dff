#include <cstddef>

#include "dephasim/influence.hpp"

namespace dephasim {

std::vector<InfluenceResult> compute_influence_batch(std::span<const DetectorSetup> setups) {
  for (const auto& s : setups) validate(s);
  std::vector<InfluenceResult> out(setups.size());
  const auto count = static_cast<std::ptrdiff_t>(setups.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = compute_influence(setups[i]);
  }
  return out;
}

namespace serial {

std::vector<InfluenceResult> compute_influence_batch(std::span<const DetectorSetup> setups) {
  std::vector<InfluenceResult> out;
  out.reserve(setups.size());
  for (const auto& s : setups) out.push_back(compute_influence(s));
  return out;
}

}  // namespace serial
}  // namespace dephasim
