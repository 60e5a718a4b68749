#pragma once

#include "kothe/duality.hpp"

namespace kothe::detail {

struct AmemiyaMin {
  double value;
  double beta;
};

/// Amemiya value together with the minimizing beta (0 for y = 0).
AmemiyaMin amemiya(const FiniteProbSpace& space, const Rv& y, const MusielakFamily& family);

/// polar_gauge with explicit options for the numerical fallback.
Gauge polar_gauge_with(const FiniteProbSpace& space, const SeminormSpec& spec, const PolarOptions& options);

}  // namespace kothe::detail
