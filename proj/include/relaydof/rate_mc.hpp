#pragma once

#include <cstdint>
#include <vector>

#include "relaydof/dof_engine.hpp"
#include "relaydof/scenario.hpp"

namespace relaydof {

struct RatePoint {
  double snr_db = 0;
  double rate = 0;  // bits per slot, averaged over the super-interval
  int trials = 0;
  double std_err = 0;
};

// Monte Carlo achievable-rate estimate: Gaussian-input log-det over the data
// slots with the pilot-estimated equivalent channel treated as true, divided
// by the super-interval length. Deterministic in the seed; trials run in
// parallel and are merged with pairwise summation.
RatePoint estimate_rate(const Scenario& s, SchemeId scheme, double snr_db, int trials,
                        std::uint64_t seed, bool gaussian_payload = false);

struct SlopeFit {
  double slope = 0;
  double residual = 0;  // rms of fit residuals
};

// Least-squares slope of rate against log2(snr); the DoF estimate.
SlopeFit estimate_dof_slope(const std::vector<RatePoint>& points);

}  // namespace relaydof
