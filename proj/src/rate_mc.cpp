#include "relaydof/rate_mc.hpp"

#include <cmath>

#include "relaydof/frame_plan.hpp"
#include "relaydof/link_sim.hpp"
#include "relaydof/util.hpp"

namespace relaydof {

RatePoint estimate_rate(const Scenario& s, SchemeId scheme, double snr_db, int trials,
                        std::uint64_t seed, bool gaussian_payload) {
  if (trials < 1) throw std::invalid_argument("estimate_rate requires trials >= 1");
  RatePoint pt;
  pt.snr_db = snr_db;
  pt.trials = trials;
  const double snr = std::pow(10.0, snr_db / 10.0);
  if (snr <= 0) return pt;

  const FramePlan plan = build_frame_plan(s, scheme);
  std::vector<double> rates(trials, 0.0);
  parallel_for(trials, [&](std::size_t i) {
    const std::uint64_t trial_seed = mix_seed(seed, i);
    const ChannelRealization ch = sample_channels(s, trial_seed, 2);
    const PayloadSet payload = make_payload(plan, 2, trial_seed, gaussian_payload);
    SimOptions opt;
    opt.snr = snr;
    opt.noiseless = false;
    opt.seed = trial_seed;
    opt.collect_equivalents = true;
    const SimResult sim = run_end_to_end(plan, payload, opt, ch);
    double bits = 0;
    for (const CMat& e : sim.equivalents) bits += log2det_i_plus_aah(e);
    rates[i] = bits / static_cast<double>(plan.super_interval);
  });

  pt.rate = pairwise_sum(rates) / trials;
  if (trials > 1) {
    double ss = 0;
    for (const double r : rates) ss += (r - pt.rate) * (r - pt.rate);
    pt.std_err = std::sqrt(ss / (trials - 1)) / std::sqrt(static_cast<double>(trials));
  }
  return pt;
}

SlopeFit estimate_dof_slope(const std::vector<RatePoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("slope fit needs at least two rate points");
  const double log2_10 = std::log2(10.0);
  double mx = 0, my = 0;
  for (const auto& p : points) {
    mx += p.snr_db * log2_10 / 10.0;
    my += p.rate;
  }
  mx /= points.size();
  my /= points.size();
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double x = p.snr_db * log2_10 / 10.0 - mx;
    sxx += x * x;
    sxy += x * (p.rate - my);
  }
  if (sxx == 0) throw std::invalid_argument("slope fit needs distinct SNR points");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double rss = 0;
  for (const auto& p : points) {
    const double x = p.snr_db * log2_10 / 10.0 - mx;
    const double r = p.rate - (my + fit.slope * x);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / points.size());
  return fit;
}

}  // namespace relaydof
