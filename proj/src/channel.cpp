#include "relaydof/channel.hpp"

#include <cmath>

#include "relaydof/util.hpp"

namespace relaydof {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t entry_key(std::uint64_t seed, std::uint64_t tag, std::int64_t block, std::int64_t i,
                        std::int64_t j) {
  std::uint64_t h = mix_seed(seed, tag);
  h = mix_seed(h, static_cast<std::uint64_t>(block) + 0x1000000000ULL);
  h = mix_seed(h, static_cast<std::uint64_t>(i) * 0x10001ULL + static_cast<std::uint64_t>(j));
  return h;
}

double to_unit_open(std::uint64_t x) {  // (0, 1]
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

cplx counter_gaussian(std::uint64_t seed, std::uint64_t tag, std::int64_t block, std::int64_t i,
                      std::int64_t j) {
  const std::uint64_t k = entry_key(seed, tag, block, i, j);
  const double u1 = to_unit_open(k);
  const double u2 = to_unit_open(splitmix64(k));
  const double r = std::sqrt(-std::log(u1));  // E[r^2] = 1: CN(0,1)
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

cplx counter_phase(std::uint64_t seed, std::uint64_t tag, std::int64_t block, std::int64_t i,
                   std::int64_t j) {
  const double u = to_unit_open(entry_key(seed, tag, block, i, j));
  return {std::cos(kTwoPi * u), std::sin(kTwoPi * u)};
}

ChannelRealization::ChannelRealization(Scenario s, std::uint64_t seed,
                                       std::int64_t n_super_intervals)
    : s_(std::move(s)), seed_(seed), n_super_(n_super_intervals) {}

std::int64_t ChannelRealization::sd_block(std::int64_t slot) const {
  if (!s_.coherence.t_sd.is_finite()) return 0;
  return floor_div(slot, s_.coherence.t_sd.slots());
}

std::int64_t ChannelRealization::sr_block(std::size_t k, std::int64_t slot) const {
  const auto& r = s_.relay(k);
  if (!r.t_sr.is_finite()) return 0;
  return floor_div(slot - r.offset_sr, r.t_sr.slots());
}

std::int64_t ChannelRealization::rd_block(std::size_t k, std::int64_t slot) const {
  const auto& r = s_.relay(k);
  if (!r.t_rd.is_finite()) return 0;
  return floor_div(slot - r.offset_rd, r.t_rd.slots());
}

namespace {
CMat draw(std::uint64_t seed, std::uint64_t tag, std::int64_t block, int rows, int cols) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = counter_gaussian(seed, tag, block, i, j);
  return m;
}
}  // namespace

CMat ChannelRealization::h_sd(std::int64_t block) const {
  if (!s_.coherence.t_sd.is_finite()) block = 0;
  return draw(seed_, 0x5D, block, s_.antennas.n_d, s_.antennas.n_s);
}

CMat ChannelRealization::h_sr(std::size_t k, std::int64_t block) const {
  if (!s_.relay(k).t_sr.is_finite()) block = 0;
  return draw(seed_, 0x5200 + k, block, s_.relay(k).n_r_rx, s_.antennas.n_s);
}

CMat ChannelRealization::h_rd(std::size_t k, std::int64_t block) const {
  if (!s_.relay(k).t_rd.is_finite()) block = 0;
  return draw(seed_, 0x2D00 + k, block, s_.antennas.n_d, s_.relay(k).n_r_tx_max);
}

ChannelRealization sample_channels(const Scenario& s, std::uint64_t seed,
                                   std::int64_t n_super_intervals) {
  return ChannelRealization(s, seed, n_super_intervals);
}

}  // namespace relaydof
