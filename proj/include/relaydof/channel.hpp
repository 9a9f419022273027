#pragma once

#include <cstdint>

#include "relaydof/matrix.hpp"
#include "relaydof/scenario.hpp"

namespace relaydof {

// Block-fading channel realization. Matrices are generated lazily from a
// counter-based generator keyed on (seed, link, block, entry), so the same
// seed reproduces bit-identical values regardless of evaluation order or run
// length, and a static link (infinite coherence) is a single matrix.
class ChannelRealization {
 public:
  ChannelRealization(Scenario s, std::uint64_t seed, std::int64_t n_super_intervals = 1);

  std::uint64_t seed() const { return seed_; }
  std::int64_t n_super_intervals() const { return n_super_; }
  const Scenario& scenario() const { return s_; }

  std::int64_t sd_block(std::int64_t slot) const;
  std::int64_t sr_block(std::size_t k, std::int64_t slot) const;
  std::int64_t rd_block(std::size_t k, std::int64_t slot) const;

  CMat h_sd(std::int64_t block) const;                 // N_D x N_S
  CMat h_sr(std::size_t k, std::int64_t block) const;  // N_R(k) x N_S
  CMat h_rd(std::size_t k, std::int64_t block) const;  // N_D x n_R(k)

 private:
  Scenario s_;
  std::uint64_t seed_;
  std::int64_t n_super_;
};

ChannelRealization sample_channels(const Scenario& s, std::uint64_t seed,
                                   std::int64_t n_super_intervals);

// One CN(0,1) draw addressed by counters; also used for payload symbols.
cplx counter_gaussian(std::uint64_t seed, std::uint64_t tag, std::int64_t block, std::int64_t i,
                      std::int64_t j);
// Unit-modulus draw (uniform phase) for constant-modulus payloads.
cplx counter_phase(std::uint64_t seed, std::uint64_t tag, std::int64_t block, std::int64_t i,
                   std::int64_t j);

}  // namespace relaydof
