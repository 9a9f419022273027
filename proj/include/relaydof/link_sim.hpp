#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relaydof/channel.hpp"
#include "relaydof/frame_plan.hpp"
#include "relaydof/matrix.hpp"

namespace relaydof {

// Data-bearing matrices for a run of several super-intervals: one relay-bound
// block per fresh layer occurrence (the information rows of U) and one column
// per source data slot.
struct PayloadSet {
  int n_super = 1;
  // [interval][source block][relay] -> n_s_star x N_S information rows
  std::vector<std::vector<std::vector<std::optional<CMat>>>> u_data;
  // [interval] -> n_s_eff x (source data slots per super-interval)
  std::vector<CMat> v_source;
};

PayloadSet make_payload(const FramePlan& plan, int n_super, std::uint64_t seed,
                        bool gaussian = false);

// Fixed rows that complete U to a square matrix when the relay has fewer
// receive antennas than the source has transmit antennas; known everywhere.
CMat u_filler(const Scenario& s, std::size_t relay);

struct SimOptions {
  double snr = 100.0;
  bool noiseless = true;
  std::uint64_t seed = 1;
  bool collect_equivalents = false;  // keep interval-0 equivalent channels for rate estimation
};

// Scoring convention: the run covers payload.n_super intervals; the last one
// exists only so deferred (staggered) pilots can land, so source symbols are
// scored on intervals [0, n_super-1) and relay streams (one super-interval
// behind, block-Markov) on [1, n_super-1).
struct SimResult {
  std::int64_t source_symbols = 0;
  std::int64_t relay_symbols = 0;
  double max_rel_err_source = 0.0;
  double max_rel_err_relay = 0.0;
  std::int64_t flagged_singular = 0;
  std::int64_t skipped_symbols = 0;
  std::vector<double> interval_source_err;
  std::vector<double> interval_relay_err;
  // Destination's decoded relay streams, [interval][relay]; lets tests track
  // how payload changes propagate through the block-Markov pipeline.
  std::vector<std::vector<std::vector<cplx>>> relay_stream_by_interval;
  std::vector<CMat> equivalents;  // estimated, transmit scaling included
  std::vector<int> equivalent_streams;
};

SimResult run_end_to_end(const FramePlan& plan, const PayloadSet& payload, const SimOptions& opt,
                         const ChannelRealization& ch);

// Least-squares equivalent-channel estimate from pilot observations:
// received = E * pilot (+ noise); the pilot matrix must be invertible.
CMat ls_estimate_equivalent_channel(const CMat& received_pilots, const CMat& pilot_matrix);

struct ZfResult {
  CMat symbols;
  bool rank_deficient = false;
};
// Zero-forcing: left pseudo-inverse of the equivalent channel per column.
ZfResult zf_decode(const CMat& received_data, const CMat& equivalent);

}  // namespace relaydof
