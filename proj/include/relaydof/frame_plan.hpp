#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relaydof/dof_engine.hpp"
#include "relaydof/scenario.hpp"

namespace relaydof {

enum class SlotRole : std::uint8_t {
  SourcePilot,      // identity-block pilot column
  SuperposedPilot,  // pilot premultiplied by a data-bearing square matrix
  RelayPilot,
  Data,
  Silent,
};

std::string to_string(SlotRole r);

struct PlanOptions {
  // Activated transmit antennas per relay; defaults to the engine optimum.
  std::optional<std::vector<int>> n_r;
  // Use the product of the finite coherence times as the super-interval
  // instead of their lcm (reproduces the arbitrary-coherence proof counting).
  bool product_super_interval = false;
  std::int64_t slot_cap = 10'000'000;
};

// Explicit per-slot, per-transmitter schedule over one super-interval.
// Counting slots in this table is the planner's independent route to the DoF;
// it must agree with the formula engine exactly.
struct FramePlan {
  SchemeId scheme = SchemeId::Direct;
  Scenario scenario;
  std::vector<int> n_r;  // activated antennas per relay

  std::int64_t super_interval = 0;  // L, in slots
  std::int64_t pattern_length = 0;  // coherence-interval chunk (== L unless phased)
  std::size_t n_tx = 1;             // source + relays
  int n_s_eff = 1;                  // source streams (min(N_S, N_D) for the direct link)

  std::vector<SlotRole> roles;                  // [slot * n_tx + tx]; tx 0 = source
  std::vector<int> source_streams;              // data streams per slot
  std::vector<std::vector<int>> relay_streams;  // [relay][slot]

  std::int64_t source_data_symbols = 0;
  struct RelayBudget {
    std::int64_t decodable = 0;      // symbols the relay can decode per super-interval
    std::int64_t transmittable = 0;  // symbol capacity of its data slots
    std::int64_t scheduled = 0;      // min of the two; actually placed in slots
  };
  std::vector<RelayBudget> relay_budgets;

  // Source-coherence-block structure, one entry per T_SD block in L. Layer k
  // follows the relay with the k-th shortest source-relay coherence time;
  // Fresh marks a new data-bearing matrix decodable by that relay.
  enum class LayerState : std::uint8_t { Identity, Fresh, Carry };
  struct SourceBlock {
    std::int64_t begin = 0;
    bool superposed = false;
    std::vector<LayerState> layers;  // indexed by original relay index
  };
  std::vector<SourceBlock> source_blocks;
  std::vector<std::size_t> layer_order;  // relay indices sorted by T_SR ascending

  struct EstimationEvent {
    enum class Link : std::uint8_t { SD, SR, RD } link = Link::SD;
    std::size_t relay_index = 0;
    std::int64_t first_slot = -1;  // -1 for amortized (static-link) knowledge
    std::int64_t last_slot = -1;
    std::int64_t block_id = 0;
    std::string what;
  };
  std::vector<EstimationEvent> estimation_events;

  struct Phase {
    std::int64_t first_interval = 0;
    std::int64_t n_intervals = 1;
    bool relay_active = true;
  };
  std::vector<Phase> phases;

  std::vector<std::string> notes;

  SlotRole role(std::int64_t slot, std::size_t tx) const { return roles[slot * n_tx + tx]; }
  int stream_count(std::int64_t slot) const;
  bool relay_active_at(std::int64_t slot) const;
};

FramePlan build_frame_plan(const Scenario& s, SchemeId scheme, const PlanOptions& opt = {});

// DoF recomputed purely by counting the plan's slots and budgets.
Rational accounting_dof(const FramePlan& p);

// Checks pilot exclusivity, one-estimation-per-block coverage, and the
// decode-before-forward budget; empty result means the plan is sound.
std::vector<Violation> validate_plan(const FramePlan& p);

void write_plan_csv(const FramePlan& p, std::ostream& out);

}  // namespace relaydof
