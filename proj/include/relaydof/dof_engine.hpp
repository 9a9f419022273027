#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaydof/rational.hpp"
#include "relaydof/scenario.hpp"

namespace relaydof {

enum class SchemeId {
  Direct,
  Identical,
  Thm1Equal,
  Thm1TrdMultiple,
  Thm1TsdMultiple,
  Thm2Equal,
  Thm2TrdMultiple,
  Thm2TsdMultiple,
  Thm3Scheduling,
  SchedulingGeneral,
  Thm4Arbitrary,
  TwoRelay,
  MultiRelay,
};

std::string to_string(SchemeId id);
SchemeId parse_scheme(const std::string& name);

// Exact DoF result. total == source_part + sum(relay_parts) always holds;
// n_r_opt lists activated transmit antennas per relay (0 = relay silent).
struct DofBreakdown {
  Rational total;
  Rational source_part;
  std::vector<Rational> relay_parts;
  std::vector<int> n_r_opt;
  std::vector<std::size_t> selected_relays;
  SchemeId scheme_id = SchemeId::Direct;
  std::vector<std::string> consistency_notes;
};

enum class Thm1CaseKind { EqualTsdTrd, TrdMultiple, TsdMultiple };
struct Thm1Case {
  Thm1CaseKind kind = Thm1CaseKind::EqualTsdTrd;
  std::int64_t k = 1;  // block-length ratio for the Multiple cases
};

enum class Thm2CaseKind { EqualTsdTrd, TrdMultiple, TsdMultiple };
struct Thm2Case {
  Thm2CaseKind kind = Thm2CaseKind::EqualTsdTrd;
  std::int64_t k = 1;        // T_SR / T_SD
  std::int64_t k_prime = 1;  // T_RD / T_SD (TrdMultiple) or T_SD / T_RD (TsdMultiple)
};

enum class SchedulingMode { AlignedThm3, GeneralCorollary };

DofBreakdown dof_direct_link(const Scenario& s);
DofBreakdown dof_identical(const Scenario& s);
DofBreakdown dof_thm1(const Scenario& s, Thm1Case c);

struct OptimalityCheck {
  bool condition_holds = false;
  Rational d_opt;
};
OptimalityCheck check_optimality(const Scenario& s);

DofBreakdown dof_thm2(const Scenario& s, Thm2Case c);
DofBreakdown dof_scheduling(const Scenario& s, SchedulingMode mode);
DofBreakdown dof_arbitrary(const Scenario& s);
DofBreakdown dof_two_relay(const Scenario& s, std::int64_t k1, std::int64_t k2);
DofBreakdown dof_multi_relay(const Scenario& s);

// Derives theorem case parameters (K, K', mode) from the coherence config and
// dispatches; this is what the CLI and the frame planner call.
DofBreakdown dof_for_scheme(const Scenario& s, SchemeId id);

// Canonical slot/stream accounting for a fixed activated-antenna count.
// Returns nullopt when n_r makes a data-slot count negative (infeasible).
// This is the per-point value the frame planner must reproduce by counting.
std::optional<Rational> canonical_per_nr(const Scenario& s, SchemeId id, int n_r);

// Multi-relay counterpart for a fixed activation vector (one entry per relay,
// 0 = silent); the selected subset is implied by the nonzero entries.
std::optional<Rational> canonical_multi_per_nr(const Scenario& s, const std::vector<int>& n_act);

// Theorem expressions exactly as displayed in print, for cross-checking
// against the canonical accounting. TsdMultiple under a static source-relay
// link is the known divergent family.
std::optional<Rational> printed_per_nr(const Scenario& s, SchemeId id, int n_r);

struct CrosscheckRow {
  std::string point;
  Rational printed;
  Rational canonical;
  bool equal = false;
};
struct CrosscheckReport {
  SchemeId scheme = SchemeId::Thm1Equal;
  std::vector<CrosscheckRow> rows;
  bool all_equal = true;
};
CrosscheckReport crosscheck_printed(const Scenario& s, SchemeId id);

}  // namespace relaydof
