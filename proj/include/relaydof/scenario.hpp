#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaydof/rational.hpp"

namespace relaydof {

// A coherence interval in slots. Infinity is an explicit state, not a
// sentinel value: the theorems treat static links structurally (training
// cost amortizes to zero), so code has to branch on it explicitly.
class CoherenceTime {
 public:
  CoherenceTime() : slots_(std::nullopt) {}

  static CoherenceTime infinite() { return CoherenceTime(); }
  static CoherenceTime finite(std::int64_t slots) {
    if (slots < 1) throw std::invalid_argument("coherence time must be a positive slot count");
    CoherenceTime t;
    t.slots_ = slots;
    return t;
  }

  bool is_finite() const { return slots_.has_value(); }
  std::int64_t slots() const {
    if (!slots_) throw std::logic_error("coherence time is infinite");
    return *slots_;
  }
  // 1/T, with 1/inf = 0; this is how the formulas consume coherence times.
  Rational inv() const { return slots_ ? Rational(1, *slots_) : Rational(0); }

  friend bool operator==(const CoherenceTime& a, const CoherenceTime& b) {
    return a.slots_ == b.slots_;
  }
  friend bool operator!=(const CoherenceTime& a, const CoherenceTime& b) { return !(a == b); }

  std::string str() const { return slots_ ? std::to_string(*slots_) : "inf"; }

 private:
  std::optional<std::int64_t> slots_;
};

struct AntennaConfig {
  int n_s = 1;         // source antennas
  int n_r_rx = 1;      // relay receive antennas N_R
  int n_r_tx_max = 1;  // relay transmit antennas n_R (activation upper bound)
  int n_d = 1;         // destination antennas
};

struct CoherenceConfig {
  CoherenceTime t_sd;
  CoherenceTime t_sr;
  CoherenceTime t_rd;
  std::int64_t offset_sr = 0;
  std::int64_t offset_rd = 0;
};

// Per-relay antenna/coherence data for multi-relay scenarios. Single-relay
// scenarios carry exactly one entry mirroring AntennaConfig/CoherenceConfig.
struct RelayLink {
  int n_r_rx = 1;
  int n_r_tx_max = 1;
  CoherenceTime t_sr;
  CoherenceTime t_rd;
  std::int64_t offset_sr = 0;
  std::int64_t offset_rd = 0;
};

struct Scenario {
  AntennaConfig antennas;
  CoherenceConfig coherence;
  std::vector<RelayLink> relays;
  double snr = 100.0;  // linear power ratio rho

  static Scenario single_relay(const AntennaConfig& a, const CoherenceConfig& c,
                               double snr = 100.0);

  std::size_t relay_count() const { return relays.size(); }
  const RelayLink& relay(std::size_t k = 0) const;

  // N_S* = min(N_S, N_R(k)); the relay-decodable stream width.
  int n_s_star(std::size_t k = 0) const;
  // N_D* = min(N_S + n_R, N_D) for the single-relay optimality condition.
  int n_d_star() const;
  // Upper bound on activated relay antennas: min{N_S, N_D - N_S, n_R(k)}.
  int n_r_cap(std::size_t k = 0) const;
};

struct Violation {
  std::string id;
  std::string text;
};

// Soft checks: the coherence-length floors from the system model. Violations
// annotate outputs but never abort evaluation; the interesting negative
// examples (too-short relay blocks) sit outside the floors on purpose.
// Malformed scenarios (zero antennas, nonpositive coherence, out-of-range
// offsets) throw std::invalid_argument instead.
std::vector<Violation> validate_scenario(const Scenario& s);

// JSON (de)serialization; "inf" encodes an infinite coherence time.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);

// Stable content hash used in output-file headers for reproducibility.
std::string scenario_hash(const Scenario& s);

}  // namespace relaydof
