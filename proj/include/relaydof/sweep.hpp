#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relaydof/dof_engine.hpp"
#include "relaydof/scenario.hpp"

namespace relaydof {

// One swept parameter applied to a scenario template, evaluated for a list
// of schemes; the shipped figure templates are generated this way.
struct SweepSpec {
  Scenario base;
  std::string param;  // T_SD | T_SR | T_RD | K | K' | N_S | N_R | N_D | n_R | snr_db | T_SR1 | T_SR2
  std::vector<std::int64_t> values;
  std::vector<SchemeId> schemes;
};

// "a..b:step" (inclusive of a, exclusive of b) or a comma-separated list.
std::vector<std::int64_t> parse_values(const std::string& text);

Scenario apply_param(const Scenario& base, const std::string& param, std::int64_t value,
                     SchemeId scheme, std::string* note);

struct SweepRow {
  std::int64_t swept_value = 0;
  SchemeId scheme = SchemeId::Direct;
  bool ok = false;
  Rational dof;
  std::string n_r_opt;
  Rational baseline;
  std::string notes;
  std::string error;
};

// Points evaluate concurrently; rows come back ordered by (value, scheme).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out,
                     const std::string& header);

}  // namespace relaydof
