#include "relaydof/sweep.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "relaydof/util.hpp"

namespace relaydof {

std::vector<std::int64_t> parse_values(const std::string& text) {
  std::vector<std::int64_t> out;
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const std::int64_t a = std::stoll(text.substr(0, range_pos));
    const auto colon = text.find(':', range_pos);
    const std::int64_t b = std::stoll(
        text.substr(range_pos + 2, colon == std::string::npos ? std::string::npos
                                                              : colon - range_pos - 2));
    const std::int64_t step = colon == std::string::npos ? 1 : std::stoll(text.substr(colon + 1));
    if (step <= 0) throw std::invalid_argument("range step must be positive");
    for (std::int64_t v = a; v < b; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoll(item));
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

namespace {

void set_t_sr(Scenario& s, std::size_t k, const CoherenceTime& t) {
  s.relays[k].t_sr = t;
  if (k == 0) s.coherence.t_sr = t;
}

void set_t_rd(Scenario& s, std::size_t k, const CoherenceTime& t) {
  s.relays[k].t_rd = t;
  if (k == 0) s.coherence.t_rd = t;
}

}  // namespace

Scenario apply_param(const Scenario& base, const std::string& param, std::int64_t value,
                     SchemeId scheme, std::string* note) {
  Scenario s = base;
  if (param == "T_SD") {
    // Keep coherence times that the template tied to T_SD tied.
    const bool tie_rd = base.coherence.t_rd.is_finite() && base.coherence.t_sd.is_finite() &&
                        base.coherence.t_rd == base.coherence.t_sd;
    const bool tie_sr = base.coherence.t_sr.is_finite() && base.coherence.t_sd.is_finite() &&
                        base.coherence.t_sr == base.coherence.t_sd;
    s.coherence.t_sd = CoherenceTime::finite(value);
    if (tie_rd) set_t_rd(s, 0, s.coherence.t_sd);
    if (tie_sr) set_t_sr(s, 0, s.coherence.t_sd);
  } else if (param == "T_SR") {
    set_t_sr(s, 0, CoherenceTime::finite(value));
  } else if (param == "T_RD") {
    set_t_rd(s, 0, CoherenceTime::finite(value));
  } else if (param == "K") {
    switch (scheme) {
      case SchemeId::Thm2Equal:
      case SchemeId::Thm2TrdMultiple:
      case SchemeId::Thm2TsdMultiple:
        set_t_sr(s, 0, CoherenceTime::finite(value * s.coherence.t_sd.slots()));
        break;
      case SchemeId::Thm1TrdMultiple:
        set_t_rd(s, 0, CoherenceTime::finite(value * s.coherence.t_sd.slots()));
        break;
      case SchemeId::Thm1TsdMultiple:
        s.coherence.t_sd = CoherenceTime::finite(value * s.coherence.t_rd.slots());
        break;
      case SchemeId::Direct:
      case SchemeId::Identical:
        break;  // baseline rows ignore K
      default:
        throw std::invalid_argument("K sweep undefined for scheme " + to_string(scheme));
    }
  } else if (param == "K'") {
    switch (scheme) {
      case SchemeId::Thm2TrdMultiple:
        set_t_rd(s, 0, CoherenceTime::finite(value * s.coherence.t_sd.slots()));
        break;
      case SchemeId::Thm2TsdMultiple: {
        const std::int64_t k = s.coherence.t_sr.slots() / s.coherence.t_sd.slots();
        s.coherence.t_sd = CoherenceTime::finite(value * s.coherence.t_rd.slots());
        set_t_sr(s, 0, CoherenceTime::finite(k * s.coherence.t_sd.slots()));
        break;
      }
      case SchemeId::Direct:
      case SchemeId::Identical:
        break;
      default:
        throw std::invalid_argument("K' sweep undefined for scheme " + to_string(scheme));
    }
  } else if (param == "N_S") {
    s.antennas.n_s = static_cast<int>(value);
  } else if (param == "N_D") {
    s.antennas.n_d = static_cast<int>(value);
  } else if (param == "N_R") {
    s.antennas.n_r_rx = static_cast<int>(value);
    for (auto& r : s.relays) r.n_r_rx = static_cast<int>(value);
  } else if (param == "n_R") {
    s.antennas.n_r_tx_max = static_cast<int>(value);
    for (auto& r : s.relays) r.n_r_tx_max = static_cast<int>(value);
  } else if (param == "snr_db") {
    s.snr = std::pow(10.0, static_cast<double>(value) / 10.0);
  } else if (param == "T_SR1" || param == "T_SR2") {
    if (s.relay_count() < 2) throw std::invalid_argument(param + " sweep needs two relays");
    if (param == "T_SR2") {
      set_t_sr(s, 1, CoherenceTime::finite(value));
    } else {
      // Preserve the template's T_SR(2)/T_SR(1) ratio, rounding to slots.
      double ratio = 0;
      if (base.relay(0).t_sr.is_finite() && base.relay(1).t_sr.is_finite())
        ratio = static_cast<double>(base.relay(1).t_sr.slots()) / base.relay(0).t_sr.slots();
      set_t_sr(s, 0, CoherenceTime::finite(value));
      if (ratio > 0) {
        const auto scaled = static_cast<std::int64_t>(std::llround(ratio * value));
        set_t_sr(s, 1, CoherenceTime::finite(std::max<std::int64_t>(1, scaled)));
        if (note && std::abs(ratio * value - static_cast<double>(scaled)) > 1e-9)
          *note = "T_SR(2) rounded to nearest slot to keep the template ratio";
      }
    }
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + param);
  }
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows(spec.values.size() * spec.schemes.size());
  parallel_for(rows.size(), [&](std::size_t idx) {
    const std::int64_t value = spec.values[idx / spec.schemes.size()];
    const SchemeId scheme = spec.schemes[idx % spec.schemes.size()];
    SweepRow& row = rows[idx];
    row.swept_value = value;
    row.scheme = scheme;
    try {
      std::string note;
      const Scenario s = apply_param(spec.base, spec.param, value, scheme, &note);
      const DofBreakdown b = dof_for_scheme(s, scheme);
      row.dof = b.total;
      row.baseline = dof_direct_link(s).total;
      std::string nr;
      for (std::size_t k = 0; k < b.n_r_opt.size(); ++k)
        nr += (k ? "|" : "") + std::to_string(b.n_r_opt[k]);
      row.n_r_opt = nr;
      std::string notes = note;
      for (const auto& n : b.consistency_notes) {
        if (!notes.empty()) notes += "; ";
        notes += n;
      }
      for (auto& c : notes)
        if (c == ',') c = ';';
      row.notes = notes;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out,
                     const std::string& header) {
  out << header;
  out << "swept_value,scheme,dof_numerator,dof_denominator,dof_float,n_r_opt,baseline_dof_float,notes\n";
  for (const auto& row : rows) {
    if (!row.ok) continue;
    out << row.swept_value << ',' << to_string(row.scheme) << ',' << row.dof.num() << ','
        << row.dof.den() << ',' << row.dof.to_double() << ',' << row.n_r_opt << ','
        << row.baseline.to_double() << ',' << row.notes << "\n";
  }
}

}  // namespace relaydof
