#include "relaydof/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relaydof/util.hpp"

namespace relaydof {

namespace {

void check_positive(int v, const char* name) {
  if (v < 1) throw std::invalid_argument(std::string(name) + " must be >= 1");
}

void check_offset(std::int64_t offset, const CoherenceTime& t, const char* name) {
  if (!t.is_finite()) return;  // offsets are ignored for static links
  if (offset < 0 || offset >= t.slots())
    throw std::invalid_argument(std::string(name) + " must satisfy 0 <= offset < coherence time");
}

nlohmann::json coherence_to_json(const CoherenceTime& t) {
  if (t.is_finite()) return t.slots();
  return "inf";
}

CoherenceTime coherence_from_json(const nlohmann::json& j, const char* name) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return CoherenceTime::infinite();
    throw std::invalid_argument(std::string(name) + ": only \"inf\" is accepted as a string");
  }
  if (!j.is_number_integer())
    throw std::invalid_argument(std::string(name) + ": expected integer slot count or \"inf\"");
  return CoherenceTime::finite(j.get<std::int64_t>());
}

}  // namespace

Scenario Scenario::single_relay(const AntennaConfig& a, const CoherenceConfig& c, double snr) {
  Scenario s;
  s.antennas = a;
  s.coherence = c;
  s.snr = snr;
  s.relays.push_back(RelayLink{a.n_r_rx, a.n_r_tx_max, c.t_sr, c.t_rd, c.offset_sr, c.offset_rd});
  return s;
}

const RelayLink& Scenario::relay(std::size_t k) const {
  if (k >= relays.size()) throw std::out_of_range("relay index out of range");
  return relays[k];
}

int Scenario::n_s_star(std::size_t k) const { return std::min(antennas.n_s, relay(k).n_r_rx); }

int Scenario::n_d_star() const {
  return std::min(antennas.n_s + relay(0).n_r_tx_max, antennas.n_d);
}

int Scenario::n_r_cap(std::size_t k) const {
  const int room = antennas.n_d - antennas.n_s;
  return std::max(0, std::min({antennas.n_s, room, relay(k).n_r_tx_max}));
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  check_positive(s.antennas.n_s, "n_s");
  check_positive(s.antennas.n_d, "n_d");
  if (s.coherence.t_sd.is_finite() && s.coherence.t_sd.slots() < 1)
    throw std::invalid_argument("t_sd must be positive");
  for (std::size_t k = 0; k < s.relays.size(); ++k) {
    check_positive(s.relays[k].n_r_rx, "n_r_rx");
    check_positive(s.relays[k].n_r_tx_max, "n_r_tx_max");
    check_offset(s.relays[k].offset_sr, s.relays[k].t_sr, "offset_sr");
    check_offset(s.relays[k].offset_rd, s.relays[k].t_rd, "offset_rd");
  }

  std::vector<Violation> out;
  const auto below = [](const CoherenceTime& t, std::int64_t floor) {
    return t.is_finite() && t.slots() < floor;
  };
  if (below(s.coherence.t_sd, 2LL * std::max(s.antennas.n_s, s.antennas.n_d)))
    out.push_back({"t_sd_min", "t_sd >= 2*max(N_S,N_D)"});
  for (std::size_t k = 0; k < s.relays.size(); ++k) {
    const std::string tag = s.relays.size() > 1 ? "[" + std::to_string(k + 1) + "]" : "";
    if (below(s.relays[k].t_sr, 2LL * std::max(s.antennas.n_s, s.relays[k].n_r_rx)))
      out.push_back({"t_sr_min" + tag, "t_sr >= 2*max(N_S,N_R)" + tag});
    if (below(s.relays[k].t_rd, 2LL * std::max(s.relays[k].n_r_tx_max, s.antennas.n_d)))
      out.push_back({"t_rd_min" + tag, "t_rd >= 2*max(n_R,N_D)" + tag});
  }
  return out;
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["antennas"] = {{"n_s", s.antennas.n_s},
                   {"n_r_rx", s.antennas.n_r_rx},
                   {"n_r_tx_max", s.antennas.n_r_tx_max},
                   {"n_d", s.antennas.n_d}};
  j["coherence"] = {{"t_sd", coherence_to_json(s.coherence.t_sd)},
                    {"t_sr", coherence_to_json(s.coherence.t_sr)},
                    {"t_rd", coherence_to_json(s.coherence.t_rd)},
                    {"offset_sr", s.coherence.offset_sr},
                    {"offset_rd", s.coherence.offset_rd}};
  if (s.relays.size() != 1) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : s.relays) {
      arr.push_back({{"n_r_rx", r.n_r_rx},
                     {"n_r_tx_max", r.n_r_tx_max},
                     {"t_sr", coherence_to_json(r.t_sr)},
                     {"t_rd", coherence_to_json(r.t_rd)},
                     {"offset_sr", r.offset_sr},
                     {"offset_rd", r.offset_rd}});
    }
    j["relays"] = arr;
  }
  j["snr"] = s.snr;
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed scenario JSON: ") + e.what());
  }

  Scenario s;
  const auto& a = j.at("antennas");
  s.antennas.n_s = a.at("n_s").get<int>();
  s.antennas.n_d = a.at("n_d").get<int>();
  s.antennas.n_r_rx = a.value("n_r_rx", 1);
  s.antennas.n_r_tx_max = a.value("n_r_tx_max", 1);

  const auto& c = j.at("coherence");
  s.coherence.t_sd = coherence_from_json(c.at("t_sd"), "t_sd");
  s.coherence.t_sr = coherence_from_json(c.at("t_sr"), "t_sr");
  s.coherence.t_rd = coherence_from_json(c.at("t_rd"), "t_rd");
  s.coherence.offset_sr = c.value("offset_sr", std::int64_t{0});
  s.coherence.offset_rd = c.value("offset_rd", std::int64_t{0});

  if (j.contains("relays")) {
    for (const auto& rj : j.at("relays")) {
      RelayLink r;
      r.n_r_rx = rj.at("n_r_rx").get<int>();
      r.n_r_tx_max = rj.at("n_r_tx_max").get<int>();
      r.t_sr = coherence_from_json(rj.at("t_sr"), "relay t_sr");
      r.t_rd = coherence_from_json(rj.at("t_rd"), "relay t_rd");
      r.offset_sr = rj.value("offset_sr", std::int64_t{0});
      r.offset_rd = rj.value("offset_rd", std::int64_t{0});
      s.relays.push_back(r);
    }
    if (!s.relays.empty()) {
      // Keep the scalar mirror in sync with the first relay entry.
      s.antennas.n_r_rx = s.relays[0].n_r_rx;
      s.antennas.n_r_tx_max = s.relays[0].n_r_tx_max;
      s.coherence.t_sr = s.relays[0].t_sr;
      s.coherence.t_rd = s.relays[0].t_rd;
      s.coherence.offset_sr = s.relays[0].offset_sr;
      s.coherence.offset_rd = s.relays[0].offset_rd;
    }
  } else {
    s.relays.push_back(RelayLink{s.antennas.n_r_rx, s.antennas.n_r_tx_max, s.coherence.t_sr,
                                 s.coherence.t_rd, s.coherence.offset_sr, s.coherence.offset_rd});
  }

  s.snr = j.value("snr", 100.0);
  validate_scenario(s);  // hard errors only; soft violations discarded here
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::string scenario_hash(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(scenario_to_json(s))));
  return buf;
}

}  // namespace relaydof
