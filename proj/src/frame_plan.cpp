#include "relaydof/frame_plan.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "relaydof/util.hpp"

namespace relaydof {

namespace {

// Block index of a slot for a link with period t and boundary offset o.
// Works for negative arguments so the pattern tiles periodically.
std::int64_t block_of(std::int64_t slot, std::int64_t t, std::int64_t o) {
  return floor_div(slot - o, t);
}

bool first_seq_in_block(std::int64_t seq_slot, std::int64_t t_sd, const CoherenceTime& t,
                        std::int64_t offset) {
  if (!t.is_finite()) return false;
  return block_of(seq_slot, t.slots(), offset) != block_of(seq_slot - t_sd, t.slots(), offset);
}

struct SchedTermsR {
  Rational d1, d2, d3;
};

SchedTermsR planner_sched_terms(const Scenario& s, SchemeId scheme, int n_r) {
  SchedTermsR d;
  const std::int64_t ns = s.antennas.n_s;
  if (scheme == SchemeId::Thm3Scheduling) {
    const std::int64_t t = s.coherence.t_sd.slots();
    d.d1 = Rational(ns * (t - n_r - ns));
    d.d2 = Rational(std::int64_t{n_r} * (t - n_r - ns));
    d.d3 = Rational(std::int64_t{ns} * s.n_s_star());
  } else {
    const Rational base =
        Rational(1) - Rational(ns) * s.coherence.t_sd.inv() - Rational(n_r) * s.coherence.t_rd.inv();
    d.d1 = Rational(ns) * base;
    d.d2 = Rational(n_r) * base;
    d.d3 = Rational(std::int64_t{s.n_s_star()} * ns) *
           (s.coherence.t_sd.inv() - s.coherence.t_sr.inv());
  }
  return d;
}

struct PilotGroup {
  std::size_t tx = 0;  // 0 = source, 1 + relay index otherwise
  SlotRole role = SlotRole::SourcePilot;
  int size = 0;
  int served = 0;
  std::int64_t first_slot = -1;
  std::int64_t last_slot = -1;
  std::size_t relay_index = 0;
  std::int64_t seq_index = -1;  // source groups: T_SD block index
};

}  // namespace

std::string to_string(SlotRole r) {
  switch (r) {
    case SlotRole::SourcePilot: return "source_pilot";
    case SlotRole::SuperposedPilot: return "superposed_pilot";
    case SlotRole::RelayPilot: return "relay_pilot";
    case SlotRole::Data: return "data";
    case SlotRole::Silent: return "silent";
  }
  return "?";
}

int FramePlan::stream_count(std::int64_t slot) const {
  int n = source_streams[slot];
  for (const auto& rs : relay_streams) n += rs[slot];
  return n;
}

bool FramePlan::relay_active_at(std::int64_t slot) const {
  const std::int64_t interval = slot / pattern_length;
  for (const auto& ph : phases)
    if (interval >= ph.first_interval && interval < ph.first_interval + ph.n_intervals)
      return ph.relay_active;
  return true;
}

FramePlan build_frame_plan(const Scenario& s, SchemeId scheme, const PlanOptions& opt) {
  validate_scenario(s);
  // Scheme preconditions are the engine's; run it once up front. Its optimum
  // also provides the default activation vector.
  const DofBreakdown engine = dof_for_scheme(s, scheme);

  FramePlan p;
  p.scheme = scheme;
  p.scenario = s;
  p.n_tx = 1 + s.relay_count();

  if (opt.n_r) {
    p.n_r = *opt.n_r;
    if (p.n_r.size() != s.relay_count())
      throw std::invalid_argument("n_r override size must match relay count");
    for (std::size_t k = 0; k < p.n_r.size(); ++k)
      if (p.n_r[k] < 0 || p.n_r[k] > std::min(s.antennas.n_s, s.relay(k).n_r_tx_max))
        throw std::invalid_argument("n_r override out of range");
  } else {
    p.n_r = engine.n_r_opt;
    p.n_r.resize(s.relay_count(), 0);
  }
  if (scheme == SchemeId::Direct || scheme == SchemeId::Identical)
    std::fill(p.n_r.begin(), p.n_r.end(), 0);

  // Reject activation vectors the scheme cannot schedule.
  if (scheme == SchemeId::MultiRelay || scheme == SchemeId::TwoRelay) {
    if (!canonical_multi_per_nr(s, p.n_r))
      throw std::invalid_argument("activation vector infeasible for this scenario");
  } else if (scheme != SchemeId::Direct && scheme != SchemeId::Identical) {
    if (!canonical_per_nr(s, scheme, p.n_r.empty() ? 0 : p.n_r[0]))
      throw std::invalid_argument("n_r infeasible for this scheme");
  }

  const int n_s_eff = (scheme == SchemeId::Direct || scheme == SchemeId::Identical)
                          ? std::min(s.antennas.n_s, s.antennas.n_d)
                          : s.antennas.n_s;
  p.n_s_eff = n_s_eff;
  const std::int64_t t_sd = s.coherence.t_sd.is_finite()
                                ? s.coherence.t_sd.slots()
                                : throw std::invalid_argument("frame plans require finite T_SD");

  // Pattern length: lcm of the finite coherence times (their product behind
  // the reproduction flag); all block boundaries realign after it.
  std::int64_t L0 = t_sd;
  std::vector<std::int64_t> finite_times{t_sd};
  for (std::size_t k = 0; k < s.relay_count(); ++k) {
    if (s.relay(k).t_sr.is_finite()) finite_times.push_back(s.relay(k).t_sr.slots());
    if (s.relay(k).t_rd.is_finite()) finite_times.push_back(s.relay(k).t_rd.slots());
  }
  if (opt.product_super_interval) {
    __int128 prod = 1;
    for (const std::int64_t t : finite_times) {
      prod *= t;
      if (prod > opt.slot_cap) throw std::runtime_error("super-interval exceeds slot cap");
    }
    L0 = static_cast<std::int64_t>(prod);
    p.notes.push_back("super-interval uses the product of coherence times");
  } else {
    for (const std::int64_t t : finite_times) L0 = checked_lcm(L0, t, opt.slot_cap);
  }
  p.pattern_length = L0;

  // Scheduling schemes split the super-interval into a relay-silent phase and
  // a relay-active phase with interval counts in the ratio (d2-d3) : d3.
  std::int64_t p1 = 0, p2 = 1;
  const bool sched =
      scheme == SchemeId::Thm3Scheduling || scheme == SchemeId::SchedulingGeneral;
  if (sched && p.n_r[0] > 0) {
    const SchedTermsR d = planner_sched_terms(s, scheme, p.n_r[0]);
    if (d.d2 > d.d3) {
      const Rational r1 = d.d2 - d.d3, r2 = d.d3;
      const std::int64_t den = std::lcm(r1.den(), r2.den());
      std::int64_t a1 = r1.num() * (den / r1.den());
      std::int64_t a2 = r2.num() * (den / r2.den());
      const std::int64_t g = std::gcd(a1, a2);
      p1 = a1 / g;
      p2 = a2 / g;
      p.notes.push_back("scheduling phases: " + std::to_string(p1) + " relay-silent + " +
                        std::to_string(p2) + " relay-active intervals");
    }
  }
  if (p1 > 0) {
    p.phases.push_back({0, p1, false});
    p.phases.push_back({p1, p2, true});
  } else {
    p.phases.push_back({0, 1, true});
    p2 = 1;
    p1 = 0;
  }
  const __int128 total = (__int128)(p1 + p2) * L0;
  if (total > opt.slot_cap) throw std::runtime_error("super-interval exceeds slot cap");
  const std::int64_t L = static_cast<std::int64_t>(total);
  p.super_interval = L;

  // Source-block layer structure: relays sorted by source-relay coherence
  // time; layer k's data matrix refreshes once per T'_{k-1} block except in
  // the first such block after the relay re-learns its own channel.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < s.relay_count(); ++k)
    if (p.n_r[k] > 0) order.push_back(k);
  std::stable_sort(order.begin(), order.end(), [&s](std::size_t a, std::size_t b) {
    const auto& ta = s.relay(a).t_sr;
    const auto& tb = s.relay(b).t_sr;
    if (ta.is_finite() && tb.is_finite()) return ta.slots() < tb.slots();
    return ta.is_finite() && !tb.is_finite();
  });
  p.layer_order = order;

  // Stacked data matrices for several relays are only schedulable when each
  // outer layer holds still across every inner re-estimation, i.e. the
  // source-relay times nest; a single active relay has no such constraint.
  if (order.size() >= 2) {
    std::int64_t prev = t_sd;
    for (const std::size_t k : order) {
      if (s.relay(k).offset_sr != 0)
        throw std::invalid_argument("multi-relay frame plans require aligned source-relay blocks");
      if (s.relay(k).t_sr.is_finite()) {
        if (s.relay(k).t_sr.slots() % prev != 0)
          throw std::invalid_argument(
              "multi-relay frame plans require nested source-relay coherence times");
        prev = s.relay(k).t_sr.slots();
      }
    }
  }

  const std::int64_t n_blocks = L / t_sd;
  p.source_blocks.resize(n_blocks);
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    auto& blk = p.source_blocks[b];
    blk.begin = b * t_sd;
    blk.layers.assign(s.relay_count(), FramePlan::LayerState::Identity);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t ridx = order[i];
      const bool first_cur =
          first_seq_in_block(blk.begin, t_sd, s.relay(ridx).t_sr, s.relay(ridx).offset_sr);
      bool first_prev = true;
      if (i > 0) {
        const std::size_t prev = order[i - 1];
        first_prev = first_seq_in_block(blk.begin, t_sd, s.relay(prev).t_sr, s.relay(prev).offset_sr);
      }
      if (first_cur)
        blk.layers[ridx] = FramePlan::LayerState::Identity;
      else if (first_prev)
        blk.layers[ridx] = FramePlan::LayerState::Fresh;
      else
        blk.layers[ridx] = FramePlan::LayerState::Carry;
    }
    blk.superposed = std::any_of(blk.layers.begin(), blk.layers.end(), [](auto st) {
      return st != FramePlan::LayerState::Identity;
    });
  }

  // Slot sweep. Pilot groups queue up at block boundaries and are served one
  // at a time, source first; everything else overlapping a pilot stays
  // silent. A relay group that would span one of its own coherence
  // boundaries is deferred to the first post-boundary slot.
  p.roles.assign(static_cast<std::size_t>(L) * p.n_tx, SlotRole::Silent);
  p.source_streams.assign(L, 0);
  p.relay_streams.assign(s.relay_count(), std::vector<int>(L, 0));

  std::deque<PilotGroup> pending;
  std::optional<PilotGroup> active;
  std::vector<std::pair<std::int64_t, std::int64_t>> block_pilot_range(n_blocks, {-1, -1});
  std::vector<std::vector<std::int64_t>> relay_data_slots(s.relay_count());
  std::int64_t source_data_slots = 0;
  bool shift_noted = false;

  for (std::int64_t slot = 0; slot < L; ++slot) {
    if (slot % t_sd == 0) {
      PilotGroup g;
      g.tx = 0;
      g.seq_index = slot / t_sd;
      g.role = p.source_blocks[g.seq_index].superposed ? SlotRole::SuperposedPilot
                                                       : SlotRole::SourcePilot;
      g.size = n_s_eff;
      pending.push_back(g);
    }
    const bool relay_phase = p.relay_active_at(slot);
    if (relay_phase) {
      for (std::size_t k = 0; k < s.relay_count(); ++k) {
        if (p.n_r[k] == 0 || !s.relay(k).t_rd.is_finite()) continue;
        if (slot % s.relay(k).t_rd.slots() == 0) {
          PilotGroup g;
          g.tx = 1 + k;
          g.relay_index = k;
          g.role = SlotRole::RelayPilot;
          g.size = p.n_r[k];
          pending.push_back(g);
        }
      }
    }

    if (!active) {
      for (auto it = pending.begin(); it != pending.end(); ++it) {
        if (it->tx != 0) {
          // Defer groups that would straddle this relay link's block boundary.
          const auto& rl = s.relay(it->relay_index);
          const std::int64_t t = rl.t_rd.slots();
          const std::int64_t r = ((rl.offset_rd - slot) % t + t) % t;
          if (r > 0 && r < it->size) {
            if (!shift_noted) {
              p.notes.push_back("relay pilot shifted to the first post-boundary slot (offset split)");
              shift_noted = true;
            }
            continue;
          }
        }
        active = *it;
        pending.erase(it);
        break;
      }
    }

    if (active) {
      if (active->first_slot < 0) active->first_slot = slot;
      active->last_slot = slot;
      p.roles[slot * p.n_tx + active->tx] = active->role;
      if (++active->served == active->size) {
        if (active->tx == 0) {
          block_pilot_range[active->seq_index] = {active->first_slot, active->last_slot};
          FramePlan::EstimationEvent ev;
          ev.link = FramePlan::EstimationEvent::Link::SD;
          ev.first_slot = active->first_slot;
          ev.last_slot = active->last_slot;
          ev.block_id = active->seq_index;
          ev.what = p.source_blocks[active->seq_index].superposed ? "H_SD*U" : "H_SD";
          p.estimation_events.push_back(ev);
        } else {
          FramePlan::EstimationEvent ev;
          ev.link = FramePlan::EstimationEvent::Link::RD;
          ev.relay_index = active->relay_index;
          ev.first_slot = active->first_slot;
          ev.last_slot = active->last_slot;
          ev.block_id = block_of(active->first_slot, s.relay(active->relay_index).t_rd.slots(),
                                 s.relay(active->relay_index).offset_rd);
          ev.what = "H_RD";
          p.estimation_events.push_back(ev);
        }
        active.reset();
      }
      continue;
    }

    // No pilot pending: a data slot for everyone allowed to transmit.
    p.roles[slot * p.n_tx + 0] = SlotRole::Data;
    p.source_streams[slot] = n_s_eff;
    ++source_data_slots;
    for (std::size_t k = 0; k < s.relay_count(); ++k) {
      if (p.n_r[k] > 0 && relay_phase) {
        p.roles[slot * p.n_tx + 1 + k] = SlotRole::Data;
        relay_data_slots[k].push_back(slot);
      }
    }
  }
  if (active || !pending.empty())
    throw std::runtime_error("pilot schedule does not fit the super-interval");

  p.source_data_symbols = std::int64_t{n_s_eff} * source_data_slots;

  // Source-relay channel knowledge events.
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t ridx = order[i];
    if (!s.relay(ridx).t_sr.is_finite()) {
      FramePlan::EstimationEvent ev;
      ev.link = FramePlan::EstimationEvent::Link::SR;
      ev.relay_index = ridx;
      ev.what = "H_SR (static, training amortized)";
      p.estimation_events.push_back(ev);
      continue;
    }
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      if (!first_seq_in_block(p.source_blocks[b].begin, t_sd, s.relay(ridx).t_sr,
                              s.relay(ridx).offset_sr))
        continue;
      FramePlan::EstimationEvent ev;
      ev.link = FramePlan::EstimationEvent::Link::SR;
      ev.relay_index = ridx;
      ev.first_slot = block_pilot_range[b].first;
      ev.last_slot = block_pilot_range[b].second;
      ev.block_id = block_of(p.source_blocks[b].begin, s.relay(ridx).t_sr.slots(),
                             s.relay(ridx).offset_sr);
      ev.what = i == 0 ? "H_SR" : "H_SR*U_outer";
      p.estimation_events.push_back(ev);
    }
  }
  for (std::size_t k = 0; k < s.relay_count(); ++k) {
    if (p.n_r[k] > 0 && !s.relay(k).t_rd.is_finite()) {
      FramePlan::EstimationEvent ev;
      ev.link = FramePlan::EstimationEvent::Link::RD;
      ev.relay_index = k;
      ev.what = "H_RD (static, training amortized)";
      p.estimation_events.push_back(ev);
    }
  }

  // Relay budgets: decodable from fresh data-matrix counts, transmittable
  // from slot capacity; the scheduled stream is their minimum and trailing
  // relay data slots beyond it fall silent.
  p.relay_budgets.assign(s.relay_count(), {});
  for (std::size_t k = 0; k < s.relay_count(); ++k) {
    auto& budget = p.relay_budgets[k];
    if (p.n_r[k] == 0) continue;
    std::int64_t fresh = 0;
    for (const auto& blk : p.source_blocks)
      if (blk.layers[k] == FramePlan::LayerState::Fresh) ++fresh;
    budget.decodable = fresh * s.n_s_star(k) * s.antennas.n_s;
    budget.transmittable = std::int64_t{p.n_r[k]} * relay_data_slots[k].size();
    budget.scheduled = std::min(budget.decodable, budget.transmittable);
    std::int64_t remaining = budget.scheduled;
    for (const std::int64_t slot : relay_data_slots[k]) {
      const int take = static_cast<int>(std::min<std::int64_t>(p.n_r[k], remaining));
      p.relay_streams[k][slot] = take;
      remaining -= take;
      if (take == 0) p.roles[slot * p.n_tx + 1 + k] = SlotRole::Silent;
    }
  }

  p.notes.push_back("relay data in one super-interval carries messages decoded in the previous one");
  if (engine.n_r_opt != p.n_r && opt.n_r)
    p.notes.push_back("activation vector overridden (engine optimum differs)");
  return p;
}

Rational accounting_dof(const FramePlan& p) {
  std::int64_t symbols = 0;
  for (const int st : p.source_streams) symbols += st;
  for (const auto& b : p.relay_budgets) symbols += std::min(b.decodable, b.transmittable);
  if (p.super_interval == 0) return Rational(0);
  return Rational(symbols, p.super_interval);
}

std::vector<Violation> validate_plan(const FramePlan& p) {
  std::vector<Violation> out;
  const Scenario& s = p.scenario;
  const std::int64_t L = p.super_interval;
  const std::int64_t t_sd = s.coherence.t_sd.slots();

  // Pilot exclusivity.
  for (std::int64_t slot = 0; slot < L; ++slot) {
    bool pilot = false;
    int non_silent = 0;
    for (std::size_t tx = 0; tx < p.n_tx; ++tx) {
      const SlotRole r = p.role(slot, tx);
      if (r == SlotRole::SourcePilot || r == SlotRole::SuperposedPilot || r == SlotRole::RelayPilot)
        pilot = true;
      if (r != SlotRole::Silent) ++non_silent;
    }
    if (pilot && non_silent != 1)
      out.push_back({"pilot_exclusivity",
                     "slot " + std::to_string(slot) + ": pilot slot shared by another transmitter"});
  }

  // One estimation per coherence block that carries data.
  const auto count_events = [&p](FramePlan::EstimationEvent::Link link, std::size_t relay,
                                 std::int64_t block) {
    int n = 0;
    for (const auto& ev : p.estimation_events)
      if (ev.link == link && ev.block_id == block &&
          (link == FramePlan::EstimationEvent::Link::SD || ev.relay_index == relay) &&
          ev.first_slot >= 0)
        ++n;
    return n;
  };
  const auto has_amortized = [&p](FramePlan::EstimationEvent::Link link, std::size_t relay) {
    for (const auto& ev : p.estimation_events)
      if (ev.link == link && ev.relay_index == relay && ev.first_slot < 0) return true;
    return false;
  };

  for (std::int64_t b = 0; b < L / t_sd; ++b) {
    bool has_data = false;
    for (std::int64_t slot = b * t_sd; slot < (b + 1) * t_sd; ++slot)
      if (p.source_streams[slot] > 0) has_data = true;
    if (!has_data) continue;
    const int n = count_events(FramePlan::EstimationEvent::Link::SD, 0, b);
    if (n != 1)
      out.push_back({"sd_estimation",
                     "T_SD block " + std::to_string(b) + " estimated " + std::to_string(n) +
                         " times (expected 1)"});
  }

  // Blocks are compared modulo the blocks-per-super-interval count: the plan
  // tiles periodically and a staggered block may be estimated by the pilot
  // that lands in the next copy of the pattern.
  const auto count_events_mod = [&p](FramePlan::EstimationEvent::Link link, std::size_t relay,
                                     std::int64_t residue, std::int64_t period) {
    int n = 0;
    for (const auto& ev : p.estimation_events)
      if (ev.link == link && ev.relay_index == relay && ev.first_slot >= 0 &&
          ((ev.block_id % period) + period) % period == residue)
        ++n;
    return n;
  };

  for (std::size_t k = 0; k < s.relay_count(); ++k) {
    if (p.n_r.size() <= k || p.n_r[k] == 0) continue;
    if (!s.relay(k).t_rd.is_finite()) {
      if (!has_amortized(FramePlan::EstimationEvent::Link::RD, k))
        out.push_back({"rd_estimation", "static relay-destination link lacks amortized knowledge"});
      continue;
    }
    const std::int64_t t = s.relay(k).t_rd.slots();
    const std::int64_t period = L / t;
    std::set<std::int64_t> data_residues;
    for (std::int64_t slot = 0; slot < L; ++slot)
      if (p.relay_streams[k][slot] > 0) {
        const std::int64_t b = block_of(slot, t, s.relay(k).offset_rd);
        data_residues.insert(((b % period) + period) % period);
      }
    for (const std::int64_t b : data_residues) {
      const int n = count_events_mod(FramePlan::EstimationEvent::Link::RD, k, b, period);
      if (n != 1)
        out.push_back({"rd_estimation", "relay " + std::to_string(k + 1) + " T_RD block " +
                                            std::to_string(b) + " estimated " + std::to_string(n) +
                                            " times (expected 1)"});
    }
  }

  for (std::size_t k = 0; k < s.relay_count(); ++k) {
    if (p.n_r.size() <= k || p.n_r[k] == 0) continue;
    bool decodes = false;
    for (const auto& blk : p.source_blocks)
      if (blk.layers.size() > k && blk.layers[k] == FramePlan::LayerState::Fresh) decodes = true;
    if (!decodes) continue;
    if (!s.relay(k).t_sr.is_finite()) {
      if (!has_amortized(FramePlan::EstimationEvent::Link::SR, k))
        out.push_back({"sr_estimation", "static source-relay link lacks amortized knowledge"});
      continue;
    }
    const std::int64_t t = s.relay(k).t_sr.slots();
    const std::int64_t period = L / t;
    std::set<std::int64_t> residues;
    for (const auto& blk : p.source_blocks)
      if (blk.layers[k] == FramePlan::LayerState::Fresh) {
        const std::int64_t b = block_of(blk.begin, t, s.relay(k).offset_sr);
        residues.insert(((b % period) + period) % period);
      }
    for (const std::int64_t b : residues) {
      const int n = count_events_mod(FramePlan::EstimationEvent::Link::SR, k, b, period);
      if (n != 1)
        out.push_back({"sr_estimation", "relay " + std::to_string(k + 1) + " T_SR block " +
                                            std::to_string(b) + " estimated " + std::to_string(n) +
                                            " times (expected 1)"});
    }
  }

  // Decode-before-forward: the relay cannot place more symbols than it
  // decodes per super-interval.
  for (std::size_t k = 0; k < p.relay_budgets.size(); ++k) {
    const auto& b = p.relay_budgets[k];
    std::int64_t placed = 0;
    for (const int st : p.relay_streams[k]) placed += st;
    if (placed > b.decodable)
      out.push_back({"relay_causality", "relay " + std::to_string(k + 1) + " schedules " +
                                            std::to_string(placed) + " symbols but decodes only " +
                                            std::to_string(b.decodable)});
    if (placed > b.transmittable)
      out.push_back({"relay_capacity", "relay " + std::to_string(k + 1) +
                                           " schedules beyond its slot capacity"});
  }
  return out;
}

void write_plan_csv(const FramePlan& p, std::ostream& out) {
  const Scenario& s = p.scenario;
  out << "slot,transmitter,role,block_sd";
  for (std::size_t k = 0; k < s.relay_count(); ++k) {
    const std::string suffix = s.relay_count() > 1 ? std::to_string(k + 1) : "";
    out << ",block_sr" << suffix << ",block_rd" << suffix;
  }
  out << "\n";
  const std::int64_t t_sd = s.coherence.t_sd.slots();
  for (std::int64_t slot = 0; slot < p.super_interval; ++slot) {
    for (std::size_t tx = 0; tx < p.n_tx; ++tx) {
      out << slot << ',' << (tx == 0 ? std::string("source") : "relay" + std::to_string(tx)) << ','
          << to_string(p.role(slot, tx)) << ',' << slot / t_sd;
      for (std::size_t k = 0; k < s.relay_count(); ++k) {
        out << ',';
        if (s.relay(k).t_sr.is_finite())
          out << block_of(slot, s.relay(k).t_sr.slots(), s.relay(k).offset_sr);
        else
          out << 0;
        out << ',';
        if (s.relay(k).t_rd.is_finite())
          out << block_of(slot, s.relay(k).t_rd.slots(), s.relay(k).offset_rd);
        else
          out << 0;
      }
      out << "\n";
    }
  }
}

}  // namespace relaydof
