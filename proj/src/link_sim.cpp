#include "relaydof/link_sim.hpp"

#include <algorithm>
#include <map>

#include "relaydof/util.hpp"

namespace relaydof {

namespace {

constexpr std::uint64_t kTagU = 0xDA7A0001;
constexpr std::uint64_t kTagV = 0xDA7A0002;
constexpr std::uint64_t kTagFiller = 0xF111ED;
constexpr std::uint64_t kTagNoiseD = 0x4015E00;
constexpr std::uint64_t kTagNoiseR = 0x4015E10;

cplx payload_symbol(std::uint64_t seed, std::uint64_t tag, std::int64_t block, std::int64_t i,
                    std::int64_t j, bool gaussian) {
  return gaussian ? counter_gaussian(seed, tag, block, i, j)
                  : counter_phase(seed, tag, block, i, j);
}

}  // namespace

CMat u_filler(const Scenario& s, std::size_t relay) {
  const int n_s = s.antennas.n_s;
  const int nss = s.n_s_star(relay);
  CMat f(n_s - nss, n_s);
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j)
      f(i, j) = counter_phase(kTagFiller, relay, 0, i, j);
  return f;
}

PayloadSet make_payload(const FramePlan& plan, int n_super, std::uint64_t seed, bool gaussian) {
  const Scenario& s = plan.scenario;
  const std::int64_t n_blocks = static_cast<std::int64_t>(plan.source_blocks.size());
  std::int64_t data_slots = 0;
  for (std::int64_t t = 0; t < plan.super_interval; ++t)
    if (plan.source_streams[t] > 0) ++data_slots;

  PayloadSet pay;
  pay.n_super = n_super;
  pay.u_data.resize(n_super);
  pay.v_source.reserve(n_super);
  for (int m = 0; m < n_super; ++m) {
    pay.u_data[m].assign(n_blocks, std::vector<std::optional<CMat>>(s.relay_count()));
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      for (std::size_t k = 0; k < s.relay_count(); ++k) {
        if (plan.source_blocks[b].layers.size() <= k ||
            plan.source_blocks[b].layers[k] != FramePlan::LayerState::Fresh)
          continue;
        CMat u(s.n_s_star(k), s.antennas.n_s);
        for (int i = 0; i < u.rows(); ++i)
          for (int j = 0; j < u.cols(); ++j)
            u(i, j) = payload_symbol(seed, kTagU + 16 * k, m * n_blocks + b, i, j, gaussian);
        pay.u_data[m][b][k] = u;
      }
    }
    CMat v(plan.n_s_eff, static_cast<int>(data_slots));
    for (int i = 0; i < v.rows(); ++i)
      for (int j = 0; j < v.cols(); ++j) v(i, j) = payload_symbol(seed, kTagV, m, i, j, gaussian);
    pay.v_source.push_back(v);
  }
  return pay;
}

CMat ls_estimate_equivalent_channel(const CMat& received_pilots, const CMat& pilot_matrix) {
  if (pilot_matrix.rows() != pilot_matrix.cols())
    throw std::invalid_argument("pilot matrix must be square");
  const auto inv = solve_square(pilot_matrix, CMat::identity(pilot_matrix.rows()));
  if (inv.singular) throw std::invalid_argument("pilot matrix is not invertible");
  return received_pilots * inv.x;
}

ZfResult zf_decode(const CMat& received_data, const CMat& equivalent) {
  if (equivalent.rows() < equivalent.cols())
    throw std::invalid_argument("zf_decode: more streams than receive antennas");
  const auto r = lsq_solve(equivalent, received_data);
  return {r.x, r.singular};
}

namespace {

struct RelayPilotGroup {
  std::size_t relay = 0;
  std::int64_t first = 0;
  std::int64_t last = 0;
};

struct Scorer {
  std::int64_t symbols = 0;
  double max_err = 0;
  void add(const cplx& got, const cplx& want) {
    ++symbols;
    const double mag = std::max(1.0, std::abs(want));
    max_err = std::max(max_err, std::abs(got - want) / mag);
  }
};

}  // namespace

SimResult run_end_to_end(const FramePlan& plan, const PayloadSet& payload, const SimOptions& opt,
                         const ChannelRealization& ch) {
  const Scenario& s = plan.scenario;
  const std::int64_t L = plan.super_interval;
  const std::int64_t t_sd = s.coherence.t_sd.slots();
  const std::int64_t n_blocks = L / t_sd;
  const int n_s = s.antennas.n_s;
  const int n_d = s.antennas.n_d;
  const int n_s_eff = plan.n_s_eff;
  const std::size_t K = s.relay_count();
  const int M = payload.n_super;
  if (M < 2) throw std::invalid_argument("need at least two super-intervals (one is warm-up tail)");

  // Layered superposition across several relays requires nested aligned
  // coherence blocks; the single-relay case has no such restriction.
  if (plan.layer_order.size() >= 2) {
    std::int64_t prev = t_sd;
    for (const std::size_t k : plan.layer_order) {
      const auto& t = s.relay(k).t_sr;
      if (s.relay(k).offset_sr != 0)
        throw std::runtime_error("multi-relay simulation requires aligned source-relay blocks");
      if (t.is_finite()) {
        if (t.slots() % prev != 0)
          throw std::runtime_error("multi-relay simulation requires nested coherence times");
        prev = t.slots();
      }
    }
  }

  // Pattern-level lookups.
  std::vector<std::pair<std::int64_t, std::int64_t>> block_pilots(n_blocks, {-1, -1});
  std::vector<RelayPilotGroup> rd_groups;
  for (const auto& ev : plan.estimation_events) {
    if (ev.first_slot < 0) continue;
    if (ev.link == FramePlan::EstimationEvent::Link::SD)
      block_pilots[ev.block_id] = {ev.first_slot, ev.last_slot};
    else if (ev.link == FramePlan::EstimationEvent::Link::RD)
      rd_groups.push_back({ev.relay_index, ev.first_slot, ev.last_slot});
  }
  std::vector<std::int64_t> data_slots;  // pattern slots with source data
  for (std::int64_t t = 0; t < L; ++t)
    if (plan.source_streams[t] > 0) data_slots.push_back(t);

  // Pilot slot -> (relay, antenna index). Adjacent groups from different
  // coherence blocks can touch, so the group table is authoritative.
  std::map<std::int64_t, std::pair<std::size_t, int>> relay_pilot_ant;
  for (const auto& grp : rd_groups)
    for (std::int64_t p = grp.first; p <= grp.last; ++p)
      relay_pilot_ant[p] = {grp.relay, static_cast<int>(p - grp.first)};

  const double s_src = std::sqrt(opt.snr / std::max(1, n_s_eff));
  std::vector<double> s_rel(K, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    if (plan.n_r[k] > 0) s_rel[k] = std::sqrt(opt.snr / plan.n_r[k]);

  const auto noise = [&](std::uint64_t tag, std::int64_t slot, int ant) -> cplx {
    if (opt.noiseless) return {};
    return counter_gaussian(mix_seed(opt.seed, tag), 0, slot, ant, 0);
  };

  // Relay-side channel knowledge: genie for static links, least squares on
  // the plain pilot sequences otherwise (overwritten at each re-estimation).
  std::vector<CMat> relay_equiv(K);
  std::vector<CMat> fillers(K);
  for (const std::size_t k : plan.layer_order) {
    relay_equiv[k] = ch.h_sr(k, ch.sr_block(k, 0));
    fillers[k] = u_filler(s, k);
  }

  std::vector<CMat> cur_u(K);  // current per-layer data matrix (square)
  for (const std::size_t k : plan.layer_order) cur_u[k] = CMat::identity(n_s);

  std::vector<std::vector<cplx>> decoded_prev(K), decoded_cur(K);
  std::vector<std::vector<std::vector<cplx>>> oracle(M);  // [m][relay] fresh symbols in order
  std::vector<std::vector<cplx>> relay_tx_symbols(K);     // for the current interval

  std::vector<CMat> ydest;  // one N_D x 1 column per global slot
  ydest.reserve(static_cast<std::size_t>(M) * L);

  std::map<std::int64_t, CMat> g_est;                            // global sd block -> estimate
  std::map<std::pair<std::size_t, std::int64_t>, CMat> rd_est;   // (relay, global rd block)
  for (std::size_t k = 0; k < K; ++k) {
    if (plan.n_r[k] > 0 && !s.relay(k).t_rd.is_finite()) {
      const CMat h = ch.h_rd(k, 0);
      rd_est[{k, 0}] = h.block(0, 0, n_d, plan.n_r[k]);  // destination knows static links
    }
  }

  SimResult res;
  res.interval_source_err.assign(M, 0.0);
  res.interval_relay_err.assign(M, 0.0);
  res.relay_stream_by_interval.assign(M, std::vector<std::vector<cplx>>(K));

  std::vector<CMat> u_stack(n_blocks, CMat::identity(n_s));

  for (int m = 0; m < M; ++m) {
    oracle[m].assign(K, {});

    // (a) evolve the per-layer data matrices and their products.
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      for (const std::size_t k : plan.layer_order) {
        switch (plan.source_blocks[b].layers[k]) {
          case FramePlan::LayerState::Identity:
            cur_u[k] = CMat::identity(n_s);
            break;
          case FramePlan::LayerState::Fresh: {
            const CMat& data = *payload.u_data[m][b][k];
            CMat u(n_s, n_s);
            u.set_block(0, 0, data);
            if (data.rows() < n_s) u.set_block(data.rows(), 0, fillers[k]);
            cur_u[k] = u;
            for (int i = 0; i < data.rows(); ++i)
              for (int j = 0; j < data.cols(); ++j) oracle[m][k].push_back(data(i, j));
            break;
          }
          case FramePlan::LayerState::Carry:
            break;
        }
      }
      CMat stack = CMat::identity(n_s);
      for (auto it = plan.layer_order.rbegin(); it != plan.layer_order.rend(); ++it)
        stack = stack * cur_u[*it];
      u_stack[b] = stack;
    }

    // (b) relay receive: re-estimate on plain sequences, decode fresh blocks.
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      const auto [p0, p1] = block_pilots[b];
      if (p0 < 0) continue;
      const int glen = static_cast<int>(p1 - p0 + 1);
      for (const std::size_t k : plan.layer_order) {
        const auto state = plan.source_blocks[b].layers[k];
        if (state == FramePlan::LayerState::Carry) continue;
        const std::int64_t g0 = m * L + p0;
        CMat y(s.relay(k).n_r_rx, glen);
        const CMat h = ch.h_sr(k, ch.sr_block(k, g0));
        for (int c = 0; c < glen; ++c) {
          // x_S during the pilot group is the c-th column of U_stack, scaled.
          for (int i = 0; i < y.rows(); ++i) {
            cplx acc{};
            for (int j = 0; j < n_s; ++j) acc += h(i, j) * u_stack[b](j, c);
            y(i, c) = acc * s_src + noise(kTagNoiseR + k, g0 + c, i);
          }
        }
        if (state == FramePlan::LayerState::Identity) {
          if (s.relay(k).t_sr.is_finite())
            relay_equiv[k] = y.scaled(1.0 / s_src);  // pilot is the scaled identity
          continue;
        }
        // Fresh: peel the known filler rows, then invert on the data rows.
        const int nss = s.n_s_star(k);
        const CMat y_u = y.scaled(1.0 / s_src);
        CMat decoded;
        if (s.relay(k).n_r_rx >= n_s) {
          const auto r = lsq_solve(relay_equiv[k], y_u);
          if (r.singular) ++res.flagged_singular;
          decoded = r.x.block(0, 0, nss, n_s);
        } else {
          const CMat left = relay_equiv[k].block(0, 0, y.rows(), nss);
          const CMat known = relay_equiv[k].block(0, nss, y.rows(), n_s - nss) * fillers[k];
          const auto r = solve_square(left, y_u - known);
          if (r.singular) ++res.flagged_singular;
          decoded = r.x;
        }
        for (int i = 0; i < decoded.rows(); ++i)
          for (int j = 0; j < decoded.cols(); ++j) decoded_cur[k].push_back(decoded(i, j));
      }
    }

    // (c) the relay forwards what it decoded in the previous super-interval.
    for (std::size_t k = 0; k < K; ++k) {
      relay_tx_symbols[k] = decoded_prev[k];
      relay_tx_symbols[k].resize(plan.relay_budgets[k].scheduled, cplx{});
    }

    // (d) destination receive for every slot of this interval.
    std::vector<std::size_t> relay_tx_pos(K, 0);
    for (std::int64_t p = 0; p < L; ++p) {
      const std::int64_t t = m * L + p;
      CMat y(n_d, 1);
      for (int i = 0; i < n_d; ++i) y(i, 0) = noise(kTagNoiseD, t, i);

      const SlotRole src_role = plan.role(p, 0);
      if (src_role != SlotRole::Silent) {
        const std::int64_t b = p / t_sd;
        CMat x(n_s, 1);
        if (src_role == SlotRole::Data) {
          const auto pos = std::lower_bound(data_slots.begin(), data_slots.end(), p);
          const int col = static_cast<int>(pos - data_slots.begin());
          CMat v(n_s, 1);
          for (int i = 0; i < n_s_eff; ++i) v(i, 0) = payload.v_source[m](i, col);
          x = u_stack[b] * v;
        } else {
          const int i_in_group = static_cast<int>(p - block_pilots[b].first);
          for (int i = 0; i < n_s; ++i) x(i, 0) = u_stack[b](i, i_in_group);
        }
        const CMat h = ch.h_sd(ch.sd_block(t));
        for (int i = 0; i < n_d; ++i) {
          cplx acc{};
          for (int j = 0; j < n_s; ++j) acc += h(i, j) * x(j, 0);
          y(i, 0) += acc * s_src;
        }
      }

      for (std::size_t k = 0; k < K; ++k) {
        if (plan.n_r[k] == 0) continue;
        const SlotRole role = plan.role(p, 1 + k);
        if (role == SlotRole::Silent) continue;
        const CMat h = ch.h_rd(k, ch.rd_block(k, t));
        if (role == SlotRole::RelayPilot) {
          const int ant = relay_pilot_ant.at(p).second;  // one antenna per pilot slot
          for (int i = 0; i < n_d; ++i) y(i, 0) += h(i, ant) * s_rel[k];
        } else {  // Data
          const int w = plan.relay_streams[k][p];
          for (int a = 0; a < w; ++a) {
            const cplx sym = relay_tx_pos[k] < relay_tx_symbols[k].size()
                                 ? relay_tx_symbols[k][relay_tx_pos[k]++]
                                 : cplx{};
            for (int i = 0; i < n_d; ++i) y(i, 0) += h(i, a) * sym * s_rel[k];
          }
        }
      }
      ydest.push_back(y);
    }

    // (e) destination channel estimation from this interval's pilot groups.
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      const auto [p0, p1] = block_pilots[b];
      if (p0 < 0) continue;
      const int glen = static_cast<int>(p1 - p0 + 1);
      CMat y(n_d, glen);
      for (int c = 0; c < glen; ++c)
        for (int i = 0; i < n_d; ++i) y(i, c) = ydest[m * L + p0 + c](i, 0);
      g_est[m * n_blocks + b] = y.scaled(1.0 / s_src);
    }
    for (const auto& grp : rd_groups) {
      const int glen = static_cast<int>(grp.last - grp.first + 1);
      CMat y(n_d, glen);
      for (int c = 0; c < glen; ++c)
        for (int i = 0; i < n_d; ++i) y(i, c) = ydest[m * L + grp.first + c](i, 0);
      const std::int64_t blk = ch.rd_block(grp.relay, m * L + grp.first);
      rd_est[{grp.relay, blk}] = y.scaled(1.0 / s_rel[grp.relay]);
    }

    decoded_prev = decoded_cur;
    for (auto& d : decoded_cur) d.clear();
  }

  // Decode pass: all estimates (including deferred ones) are in hand.
  std::vector<std::vector<cplx>> dest_relay_stream(K);
  for (int m = 0; m + 1 < M; ++m) {
    for (auto& st : dest_relay_stream) st.clear();
    Scorer src_score, rel_score;
    for (std::size_t di = 0; di < data_slots.size(); ++di) {
      const std::int64_t p = data_slots[di];
      const std::int64_t t = m * L + p;
      const std::int64_t b = p / t_sd;

      int total_streams = n_s_eff;
      bool missing = false;
      std::vector<std::pair<std::size_t, int>> active;  // (relay, streams)
      for (std::size_t k = 0; k < K; ++k) {
        const int w = plan.n_r[k] > 0 ? plan.relay_streams[k][p] : 0;
        if (w == 0) continue;
        if (!rd_est.count({k, ch.rd_block(k, t)})) missing = true;
        active.push_back({k, w});
        total_streams += w;
      }
      if (missing) {
        res.skipped_symbols += total_streams;
        continue;
      }

      CMat e(n_d, total_streams);
      const CMat& g = g_est.at(m * n_blocks + b);
      for (int i = 0; i < n_d; ++i)
        for (int j = 0; j < n_s_eff; ++j) e(i, j) = g(i, j) * s_src;
      int col = n_s_eff;
      for (const auto& [k, w] : active) {
        const CMat& h = rd_est.at({k, ch.rd_block(k, t)});
        for (int a = 0; a < w; ++a, ++col)
          for (int i = 0; i < n_d; ++i) e(i, col) = h(i, a) * s_rel[k];
      }

      if (opt.collect_equivalents && m == 0) {
        res.equivalents.push_back(e);
        res.equivalent_streams.push_back(total_streams);
      }

      CMat y(n_d, 1);
      for (int i = 0; i < n_d; ++i) y(i, 0) = ydest[t](i, 0);
      const ZfResult zf = zf_decode(y, e);
      if (zf.rank_deficient) {
        ++res.flagged_singular;
        res.skipped_symbols += total_streams;
        continue;
      }
      for (int i = 0; i < n_s_eff; ++i)
        src_score.add(zf.symbols(i, 0), payload.v_source[m](i, static_cast<int>(di)));
      col = n_s_eff;
      for (const auto& [k, w] : active)
        for (int a = 0; a < w; ++a, ++col) dest_relay_stream[k].push_back(zf.symbols(col, 0));
    }

    res.source_symbols += src_score.symbols;
    res.max_rel_err_source = std::max(res.max_rel_err_source, src_score.max_err);
    res.interval_source_err[m] = src_score.max_err;
    res.relay_stream_by_interval[m] = dest_relay_stream;

    if (m >= 1) {
      for (std::size_t k = 0; k < K; ++k) {
        const auto& want = oracle[m - 1][k];
        const std::size_t n = std::min<std::size_t>(dest_relay_stream[k].size(),
                                                    plan.relay_budgets[k].scheduled);
        for (std::size_t i = 0; i < n; ++i)
          rel_score.add(dest_relay_stream[k][i], i < want.size() ? want[i] : cplx{});
      }
      res.relay_symbols += rel_score.symbols;
      res.max_rel_err_relay = std::max(res.max_rel_err_relay, rel_score.max_err);
      res.interval_relay_err[m] = rel_score.max_err;
    }
  }
  return res;
}

}  // namespace relaydof
