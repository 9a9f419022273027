// Acceptance suite: each numbered criterion prints one PASS/FAIL line and
// the binary exits nonzero if any of them fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "relaydof/channel.hpp"
#include "relaydof/dof_engine.hpp"
#include "relaydof/frame_plan.hpp"
#include "relaydof/link_sim.hpp"
#include "relaydof/rate_mc.hpp"
#include "test_helpers.hpp"

using namespace relaydof;
using relaydof::testing::make_scenario;
using relaydof::testing::toy_scenario;

namespace {

int g_failures = 0;

void run_criterion(int number, const std::string& label,
                   const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  if (!detail.empty() && detail.rfind("FAIL:", 0) == 0) {
    ok = false;
    detail = detail.substr(5);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
              secs, detail.empty() ? "" : " - ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string expect(bool cond, const std::string& what) {
  return cond ? std::string() : "FAIL:" + what;
}

}  // namespace

int main() {
  run_criterion(1, "toy example: 7/4 vs direct 3/2, plan agrees", [] {
    const auto s = toy_scenario();
    const auto b = dof_thm1(s, {Thm1CaseKind::EqualTsdTrd, 1});
    if (auto e = expect(b.total == Rational(7, 4), "thm1 total != 7/4"); !e.empty()) return e;
    if (auto e = expect(b.n_r_opt[0] == 1, "n_r_opt != 1"); !e.empty()) return e;
    if (auto e = expect(dof_direct_link(s).total == Rational(3, 2), "direct != 3/2"); !e.empty())
      return e;
    const FramePlan plan = build_frame_plan(s, SchemeId::Thm1Equal);
    if (auto e = expect(accounting_dof(plan) == Rational(7, 4), "plan accounting != 7/4");
        !e.empty())
      return e;
    return std::string("7/4 with n_r=1, baseline 3/2, plan accounting 7/4");
  });

  run_criterion(2, "short-T_RD example: canonical 2, direct 9/4, printed form flagged", [] {
    const auto s = make_scenario(3, 3, 3, 5, 12, 0, 4);
    const auto b = dof_thm1(s, {Thm1CaseKind::TsdMultiple, 3});
    if (auto e = expect(b.total == Rational(2), "canonical != 2"); !e.empty()) return e;
    if (auto e = expect(dof_direct_link(s).total == Rational(9, 4), "direct != 9/4"); !e.empty())
      return e;
    const auto rep = crosscheck_printed(s, SchemeId::Thm1TsdMultiple);
    bool flagged = false;
    for (const auto& row : rep.rows)
      if (!row.equal) flagged = true;
    if (auto e = expect(flagged && !rep.all_equal, "printed mismatch not flagged"); !e.empty())
      return e;
    return std::string("canonical 2 vs direct 9/4; printed form mismatch reported");
  });

  run_criterion(3, "staggered toy: noiseless end-to-end recovery, 14 symbols per interval", [] {
    const auto s = toy_scenario(4);
    const FramePlan plan = build_frame_plan(s, SchemeId::Thm1Equal);
    const std::int64_t per_interval =
        plan.source_data_symbols + plan.relay_budgets[0].scheduled;
    if (auto e = expect(per_interval == 14, "symbols per super-interval != 14"); !e.empty())
      return e;
    const PayloadSet payload = make_payload(plan, 4, 2024);
    const ChannelRealization ch = sample_channels(s, 2024, 4);
    SimOptions opt;
    opt.noiseless = true;
    const SimResult r = run_end_to_end(plan, payload, opt, ch);
    if (auto e = expect(r.max_rel_err_source <= 1e-9 && r.max_rel_err_relay <= 1e-9,
                        "relative error above 1e-9");
        !e.empty())
      return e;
    if (auto e = expect(r.skipped_symbols == 0 && r.flagged_singular == 0, "skipped samples");
        !e.empty())
      return e;
    char buf[128];
    std::snprintf(buf, sizeof buf, "max rel err %.2e (source) %.2e (relay), 14 = 1.75 x 8",
                  r.max_rel_err_source, r.max_rel_err_relay);
    return std::string(buf);
  });

  run_criterion(4, "figure-3 point: 12/5 vs 21/10 at T=10; proposed >= conventional on sweep", [] {
    const auto at_t = [](std::int64_t t) { return make_scenario(3, 3, 3, 5, t, 0, t); };
    const auto b = dof_thm1(at_t(10), {Thm1CaseKind::EqualTsdTrd, 1});
    if (auto e = expect(b.total == Rational(12, 5), "proposed != 12/5"); !e.empty()) return e;
    if (auto e = expect(dof_direct_link(at_t(10)).total == Rational(21, 10), "baseline != 21/10");
        !e.empty())
      return e;
    for (std::int64_t t = 10; t <= 60; ++t) {
      const auto s = at_t(t);
      if (dof_thm1(s, {Thm1CaseKind::EqualTsdTrd, 1}).total < dof_direct_link(s).total)
        return std::string("FAIL:proposed < conventional at T=") + std::to_string(t);
    }
    return std::string("2.4 vs 2.1 at T=10; dominance holds for T in [10,60]");
  });

  run_criterion(5, "figure-4 behavior: direct at K=1, 12/5 for K>=3, non-decreasing", [] {
    Rational prev(0);
    for (std::int64_t k = 1; k <= 12; ++k) {
      const auto s = make_scenario(3, 3, 3, 5, 10, 10 * k, 10);
      const auto b = dof_thm2(s, {Thm2CaseKind::EqualTsdTrd, k, 1});
      if (k == 1 && b.total != Rational(21, 10)) return std::string("FAIL:K=1 != 21/10");
      if (k >= 3 && b.total != Rational(12, 5))
        return std::string("FAIL:K=") + std::to_string(k) + " != 12/5";
      if (b.total < prev) return std::string("FAIL:not monotone at K=") + std::to_string(k);
      prev = b.total;
    }
    return std::string("21/10 at K=1, 9/4 at K=2, 12/5 for K in [3,12]");
  });

  run_criterion(6, "relay scheduling: 123/50 > 12/5 and dominance on the grid", [] {
    const auto s = make_scenario(3, 3, 3, 5, 10, 0, 10);
    const auto b = dof_scheduling(s, SchedulingMode::AlignedThm3);
    if (auto e = expect(b.total == Rational(123, 50), "scheduling != 123/50"); !e.empty())
      return e;
    if (auto e = expect(b.total > Rational(12, 5), "scheduling not above 12/5"); !e.empty())
      return e;
    std::int64_t points = 0;
    for (int n_s = 1; n_s <= 4; ++n_s)
      for (int n_r = 1; n_r <= 4; ++n_r)
        for (int n_d = n_s + 1; n_d <= 8; ++n_d)
          for (std::int64_t t = 8; t <= 40; t += 2) {
            const auto g = make_scenario(n_s, n_r, 4, n_d, t, 0, t);
            if (dof_scheduling(g, SchedulingMode::AlignedThm3).total <
                dof_thm1(g, {Thm1CaseKind::EqualTsdTrd, 1}).total)
              return std::string("FAIL:scheduling below plain scheme on the grid");
            ++points;
          }
    return "2.46 > 2.4; dominance on " + std::to_string(points) + " grid points";
  });

  run_criterion(7, "plan/formula equivalence: exact over the scheme grid", [] {
    std::int64_t points = 0;
    const auto check = [&points](const Scenario& s, SchemeId id) -> std::string {
      try {
        dof_for_scheme(s, id);
      } catch (const std::invalid_argument&) {
        return {};
      }
      for (int a = 0; a <= s.n_r_cap(); ++a) {
        const auto want = canonical_per_nr(s, id, a);
        if (!want) continue;
        PlanOptions opt;
        opt.n_r = std::vector<int>{a};
        const FramePlan plan = build_frame_plan(s, id, opt);
        if (accounting_dof(plan) != *want)
          return "FAIL:" + to_string(id) + " n_r=" + std::to_string(a) + ": plan " +
                 accounting_dof(plan).str() + " != formula " + want->str();
        if (!validate_plan(plan).empty())
          return "FAIL:" + to_string(id) + " plan fails validation";
        ++points;
      }
      return {};
    };
    for (int n_s = 1; n_s <= 3; ++n_s)
      for (int n_r = 1; n_r <= 3; ++n_r)
        for (int n_d = n_s + 1; n_d <= 6; ++n_d)
          for (std::int64_t t : {8, 10, 12, 16}) {
            for (const auto& [s, id] :
                 std::vector<std::pair<Scenario, SchemeId>>{
                     {make_scenario(n_s, n_r, 3, n_d, t, 0, t), SchemeId::Thm1Equal},
                     {make_scenario(n_s, n_r, 3, n_d, t, 0, 2 * t), SchemeId::Thm1TrdMultiple},
                     {make_scenario(n_s, n_r, 3, n_d, 2 * t, 0, t), SchemeId::Thm1TsdMultiple},
                     {make_scenario(n_s, n_r, 3, n_d, t, 2 * t, t), SchemeId::Thm2Equal},
                     {make_scenario(n_s, n_r, 3, n_d, t, 2 * t, 4 * t), SchemeId::Thm2TrdMultiple},
                     {make_scenario(n_s, n_r, 3, n_d, 2 * t, 4 * t, t), SchemeId::Thm2TsdMultiple},
                     {make_scenario(n_s, n_r, 3, n_d, t, 0, t), SchemeId::Thm3Scheduling},
                     {make_scenario(n_s, n_r, 3, n_d, t, 2 * t, 3 * t / 2),
                      SchemeId::Thm4Arbitrary}}) {
              const std::string err = check(s, id);
              if (!err.empty()) return err;
            }
          }
    if (points < 500)
      return "FAIL:only " + std::to_string(points) + " points covered (need >= 500)";
    return std::to_string(points) + " (config, scheme, n_r) points, all exact";
  });

  run_criterion(8, "Monte Carlo slopes: 1.75 +/- 0.15 (scheme), 1.5 +/- 0.15 (direct)", [] {
    const auto slope_of = [](SchemeId id) {
      std::vector<RatePoint> pts;
      for (const double db : {25.0, 30.0, 35.0, 40.0})
        pts.push_back(estimate_rate(toy_scenario(), id, db, 200, 7777));
      return estimate_dof_slope(pts).slope;
    };
    const double proposed = slope_of(SchemeId::Thm1Equal);
    const double control = slope_of(SchemeId::Direct);
    char buf[96];
    std::snprintf(buf, sizeof buf, "slope %.3f (target 1.75), control %.3f (target 1.5)",
                  proposed, control);
    if (std::abs(proposed - 1.75) > 0.15) return "FAIL:" + std::string(buf);
    if (std::abs(control - 1.5) > 0.15) return "FAIL:" + std::string(buf);
    return std::string(buf);
  });

  run_criterion(9, "multi-relay: 33/20 matches the two-relay form; supersets never hurt", [] {
    Scenario s = make_scenario(3, 1, 1, 6, 5, 10, 0);
    RelayLink second = s.relays[0];
    second.t_sr = CoherenceTime::finite(20);
    s.relays.push_back(second);
    const auto multi = dof_multi_relay(s);
    const auto two = dof_two_relay(s, 2, 2);
    if (auto e = expect(multi.total == Rational(33, 20) && two.total == Rational(33, 20),
                        "totals != 33/20");
        !e.empty())
      return e;
    if (auto e = expect(multi.selected_relays.size() == 2, "subset != both relays"); !e.empty())
      return e;

    std::uint64_t state = 99;
    const auto rnd = [&state](std::int64_t lo, std::int64_t hi) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      return lo + static_cast<std::int64_t>((state >> 33) % (hi - lo + 1));
    };
    for (int trial = 0; trial < 40; ++trial) {
      Scenario base = make_scenario(static_cast<int>(rnd(1, 3)), 1, 1,
                                    static_cast<int>(rnd(4, 7)), rnd(4, 8), 0, 0);
      base.relays.clear();
      const int n_relays = static_cast<int>(rnd(2, 4));
      for (int k = 0; k < n_relays; ++k) {
        RelayLink r;
        r.n_r_rx = static_cast<int>(rnd(1, 3));
        r.n_r_tx_max = static_cast<int>(rnd(1, 2));
        r.t_sr = rnd(0, 3) == 0
                     ? CoherenceTime::infinite()
                     : CoherenceTime::finite(base.coherence.t_sd.slots() * rnd(1, 4));
        r.t_rd = rnd(0, 1) == 0 ? CoherenceTime::infinite() : CoherenceTime::finite(16 * rnd(1, 3));
        base.relays.push_back(r);
      }
      Scenario fewer = base;
      fewer.relays.pop_back();
      if (dof_multi_relay(fewer).total > dof_multi_relay(base).total)
        return std::string("FAIL:superset monotonicity violated");
    }
    return std::string("33/20 on both routes; 40 random superset checks hold");
  });

  if (g_failures) {
    std::printf("%d acceptance criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 acceptance criteria passed\n");
  return 0;
}
