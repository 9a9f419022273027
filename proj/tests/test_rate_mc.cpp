#include <cmath>
#include <limits>

#include "doctest.h"
#include "relaydof/rate_mc.hpp"
#include "test_helpers.hpp"

using namespace relaydof;
using relaydof::testing::make_scenario;
using relaydof::testing::toy_scenario;

TEST_CASE("slope fit recovers an exact linear rate curve") {
  std::vector<RatePoint> pts;
  for (const double db : {10.0, 20.0, 30.0, 40.0}) {
    RatePoint p;
    p.snr_db = db;
    p.rate = 2.0 * (db * std::log2(10.0) / 10.0) + 3.0;
    pts.push_back(p);
  }
  const SlopeFit fit = estimate_dof_slope(pts);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
}

TEST_CASE("slope fit rejects degenerate inputs") {
  CHECK_THROWS_AS(estimate_dof_slope({RatePoint{30, 5, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_dof_slope({RatePoint{30, 5, 1, 0}, RatePoint{30, 6, 1, 0}}),
                  std::invalid_argument);
}

TEST_CASE("zero transmit power gives zero rate") {
  const auto p = estimate_rate(toy_scenario(), SchemeId::Direct,
                               -std::numeric_limits<double>::infinity(), 4, 3);
  CHECK(p.rate == 0.0);
}

TEST_CASE("rate estimates are deterministic in the seed") {
  const auto a = estimate_rate(toy_scenario(), SchemeId::Thm1Equal, 30.0, 25, 11);
  const auto b = estimate_rate(toy_scenario(), SchemeId::Thm1Equal, 30.0, 25, 11);
  CHECK(a.rate == b.rate);
  CHECK(a.std_err == b.std_err);
  const auto c = estimate_rate(toy_scenario(), SchemeId::Thm1Equal, 30.0, 25, 12);
  CHECK(a.rate != c.rate);
}

TEST_CASE("rate is non-decreasing in snr within noise") {
  RatePoint prev;
  bool first = true;
  for (const double db : {10.0, 20.0, 30.0, 40.0}) {
    const auto p = estimate_rate(toy_scenario(), SchemeId::Direct, db, 60, 5);
    if (!first) CHECK(p.rate > prev.rate - 2 * (p.std_err + prev.std_err));
    prev = p;
    first = false;
  }
}

TEST_CASE("scalar static channel approaches one degree of freedom") {
  const auto s = make_scenario(1, 1, 1, 1, 512, 512, 512);
  std::vector<RatePoint> pts;
  for (const double db : {20.0, 30.0, 40.0})
    pts.push_back(estimate_rate(s, SchemeId::Direct, db, 80, 21));
  const SlopeFit fit = estimate_dof_slope(pts);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("direct-link slopes track the formula on small configs") {
  {
    std::vector<RatePoint> pts;
    for (const double db : {25.0, 30.0, 35.0, 40.0})
      pts.push_back(estimate_rate(toy_scenario(), SchemeId::Direct, db, 120, 33));
    CHECK(std::abs(estimate_dof_slope(pts).slope - 1.5) < 0.15);
  }
  {
    // 1x2 link with T = 6: DoF 1 - 1/6 = 5/6.
    const auto s = make_scenario(1, 1, 1, 2, 6, 6, 6);
    std::vector<RatePoint> pts;
    for (const double db : {25.0, 30.0, 35.0, 40.0})
      pts.push_back(estimate_rate(s, SchemeId::Direct, db, 120, 34));
    CHECK(std::abs(estimate_dof_slope(pts).slope - 5.0 / 6.0) < 0.15);
  }
}

TEST_CASE("standard error shrinks roughly like one over root trials") {
  const auto few = estimate_rate(toy_scenario(), SchemeId::Thm1Equal, 30.0, 40, 9);
  const auto many = estimate_rate(toy_scenario(), SchemeId::Thm1Equal, 30.0, 640, 9);
  CHECK(many.std_err < few.std_err);
  CHECK(many.std_err * 2.5 < few.std_err * 4.5);  // ~4x fewer, allow slack
}
