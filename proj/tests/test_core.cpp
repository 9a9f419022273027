#include "doctest.h"
#include "relaydof/rational.hpp"
#include "relaydof/scenario.hpp"
#include "relaydof/util.hpp"
#include "test_helpers.hpp"

using namespace relaydof;
using relaydof::testing::make_scenario;

TEST_CASE("rational normalizes to lowest terms with positive denominator") {
  CHECK(Rational(6, 8) == Rational(3, 4));
  CHECK(Rational(-6, 8) == Rational(-3, 4));
  CHECK(Rational(6, -8) == Rational(-3, 4));
  CHECK(Rational(0, 5) == Rational(0));
  CHECK(Rational(9, 4).str() == "9/4");
  CHECK(Rational(8, 4).str() == "2");
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic round-trips exactly") {
  // (a+b)-b == a and (a*b)/b == a for a grid of small fractions.
  for (int an = -6; an <= 6; ++an)
    for (int ad = 1; ad <= 5; ++ad)
      for (int bn = -6; bn <= 6; ++bn)
        for (int bd = 1; bd <= 5; ++bd) {
          const Rational a(an, ad), b(bn, bd);
          CHECK((a + b) - b == a);
          if (bn != 0) CHECK((a * b) / b == a);
        }
}

TEST_CASE("rational ordering uses exact cross multiplication") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7, 4) > Rational(3, 2));
  CHECK(Rational(2, 4) <= Rational(1, 2));
  CHECK(min(Rational(9, 4), Rational(2)) == Rational(2));
}

TEST_CASE("rational detects 64-bit overflow instead of wrapping") {
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("validity checks follow the coherence floors") {
  // Clean configuration from the running toy example.
  CHECK(validate_scenario(make_scenario(2, 2, 2, 3, 8, 0, 8)).empty());

  // Short relay-destination coherence flags t_rd >= 2*max(n_R, N_D).
  const auto v = validate_scenario(make_scenario(3, 3, 3, 5, 12, 0, 4));
  REQUIRE(v.size() == 1);
  CHECK(v[0].id == "t_rd_min");

  // Malformed scenarios are hard errors.
  CHECK_THROWS_AS(validate_scenario(make_scenario(0, 1, 1, 1, 8, 8, 8)), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(2, 2, 2, 3, -4, 0, 8), std::invalid_argument);
  auto bad_offset = make_scenario(2, 2, 2, 3, 8, 0, 8);
  bad_offset.relays[0].offset_rd = 9;
  CHECK_THROWS_AS(validate_scenario(bad_offset), std::invalid_argument);
}

TEST_CASE("validate_scenario is pure") {
  const auto s = make_scenario(3, 3, 3, 5, 12, 0, 4);
  const auto a = validate_scenario(s);
  const auto b = validate_scenario(s);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);
}

TEST_CASE("scenario json round-trip including the inf encoding") {
  auto s = make_scenario(2, 2, 1, 3, 8, 0, 8, 0, 4);
  s.snr = 316.23;
  const std::string text = scenario_to_json(s);
  const Scenario back = scenario_from_json(text);
  CHECK(back.antennas.n_s == 2);
  CHECK(back.antennas.n_d == 3);
  CHECK(back.antennas.n_r_tx_max == 1);
  CHECK_FALSE(back.coherence.t_sr.is_finite());
  CHECK(back.coherence.t_rd.slots() == 8);
  CHECK(back.relays.size() == 1);
  CHECK(back.relay(0).offset_rd == 4);
  CHECK(back.snr == doctest::Approx(316.23));
  CHECK(scenario_hash(back) == scenario_hash(s));
}

TEST_CASE("multi-relay scenarios parse a relays array") {
  const char* text = R"({
    "antennas": {"n_s": 3, "n_d": 6},
    "coherence": {"t_sd": 5, "t_sr": 10, "t_rd": "inf"},
    "relays": [
      {"n_r_rx": 1, "n_r_tx_max": 1, "t_sr": 10, "t_rd": "inf"},
      {"n_r_rx": 1, "n_r_tx_max": 1, "t_sr": 20, "t_rd": "inf"}
    ],
    "snr": 1000.0
  })";
  const Scenario s = scenario_from_json(text);
  CHECK(s.relay_count() == 2);
  CHECK(s.relay(1).t_sr.slots() == 20);
  CHECK_FALSE(s.relay(1).t_rd.is_finite());
  CHECK(s.n_s_star(1) == 1);
}

TEST_CASE("malformed json is rejected with a diagnostic") {
  CHECK_THROWS_AS(scenario_from_json("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(scenario_from_json(R"({"antennas":{"n_s":0,"n_d":3},
    "coherence":{"t_sd":8,"t_sr":8,"t_rd":8}})"),
                  std::invalid_argument);
}

TEST_CASE("floor_div handles negative numerators for offset blocks") {
  CHECK(floor_div(5, 8) == 0);
  CHECK(floor_div(-1, 8) == -1);
  CHECK(floor_div(-8, 8) == -1);
  CHECK(floor_div(-9, 8) == -2);
}
