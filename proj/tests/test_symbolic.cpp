#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "oracle.hpp"
#include "pcim/errors.hpp"
#include "pcim/symbolic.hpp"

using namespace pcim;

namespace {

std::string word(std::initializer_list<int> symbols) {
  std::string w;
  for (int s : symbols) w.push_back(static_cast<char>(s));
  return w;
}

ComplexityProfile synthetic_profile(std::vector<std::uint64_t> values, int alphabet) {
  ComplexityProfile profile;
  profile.values = std::move(values);
  profile.alphabet = alphabet;
  profile.horizon_T = 10000;
  return profile;
}

}  // namespace

TEST_CASE("itinerary on e2 matches the exact orbit") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  Itinerary itin = itinerary(e2, rat(1, 4), 6);
  REQUIRE(itin.completed());
  CHECK(itin.symbols == word({1, 2, 1, 2, 1, 2}));

  // exact orbit from the oracle: 1/4, 5/8, 5/24, 29/48, 29/144, 173/288
  auto points = oracle::orbit(corpus::e2(), rat(1, 4), 6);
  CHECK(points == std::vector<Rational>{rat(1, 4), rat(5, 8), rat(5, 24), rat(29, 48),
                                        rat(29, 144), rat(173, 288)});
  for (std::size_t t = 0; t < points.size(); ++t)
    CHECK(static_cast<int>(itin.symbols[t]) == *piece_index(e2, points[t]));
}

TEST_CASE("itinerary stops at an exact Delta hit") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  Itinerary itin = itinerary(e2, rat(0), 5);  // f(0) = 1/2
  REQUIRE(!itin.completed());
  CHECK(itin.hit->step == 1);
  CHECK(itin.hit->cut == rat(1, 2));
  CHECK(itin.symbols == word({1}));
}

TEST_CASE("itinerary on the single-piece map") {
  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  Itinerary itin = itinerary(e1, rat(1), 3);
  REQUIRE(itin.completed());
  CHECK(itin.symbols == word({1, 1, 1}));
}

TEST_CASE("word_set") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  Itinerary itin = itinerary(e2, rat(1, 4), 40);
  CHECK(word_set(itin, 2) == std::set<std::string>{word({1, 2}), word({2, 1})});
  CHECK(word_set(itin, 1) == std::set<std::string>{word({1}), word({2})});

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  Itinerary ones = itinerary(e1, rat(1), 10);
  CHECK(word_set(ones, 4) == std::set<std::string>{word({1, 1, 1, 1})});

  CHECK_THROWS_WITH_AS(word_set(ones, 11), doctest::Contains("PrefixTooShort"),
                       PcimError);
  Itinerary cut = itinerary(e2, rat(0), 5);
  CHECK_THROWS_WITH_AS(word_set(cut, 1), doctest::Contains("ItineraryLeftXtilde"),
                       PcimError);
}

TEST_CASE("format_word") {
  CHECK(format_word(word({1, 2, 1}), 2) == "121");
  CHECK(format_word(word({1, 12}), 12) == "1.12");
}

TEST_CASE("complexity profiles on the corpus examples") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  Itinerary itin = itinerary(e2, rat(1, 4), 1100);
  ComplexityProfile profile = complexity_profile(itin, 10);
  CHECK(profile.values == std::vector<std::uint64_t>(10, 2));
  REQUIRE(profile.affine_fit.has_value());
  CHECK(*profile.affine_fit == AffineFit{1, 0, 2});

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  ComplexityProfile flat =
      complexity_profile(itinerary(e1, rat(1), 1100), 5, /*confirm_window=*/3);
  CHECK(flat.values == std::vector<std::uint64_t>(5, 1));
  REQUIRE(flat.affine_fit.has_value());
  CHECK(*flat.affine_fit == AffineFit{1, 0, 1});

  ValidatedPCIM rot = validate_pcim(corpus::rot_a());
  ComplexityProfile rotp = complexity_profile(itinerary(rot, rat(0), 1100), 10);
  CHECK(rotp.values == std::vector<std::uint64_t>(10, 2));
  CHECK(*rotp.affine_fit == AffineFit{1, 0, 2});
}

TEST_CASE("complexity values equal the oracle factor counts") {
  std::mt19937_64 rng(12);
  for (const auto& def : corpus::all()) {
    ValidatedPCIM map = validate_pcim(def);
    for (int trial = 0; trial < 5; ++trial) {
      Rational x = oracle::random_in(rng, map.domain());
      Itinerary itin = itinerary(map, x, 600);
      if (!itin.completed()) continue;
      ComplexityProfile profile = complexity_profile(itin, 12);
      for (int n = 1; n <= 12; ++n)
        CHECK(profile.p(n) == oracle::factor_count(itin.symbols, n));
    }
  }
}

TEST_CASE("detect_affine") {
  // constant profile: alpha = 0, beta = p(1)
  auto fit = detect_affine(synthetic_profile({2, 2, 2, 2, 2}, 2), 3);
  CHECK(std::get<AffineFit>(fit) == AffineFit{1, 0, 2});

  // strictly growing with slope 2 and beta = 0: outside the theorem range
  auto undet = detect_affine(synthetic_profile({2, 4, 6, 8, 10, 12}, 3), 3);
  CHECK(std::get<Undetermined>(undet).reason ==
        "fitted beta below 1, outside the theorem range");

  // same profile over a binary alphabet: slope 2 cannot occur at all
  CHECK_THROWS_WITH_AS(detect_affine(synthetic_profile({2, 4, 6, 8, 10, 12}, 2), 3),
                       doctest::Contains("AlphaOutOfRange"), PcimError);

  // non-constant differences through n_max
  auto unstable = detect_affine(synthetic_profile({1, 2, 4, 8, 16, 32}, 9), 3);
  CHECK(std::holds_alternative<Undetermined>(unstable));

  CHECK_THROWS_WITH_AS(detect_affine(synthetic_profile({1, 2}, 2), 3),
                       doctest::Contains("PrefixTooShort"), PcimError);
}

TEST_CASE("verify_cycle_word on e2") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  auto orbit = verify_cycle_word(e2, word({1, 2}));
  REQUIRE(orbit.has_value());
  CHECK(orbit->points == std::vector<Rational>{rat(1, 5), rat(3, 5)});
  CHECK(orbit->period() == 2);

  // the rotated word certifies the same cycle
  auto rotated = verify_cycle_word(e2, word({2, 1}));
  REQUIRE(rotated.has_value());
  CHECK(*rotated == *orbit);

  // word (1,1) has fixed point 1 = b/(1-a), which lies in piece 2
  CHECK(!verify_cycle_word(e2, word({1, 1})).has_value());

  // a doubled word reduces to the minimal period
  auto doubled = verify_cycle_word(e2, word({1, 2, 1, 2}));
  REQUIRE(doubled.has_value());
  CHECK(doubled->period() == 2);
}

TEST_CASE("find_exact_cycle") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  auto cycle = find_exact_cycle(e2, rat(1, 5), 100);
  REQUIRE(cycle.has_value());
  CHECK(cycle->points == std::vector<Rational>{rat(1, 5), rat(3, 5)});

  // transient start: denominators grow forever, no exact repeat
  CHECK(!find_exact_cycle(e2, rat(1, 4), 500).has_value());

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  auto fixed = find_exact_cycle(e1, rat(0), 10);
  REQUIRE(fixed.has_value());
  CHECK(fixed->points == std::vector<Rational>{rat(0)});
}

TEST_CASE("classify_omega on the spec examples") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());

  OmegaClass via_shadowing = classify_omega(e2, rat(1, 4), 2000, 16);
  REQUIRE(via_shadowing.periodic() != nullptr);
  CHECK(via_shadowing.periodic()->points == std::vector<Rational>{rat(1, 5), rat(3, 5)});
  CHECK(via_shadowing.periodic()->period() == 2);

  OmegaClass via_repeat = classify_omega(e2, rat(1, 5), 2000, 16);
  REQUIRE(via_repeat.periodic() != nullptr);
  CHECK(*via_repeat.periodic() == *via_shadowing.periodic());

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  OmegaClass banach = classify_omega(e1, rat(1), 2000, 16);
  REQUIRE(banach.periodic() != nullptr);
  CHECK(banach.periodic()->points == std::vector<Rational>{rat(0)});
  CHECK(banach.periodic()->period() == 1);

  CHECK_THROWS_WITH_AS(classify_omega(e2, rat(0), 2000, 16),
                       doctest::Contains("LeftXtilde"), PcimError);

  ValidatedPCIM overlap = validate_pcim(corpus::overlap());
  CHECK_THROWS_WITH_AS(classify_omega(overlap, rat(1, 3), 2000, 16),
                       doctest::Contains("SeparationRequired"), PcimError);
}

TEST_CASE("classify_omega on the remaining corpus attractors") {
  ValidatedPCIM rot_a = validate_pcim(corpus::rot_a());
  OmegaClass a = classify_omega(rot_a, rat(0), 2000, 16);
  REQUIRE(a.periodic() != nullptr);
  CHECK(a.periodic()->points == std::vector<Rational>{rat(1, 15), rat(11, 15)});

  ValidatedPCIM rot_b = validate_pcim(corpus::rot_b());
  OmegaClass b = classify_omega(rot_b, rat(0), 2000, 16);
  REQUIRE(b.periodic() != nullptr);
  CHECK(b.periodic()->points == std::vector<Rational>{rat(1, 5), rat(4, 5)});

  ValidatedPCIM three = validate_pcim(corpus::three_piece());
  OmegaClass mid = classify_omega(three, rat(1, 2), 2000, 16);
  REQUIRE(mid.periodic() != nullptr);
  CHECK(mid.periodic()->points == std::vector<Rational>{rat(4, 9)});
  OmegaClass side = classify_omega(three, rat(9, 10), 2000, 16);
  REQUIRE(side.periodic() != nullptr);
  CHECK(side.periodic()->points == std::vector<Rational>{rat(8, 45), rat(32, 45)});
}

TEST_CASE("property: complexity is monotone with persistent plateaus") {
  std::mt19937_64 rng(34);
  for (const auto& def : corpus::all()) {
    ValidatedPCIM map = validate_pcim(def);
    for (int trial = 0; trial < 8; ++trial) {
      Rational x = oracle::random_in(rng, map.domain());
      Itinerary itin = itinerary(map, x, 1200);
      if (!itin.completed()) continue;
      ComplexityProfile profile = complexity_profile(itin, 16);
      std::optional<std::uint64_t> plateau;
      for (int n = 1; n < 16; ++n) {
        CHECK(profile.p(n + 1) >= profile.p(n));
        if (plateau) CHECK(profile.p(n + 1) == *plateau);
        if (!plateau && profile.p(n + 1) == profile.p(n)) plateau = profile.p(n);
      }
    }
  }
}

TEST_CASE("property: growth bound p(n+1) - p(n) <= N - 1 under separation") {
  std::mt19937_64 rng(35);
  for (const auto& def : corpus::separated()) {
    ValidatedPCIM map = validate_pcim(def);
    const std::uint64_t slack = static_cast<std::uint64_t>(map.piece_count()) - 1;
    for (int trial = 0; trial < 8; ++trial) {
      Rational x = oracle::random_in(rng, map.domain());
      Itinerary itin = itinerary(map, x, 1200);
      if (!itin.completed()) continue;
      ComplexityProfile profile = complexity_profile(itin, 16);
      for (int n = 1; n < 16; ++n) CHECK(profile.p(n + 1) - profile.p(n) <= slack);
    }
  }
}

TEST_CASE("property: eventually constant complexity equals the period") {
  for (const auto& def : corpus::separated()) {
    ValidatedPCIM map = validate_pcim(def);
    Rational seed = map.domain().midpoint();
    OmegaClass cls;
    try {
      cls = classify_omega(map, seed, 2000, 16);
    } catch (const PcimError&) {
      continue;
    }
    if (!cls.periodic()) continue;
    // the cycle point's own itinerary is purely periodic
    Itinerary tail = itinerary(map, cls.periodic()->points.front(), 500);
    ComplexityProfile profile = complexity_profile(tail, 24);
    CHECK(profile.p(24) == static_cast<std::uint64_t>(cls.periodic()->period()));
    REQUIRE(profile.affine_fit.has_value());
    CHECK(profile.affine_fit->alpha == 0);
  }
}

TEST_CASE("itinerary determinism") {
  ValidatedPCIM rot = validate_pcim(corpus::rot_a());
  Itinerary first = itinerary(rot, rat(1, 3), 800);
  Itinerary second = itinerary(rot, rat(1, 3), 800);
  CHECK(first.symbols == second.symbols);
  CHECK(first.completed() == second.completed());
}
