#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "oracle.hpp"
#include "pcim/errors.hpp"
#include "pcim/map.hpp"

using namespace pcim;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const PcimError& e) {
    return e.code();
  }
  FAIL("expected a PcimError");
  return Errc::BadParameters;
}

}  // namespace

TEST_CASE("rational parsing accepts exactly the canonical forms") {
  CHECK(to_string(*try_parse_rational("0")) == "0");
  CHECK(to_string(*try_parse_rational("5")) == "5");
  CHECK(to_string(*try_parse_rational("-7")) == "-7");
  CHECK(to_string(*try_parse_rational("3/4")) == "3/4");
  CHECK(to_string(*try_parse_rational("-22/7")) == "-22/7");
  CHECK(*try_parse_rational("3/4") == rat(3, 4));

  for (const char* bad : {"", "+3", "2/4", "1/1", "0/5", "-0", "03", "0.5", ".5", "3/-2",
                          "/4", "4/", "4 /5", " 4", "4 ", "1e3", "a"}) {
    CAPTURE(bad);
    CHECK(!try_parse_rational(bad).has_value());
  }
  CHECK(code_of([] { parse_rational("0.5"); }) == Errc::NonCanonicalRational);
}

TEST_CASE("rational helpers") {
  CHECK(rat(6, 4) == rat(3, 2));
  CHECK(rat(2, -4) == rat(-1, 2));
  CHECK(pow_rational(rat(1, 2), 40) == rat(1, 1099511627776L));
  CHECK(log_rational(rat(1)) == doctest::Approx(0.0));
  CHECK(log_rational(pow_rational(rat(2), 1000)) ==
        doctest::Approx(1000 * 0.6931471805599453).epsilon(1e-12));
  CHECK(to_double(rat(1, 4)) == doctest::Approx(0.25));
}

TEST_CASE("interval basics") {
  ClosedInterval box(rat(1, 3), rat(1, 2));
  CHECK(box.diameter() == rat(1, 6));
  CHECK(box.midpoint() == rat(5, 12));
  CHECK(box.contains(rat(1, 3)));
  CHECK(!box.contains(rat(1, 4)));
  CHECK(disjoint(box, ClosedInterval(rat(3, 4), rat(1))));
  CHECK(!disjoint(box, ClosedInterval(rat(1, 2), rat(1))));
  CHECK(*intersect(box, ClosedInterval(rat(2, 5), rat(1))) ==
        ClosedInterval(rat(2, 5), rat(1, 2)));
  CHECK_THROWS_AS(ClosedInterval(rat(1), rat(0)), std::invalid_argument);
}

TEST_CASE("validate_pcim computes lambda and D") {
  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  CHECK(e1.contraction_rate() == rat(1, 2));
  CHECK(e1.one_sided_limit_set().empty());
  CHECK(e1.piece_count() == 1);

  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  CHECK(e2.contraction_rate() == rat(1, 2));
  // one-sided limits at 1/2 by direct substitution: 3/4 and 1/6
  CHECK(e2.one_sided_limit_set() == std::vector<Rational>{rat(1, 6), rat(3, 4)});
}

TEST_CASE("validate_pcim rejects broken definitions") {
  auto def = corpus::e2();
  def.branches[1].slope = rat(3, 2);
  CHECK(code_of([&] { validate_pcim(def); }) == Errc::NotAContraction);

  def = corpus::e2();
  def.branches[1].slope = rat(0);
  CHECK(code_of([&] { validate_pcim(def); }) == Errc::ZeroSlope);

  def = corpus::e2();
  def.cut_points = {rat(1, 2), rat(1, 3)};
  def.branches.push_back(AffineBranch{rat(1, 4), rat(0)});
  CHECK(code_of([&] { validate_pcim(def); }) == Errc::UnorderedCuts);

  def = corpus::e1();
  def.branches[0].intercept = rat(3, 4);  // image [3/4, 5/4] escapes [0,1]
  CHECK(code_of([&] { validate_pcim(def); }) == Errc::ImageEscapesDomain);

  def = corpus::e2();
  def.branches.pop_back();
  CHECK(code_of([&] { validate_pcim(def); }) == Errc::MalformedDefinition);
}

TEST_CASE("evaluate and piece_index on e2") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  CHECK(evaluate(e2, rat(1, 4)) == rat(5, 8));
  CHECK(code_of([&] { evaluate(e2, rat(1, 2)); }) == Errc::OnCutPoint);
  CHECK(code_of([&] { evaluate(e2, rat(2)); }) == Errc::OutOfDomain);

  CHECK(piece_index(e2, rat(3, 4)) == 2);
  CHECK(piece_index(e2, rat(0)) == 1);
  CHECK(!piece_index(e2, rat(1, 2)).has_value());

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  CHECK(evaluate(e1, rat(0)) == rat(0));
  CHECK(piece_index(e1, rat(1)) == 1);
}

TEST_CASE("open ends adjoin endpoints to Delta") {
  auto def = corpus::e1();
  def.open_ends = {false, true};
  ValidatedPCIM map = validate_pcim(def);
  CHECK(map.delta() == std::vector<Rational>{rat(1)});
  CHECK(!piece_index(map, rat(1)).has_value());
  CHECK(piece_index(map, rat(0)) == 1);
  // only the inward limit exists at an adjoined endpoint
  OneSidedLimits lim = one_sided_limits(map, rat(1));
  CHECK(lim.left == rat(1, 2));
  CHECK(!lim.right.has_value());
  CHECK(map.one_sided_limit_set() == std::vector<Rational>{rat(1, 2)});
}

TEST_CASE("check_separation") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  const SeparationResult& sep = check_separation(e2);
  CHECK(sep.separated());
  CHECK(sep.images == std::vector<ClosedInterval>{
                          ClosedInterval(rat(1, 2), rat(3, 4)),
                          ClosedInterval(rat(1, 6), rat(1, 3))});

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  CHECK(check_separation(e1).separated());

  ValidatedPCIM overlap = validate_pcim(corpus::overlap());
  const SeparationResult& bad = check_separation(overlap);
  REQUIRE(!bad.separated());
  CHECK(bad.violation->piece_a == 1);
  CHECK(bad.violation->piece_b == 2);
  CHECK(bad.violation->overlap == ClosedInterval(rat(1, 2), rat(1, 2)));
}

TEST_CASE("one_sided_limits") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  OneSidedLimits lim = one_sided_limits(e2, rat(1, 2));
  CHECK(lim.left == rat(3, 4));
  CHECK(lim.right == rat(1, 6));

  ValidatedPCIM rot = validate_pcim(contracted_rotation(rat(1, 2), rat(7, 10)));
  lim = one_sided_limits(rot, rat(3, 5));
  CHECK(lim.left == rat(1));
  CHECK(lim.right == rat(0));

  ValidatedPCIM e1 = validate_pcim(corpus::e1());
  CHECK(code_of([&] { one_sided_limits(e1, rat(1, 2)); }) == Errc::NotACutPoint);
}

TEST_CASE("check_D_in_Xtilde") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  DomainCheck check = check_D_in_Xtilde(e2, 100);
  CHECK(check.verified());
  CHECK(check.horizon == 100);

  CHECK(check_D_in_Xtilde(validate_pcim(corpus::e1()), 5).verified());

  // right limit at 1/2 is 1/3*1/2 + 1/3 = 1/2, an element of Delta itself
  PCIMDefinition def;
  def.domain = ClosedInterval(rat(0), rat(1));
  def.cut_points = {rat(1, 2)};
  def.branches = {AffineBranch{rat(1, 2), rat(1, 2)}, AffineBranch{rat(1, 3), rat(1, 3)}};
  DomainCheck fail0 = check_D_in_Xtilde(validate_pcim(def), 10);
  REQUIRE(!fail0.verified());
  CHECK(fail0.failure->point == rat(1, 2));
  CHECK(fail0.failure->step == 0);

  // d = 3/4 solves (1/3)d + 1/4 = 1/2, so it lands on Delta after one step
  def.branches = {AffineBranch{rat(1, 2), rat(1, 2)}, AffineBranch{rat(1, 3), rat(1, 4)}};
  DomainCheck fail1 = check_D_in_Xtilde(validate_pcim(def), 10);
  REQUIRE(!fail1.verified());
  if (fail1.failure->point == rat(3, 4)) CHECK(fail1.failure->step == 1);
}

TEST_CASE("contracted_rotation") {
  PCIMDefinition def = contracted_rotation(rat(1, 2), rat(7, 10));
  CHECK(def.cut_points == std::vector<Rational>{rat(3, 5)});
  CHECK(def.branches[0].slope == rat(1, 2));
  CHECK(def.branches[0].intercept == rat(7, 10));
  CHECK(def.branches[1].slope == rat(1, 2));
  CHECK(def.branches[1].intercept == rat(-3, 10));

  CHECK(code_of([] { contracted_rotation(rat(1, 2), rat(1, 4)); }) ==
        Errc::BadParameters);

  ValidatedPCIM steep = validate_pcim(contracted_rotation(rat(9, 10), rat(1, 5)));
  const SeparationResult& sep = check_separation(steep);
  CHECK(sep.separated());
  CHECK(sep.images == std::vector<ClosedInterval>{ClosedInterval(rat(1, 5), rat(1)),
                                                  ClosedInterval(rat(0), rat(1, 10))});
}

TEST_CASE("property: random contracted rotations validate and separate") {
  std::mt19937_64 rng(20260809);
  std::uniform_int_distribution<long> den(2, 60);
  int tested = 0;
  while (tested < 200) {
    const long dl = den(rng), dd = den(rng);
    std::uniform_int_distribution<long> num_l(1, dl - 1), num_d(1, dd - 1);
    Rational lambda = rat(num_l(rng), dl), delta = rat(num_d(rng), dd);
    if (!(lambda + delta > 1)) continue;
    ++tested;
    ValidatedPCIM map = validate_pcim(contracted_rotation(lambda, delta));
    CHECK(map.contraction_rate() == lambda);
    CHECK(check_separation(map).separated());
  }
}

TEST_CASE("property: exact contraction bound on every piece") {
  std::mt19937_64 rng(7);
  for (const auto& def : corpus::all()) {
    ValidatedPCIM map = validate_pcim(def);
    const Rational& lambda = map.contraction_rate();
    for (int trial = 0; trial < 200; ++trial) {
      Rational x = oracle::random_in(rng, map.domain());
      Rational y = oracle::random_in(rng, map.domain());
      auto px = piece_index(map, x), py = piece_index(map, y);
      if (!px || !py || *px != *py) continue;
      Rational gap = abs(evaluate(map, x) - evaluate(map, y));
      CHECK(gap <= lambda * abs(x - y));
      CHECK(map.domain().contains(evaluate(map, x)));
    }
  }
}

TEST_CASE("property: evaluation agrees with the oracle piece scan") {
  std::mt19937_64 rng(99);
  for (const auto& def : corpus::all()) {
    ValidatedPCIM map = validate_pcim(def);
    for (int trial = 0; trial < 300; ++trial) {
      Rational x = oracle::random_in(rng, map.domain());
      auto expected = oracle::piece_of(def, x);
      auto got = piece_index(map, x);
      CHECK(got == expected);
      if (expected)
        CHECK(evaluate(map, x) == def.branches[*expected - 1].slope * x +
                                      def.branches[*expected - 1].intercept);
    }
  }
}

TEST_CASE("determinism: repeated exact orbits are identical") {
  ValidatedPCIM e2 = validate_pcim(corpus::e2());
  auto run = [&] {
    std::vector<Rational> points;
    Rational x = rat(1, 4);
    for (int t = 0; t < 200; ++t) {
      points.push_back(x);
      x = evaluate(e2, x);
    }
    return points;
  };
  CHECK(run() == run());
}
