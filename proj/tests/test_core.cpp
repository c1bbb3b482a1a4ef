#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "mpg/core.hpp"

using namespace mpg;
using boost::multiprecision::cpp_rational;

namespace {

GameParameters gp(double alpha, std::vector<long double> betas, double c, double rho2, double rho1) {
  return GameParameters{LogScalar::from_value(alpha), DiagonalContraction(std::move(betas)), c, rho2, rho1};
}

int64_t ulp_distance(double a, double b) {
  int64_t ia, ib;
  std::memcpy(&ia, &a, sizeof a);
  std::memcpy(&ib, &b, sizeof b);
  return std::llabs(ia - ib);
}

}  // namespace

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational::parse("-7/4") == Rational(-7, 4));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(ipow(12, 3) == Rational(1728));
  CHECK_THROWS_AS(Rational(INT64_MAX) * Rational(2), std::overflow_error);
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("log scalar round trip within 4 ulp") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e(-300, 300), m(1, 10);
  for (int i = 0; i < 20000; ++i) {
    double x = m(rng) * std::pow(10.0, std::floor(e(rng)));
    if (x > 1e300 || x < 1e-300) continue;
    double back = static_cast<double>(LogScalar::from_value(x).value());
    CHECK(ulp_distance(x, back) <= 4);
  }
}

TEST_CASE("log scalar arithmetic") {
  auto a = LogScalar::from_value(0.3), b = LogScalar::from_value(0.2);
  CHECK(static_cast<double>((a + b).value()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(static_cast<double>((a - b).value()) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(static_cast<double>((a * b).value()) == doctest::Approx(0.06).epsilon(1e-15));
  CHECK((a - a).is_zero());
  CHECK_THROWS(LogScalar::from_value(-1));
  CHECK_THROWS(LogScalar::from_log(std::nanl("")));
  // magnitudes far below double range stay representable
  auto tiny = LogScalar::from_log(-1e5);
  CHECK((tiny * tiny).log() == doctest::Approx(-2e5));
}

TEST_CASE("diagonal contraction caches") {
  auto A = DiagonalContraction::from_reciprocals({10, 20});
  CHECK(A.n() == 2);
  CHECK(static_cast<double>(A.beta_max()) == doctest::Approx(0.1));
  CHECK(static_cast<double>(A.log_prod()) == doctest::Approx(std::log(1.0 / 200)));
  CHECK(A.theorem_eligible());
  CHECK_FALSE(DiagonalContraction({0.3L}).theorem_eligible());
  CHECK_FALSE(DiagonalContraction::from_reciprocals({5}).theorem_eligible());
  auto A2 = A.power(2);
  CHECK(static_cast<double>(A2.betas()[0]) == doctest::Approx(0.01));
  CHECK_THROWS(DiagonalContraction({1.0L}));
  CHECK_THROWS(A.power(0));
}

TEST_CASE("validate_params examples") {
  auto ok = validate_params(gp(0.1, {0.1L}, 0.5, 1, 1));
  CHECK(ok.valid);
  CHECK(ok.theorem_eligible);
  CHECK(ok.c_positive);
  auto hot = validate_params(gp(0.1, {0.3L}, 0.5, 1, 1));
  CHECK(hot.valid);
  CHECK_FALSE(hot.theorem_eligible);
  auto bad = validate_params(gp(0.1, {0.1L}, 0.5, 2, 1));
  CHECK_FALSE(bad.valid);
  CHECK(bad.first_failure() == "rho1 < rho2");
  CHECK_FALSE(validate_params(gp(0.1, {0.1L}, 1.0, 1, 1)).valid);
  CHECK_FALSE(validate_params(gp(0.1, {0.1L}, 0.0, 1, 1)).c_positive);
}

TEST_CASE("dominates examples") {
  auto p = gp(0.1, {0.1L}, 0.5, 1, 2);
  CHECK(dominates(p, p));
  CHECK(dominates(p, gp(0.2, {0.1L}, 0.6, 1.5, 1.5)));
  CHECK_FALSE(dominates(gp(0.2, {0.1L}, 0.5, 1, 2), p));
  CHECK_THROWS_WITH(dominates(p, gp(0.1, {0.15L}, 0.5, 1, 2)), "incomparable");
}

TEST_CASE("dominates is a partial order on random tuples") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(1, 3);
  auto draw = [&] {
    double r2 = pick(rng), r1 = r2 + pick(rng) - 1;
    return gp(0.1 * pick(rng), {0.1L}, 0.2 * pick(rng), r2, r1);
  };
  for (int i = 0; i < 3000; ++i) {
    auto a = draw(), b = draw(), c = draw();
    CHECK(dominates(a, a));
    if (dominates(a, b) && dominates(b, a)) {
      CHECK(a.alpha == b.alpha);
      CHECK(a.c == b.c);
      CHECK(a.rho1 == b.rho1);
      CHECK(a.rho2 == b.rho2);
    }
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("combine_alphas examples") {
  auto a = LogScalar::from_value(0.37);
  CHECK(static_cast<double>(combine_alphas({a}, 0.4).value()) == doctest::Approx(0.37).epsilon(1e-15));
  auto two = combine_alphas({LogScalar::from_value(0.01), LogScalar::from_value(0.04)}, 0.5);
  CHECK(static_cast<double>(two.value()) == doctest::Approx(0.09).epsilon(1e-14));
  std::vector<LogScalar> copies(7, a);
  CHECK(static_cast<double>(combine_alphas(copies, 0.3).log()) ==
        doctest::Approx(std::log(7.0) / 0.3 + std::log(0.37)).epsilon(1e-14));
  CHECK_THROWS_WITH(combine_alphas({a}, 0.0), "countable intersection undefined at c=0");
}

TEST_CASE("combine_alphas is permutation invariant and monotone") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lg(-50, 0), cc(0.05, 0.95);
  for (int i = 0; i < 500; ++i) {
    std::vector<LogScalar> v;
    for (int j = 0; j < 6; ++j) v.push_back(LogScalar::from_log(lg(rng)));
    double c = cc(rng);
    auto base = combine_alphas(v, c);
    auto w = v;
    std::shuffle(w.begin(), w.end(), rng);
    CHECK(combine_alphas(w, c) == base);
    w = v;
    w[2] = LogScalar::from_log(v[2].log() + 0.5);
    CHECK(combine_alphas(w, c) >= base);
  }
}

TEST_CASE("safe_floor_ratio examples") {
  auto exact = safe_floor_ratio(Rational::parse("0.5"), Rational::parse("0.1"));
  CHECK(exact.tag == FloorResult::Tag::Exact);
  CHECK(*exact.integer == 5);
  // the double 0.1 exceeds 1/10, so 0.5/0.1 in binary floors to 4
  CHECK(*safe_floor_ratio(0.5, LogScalar::from_value(0.1)).integer <= 5);
  auto big = safe_floor_ratio(1e-3, LogScalar::from_log(-2000));
  CHECK(big.tag == FloorResult::Tag::Approximate);
  CHECK(static_cast<double>(big.log_value) == doctest::Approx(2000 + std::log(1e-3)).epsilon(1e-12));
  CHECK(log_pow_beta(std::log(0.1L), big.log_value) == -std::numeric_limits<long double>::infinity());
  auto inf = safe_floor_ratio(0.1, LogScalar::from_value(0.5));
  CHECK(inf.tag == FloorResult::Tag::Infeasible);
  CHECK(*inf.integer == 0);
  CHECK(safe_floor_ratio(Rational::parse("0.1"), Rational::parse("0.5")).tag == FloorResult::Tag::Infeasible);
}

TEST_CASE("safe_floor_ratio never exceeds the exact floor") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ud(1e-6, 0.999), le(-36, 0);
  for (int i = 0; i < 20000; ++i) {
    double delta = ud(rng);
    double alpha = std::exp(le(rng));
    auto f = safe_floor_ratio(delta, LogScalar::from_value(alpha));
    cpp_rational exact = cpp_rational(delta) / cpp_rational(alpha);
    cpp_rational fl = boost::multiprecision::numerator(exact) / boost::multiprecision::denominator(exact);
    if (f.tag == FloorResult::Tag::Infeasible) {
      CHECK(exact < cpp_rational(1.0000001));
      continue;
    }
    REQUIRE(f.integer.has_value());
    CHECK(cpp_rational(*f.integer) <= fl);
    if (f.tag == FloorResult::Tag::Exact) CHECK(cpp_rational(*f.integer) == fl);
  }
}

TEST_CASE("box region exact tests") {
  auto A = DiagonalContraction::from_reciprocals({4, 5});
  auto b = BoxRegion::scaled({Rational(0), Rational(0)}, Rational(1), A, 1);
  CHECK(b.half[0] == Rational(1, 4));
  CHECK(b.half[1] == Rational(1, 5));
  BoxRegion touch{{Rational(1, 2), Rational(0)}, {Rational(1, 4), Rational(1, 5)}};
  CHECK(b.intersects(touch));
  CHECK_FALSE(b.contains(touch));
  CHECK(b.contains_point({Rational(1, 4), Rational(1, 5)}));
  CHECK_FALSE(b.interior_contains_point({Rational(1, 4), Rational(0)}));
  for (double x : {0.1, 1.0 / 3, 2.5e-300, 123456.789})
    CHECK(std::stod(format_ld(x, 17)) == x);
}
