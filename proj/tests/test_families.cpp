#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mpg/families.hpp"

using namespace mpg;

namespace {

long double val(LogScalar s) { return s.value(); }

bool inside(const BoxRegion& inner, const BoxRegion& outer) { return outer.contains(inner); }

}  // namespace

TEST_CASE("rco_alpha examples") {
  RcoSpec s{4, 5, 2, 1.0};
  CHECK(static_cast<double>(val(rco_alpha(s, 0.5))) == doctest::Approx(16.2).epsilon(1e-14));
  // m = 1, t -> 0, c -> 1 tends to 9
  RcoSpec lim{4, 5, 1, 1e-9};
  CHECK(static_cast<double>(val(rco_alpha(lim, 1 - 1e-9))) == doctest::Approx(9).epsilon(1e-6));
}

TEST_CASE("rcd_Nt examples") {
  auto a = rcd_Nt(7, 4, 1);
  CHECK(a.value == 26);
  CHECK(a.option1 == 26);
  CHECK(a.option2 == 26);
  CHECK(a.option == 1);
  CHECK_FALSE(a.approximate);
  CHECK(rcd_Nt(12, 17, 1).value == 62);
}

TEST_CASE("rcd_Nt closed form along V = U + l") {
  for (uint64_t U = 2; U <= 100; ++U)
    for (uint64_t l = 0; l <= 10; ++l) {
      CAPTURE(U);
      CAPTURE(l);
      CHECK(rcd_Nt(U, U + l, 1).value == static_cast<long double>(2 * (2 * U + l + 2)));
    }
}

TEST_CASE("ceil_pow_ratio") {
  CHECK(ceil_pow_ratio(7, 1, 6).value == 2);
  CHECK(ceil_pow_ratio(10, 2, 9).value == 12);
  CHECK_FALSE(ceil_pow_ratio(10, 2, 9).approximate);
  auto big = ceil_pow_ratio(uint64_t{1} << 40, 4, 3);
  CHECK(big.approximate);
  CHECK(big.value >= std::pow(2.0L, 160) / 3);
}

TEST_CASE("rcd_alpha examples") {
  RcdSpec s{7, 4};
  // (9*6*3*26)^2 * 28^-2
  long double expect = 4212.0L * 4212.0L / 784.0L;
  CHECK(static_cast<double>(val(rcd_alpha(s, 0.5, 1))) == doctest::Approx(static_cast<double>(expect)).epsilon(1e-13));
  // alpha_U(9/10, 1) closed form
  for (uint64_t U : {10u, 100u, 1000u}) {
    uint64_t l = 3, V = U + l;
    long double base = 18.0L * (U - 1) * (V - 1) * (2 * U + l + 2);
    long double lg = std::log(base) * 10 / 9 - 2 * std::log(static_cast<long double>(U) * V);
    CHECK(static_cast<double>(rcd_alpha(RcdSpec{U, V}, 0.9, 1).log()) == doctest::Approx(static_cast<double>(lg)).epsilon(1e-14));
  }
}

TEST_CASE("rcd_alpha decreases strictly along U = 2^j") {
  for (uint64_t l : {0u, 1u, 5u}) {
    long double prev = INFINITY;
    for (int j = 10; j <= 30; ++j) {
      uint64_t U = uint64_t{1} << j;
      long double a = rcd_alpha(RcdSpec{U, U + l}, 0.9, 1).log();
      CHECK(a < prev);
      prev = a;
    }
  }
}

TEST_CASE("generate_rco counts and sizes") {
  RcoSpec s{4, 5, 2, 1.0};
  auto r0 = generate_rco(s, 0);
  CHECK(r0.levels.size() == 1);
  CHECK(r0.levels[0].empty());
  auto r = generate_rco(s, 2);
  REQUIRE(r.levels.size() == 3);
  CHECK(r.cells[1].size() == 20);
  CHECK(r.levels[1].size() == 40);
  for (int k = 1; k <= 2; ++k)
    for (const auto& c : r.levels[static_cast<size_t>(k)]) {
      CHECK(c.box.half[0] == Rational(1) / ipow(4, k + 1));
      CHECK(c.box.half[1] == Rational(1) / ipow(5, k + 1));
    }
  // each cut-out sits in its cell
  for (size_t i = 0; i < r.levels[1].size(); ++i) CHECK(inside(r.levels[1][i].box, r.cells[1][i / 2].box));
}

TEST_CASE("generate_rcd counts, sizes and nesting") {
  RcdSpec s{7, 4};
  auto r0 = generate_rcd(s, 0);
  REQUIRE(r0.levels[0].size() == 1);
  CHECK(r0.levels[0][0].box.half[0] == Rational(1));
  auto r = generate_rcd(s, 2);
  CHECK(r.levels[1].size() == 18);
  CHECK(r.levels[2].size() == 324);
  for (const auto& b : r.levels[1]) {
    CHECK(b.box.half[0] == Rational(1, 7));
    CHECK(b.box.half[1] == Rational(1, 4));
  }
  for (size_t i = 0; i < r.levels[2].size(); ++i) CHECK(inside(r.levels[2][i].box, r.levels[1][i / 18].box));
}

TEST_CASE("generation is deterministic and seedable") {
  RcdSpec a{7, 4, 1}, b{7, 4, 1}, c{7, 4, 2};
  std::ostringstream sa, sb, sc;
  write_csv(sa, generate_rcd(a, 2));
  write_csv(sb, generate_rcd(b, 2));
  write_csv(sc, generate_rcd(c, 2));
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());
  RcoSpec h{4, 5, 2, 1.0, Placement::Hashed, 3};
  std::ostringstream h1, h2;
  write_csv(h1, generate_rco(h, 2));
  write_csv(h2, generate_rco(h, 2));
  CHECK(h1.str() == h2.str());
}

TEST_CASE("csv layout") {
  std::ostringstream os;
  write_csv(os, generate_rcd(RcdSpec{7, 4}, 1));
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.rfind("level", 0) == 0) continue;
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == 18);
}

TEST_CASE("kept_depth") {
  auto r = generate_rcd(RcdSpec{7, 4}, 2);
  CHECK(kept_depth(r, {Rational(2), Rational(0)}, 2) == -1);
  const auto& b = r.levels[2][5].box;
  CHECK(kept_depth(r, b.center, 2) == 2);
  auto rc = generate_rco(RcoSpec{4, 5, 2, 1.0}, 1);
  CHECK(kept_depth(rc, rc.levels[1][0].box.center, 1) == 0);
}

TEST_CASE("sdic_for_rco example") {
  RcoSpec s{4, 5, 2, 1.0};
  auto st = sdic_for_rco(s, 0.5, 2);
  const SdicLevel* l1 = st.level(1);
  REQUIRE(l1);
  CHECK(l1->tuples.size() == 40);
  for (const auto& tu : l1->tuples) CHECK(tu.q == 2);
  CHECK(st.a == rco_alpha(s, 0.5));
  CHECK_THROWS(sdic_for_rco(RcoSpec{4, 5, 2, 1.5}, 0.5, 1));
}

TEST_CASE("sdic_for_rcd example") {
  RcdSpec s{7, 4};
  auto st = sdic_for_rcd(s, 1, 0.5, 1);
  const SdicLevel* l0 = st.level(0);
  REQUIRE(l0);
  REQUIRE(l0->group_offsets.size() == 19);
  for (size_t g = 0; g < 18; ++g) CHECK(l0->group_offsets[g + 1] - l0->group_offsets[g] <= 26);
  for (const auto& tu : l0->tuples) CHECK(tu.q == 2);
  CHECK(st.a == rcd_alpha(s, 0.5, 1));
}

TEST_CASE("sdic cover holds at depths 1 to 3") {
  RcoSpec rco{4, 5, 2, 1.0};
  auto rr = generate_rco(rco, 3);
  auto sr = sdic_for_rco(rco, 0.5, 3);
  for (int k = 1; k <= 3; ++k) {
    auto rep = verify_sdic_cover(sr, rr, k);
    CHECK_MESSAGE(rep.pass, rep.witness);
  }
  RcdSpec rcd{7, 4};
  auto rd = generate_rcd(rcd, 3);
  auto sd = sdic_for_rcd(rcd, 1, 0.5, 3);
  for (int k = 0; k <= 2; ++k) {
    auto rep = verify_sdic_cover(sd, rd, k);
    CHECK_MESSAGE(rep.pass, rep.witness);
  }
}

TEST_CASE("cover check detects a gap") {
  RcdSpec rcd{7, 4};
  auto rd = generate_rcd(rcd, 1);
  auto sd = sdic_for_rcd(rcd, 1, 0.5, 1);
  sd.levels[0].tuples.erase(sd.levels[0].tuples.begin());
  for (size_t g = 1; g < sd.levels[0].group_offsets.size(); ++g) --sd.levels[0].group_offsets[g];
  CHECK_FALSE(verify_sdic_cover(sd, rd, 0).pass);
}

TEST_CASE("rect_covered") {
  BoxRegion R{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}};
  BoxRegion left{{Rational(-1, 2), Rational(0)}, {Rational(1, 2), Rational(1)}};
  BoxRegion right{{Rational(1, 2), Rational(0)}, {Rational(1, 2), Rational(1)}};
  BoxRegion short_right{{Rational(1, 2), Rational(0)}, {Rational(1, 2), Rational(9, 10)}};
  CHECK(rect_covered(R, {&left, &right}));
  CHECK_FALSE(rect_covered(R, {&left, &short_right}));
  CHECK_FALSE(rect_covered(R, {&left}));
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS(RcoSpec{1, 5, 1, 1.0}.validate());
  CHECK_THROWS(RcoSpec{4, 5, 0, 1.0}.validate());
  CHECK_THROWS(RcoSpec{4, 5, 1, 0.0}.validate());
  CHECK_THROWS(RcdSpec{1, 4}.validate());
}
