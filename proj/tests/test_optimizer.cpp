#include <cmath>

#include "doctest.h"
#include "mpg/optimizer.hpp"

using namespace mpg;

namespace {

SearchConfig small_cfg() {
  SearchConfig s;
  s.c_count = 24;
  s.c_passes = 1;
  s.delta_samples = 12;
  s.window_samples = 8;
  s.golden_iters = 30;
  s.t_count = 6;
  return s;
}

}  // namespace

TEST_CASE("delta_max closed forms when beta^N underflows") {
  auto tiny = LogScalar::from_log(-5000);
  double d2 = delta_max(0.5, tiny, DiagonalContraction({0.1L, 0.1L}));
  CHECK(d2 == doctest::Approx((1.0 / 9) / 2112).epsilon(1e-9));
  CHECK(d2 < (1.0 / 9) / 2112);
  double d1 = delta_max(0.5, tiny, DiagonalContraction({0.1L}));
  CHECK(d1 == doctest::Approx((1.0 / 3) / 72).epsilon(1e-9));
  auto rep = thm52_feasible(LogScalar::from_log(-5000), DiagonalContraction({0.1L}), 0.5, d1);
  CHECK(rep.condition2.holds);
}

TEST_CASE("delta_max reports an empty interval") {
  CHECK_THROWS_WITH(delta_max(0.5, LogScalar::from_value(0.5), DiagonalContraction({0.1L})), "empty feasible interval");
}

TEST_CASE("search config validation") {
  SearchConfig s;
  s.c_lo = 0.9;
  s.c_hi = 0.5;
  CHECK_THROWS_WITH(s.validate(), doctest::Contains("optimizer."));
  SearchConfig t;
  t.threads = 0;
  CHECK_THROWS(t.validate());
}

TEST_CASE("family alphas") {
  auto f = Family::rco(4, 5, 2, 1);
  CHECK(family_alpha(f, 0.5, {}).alpha == rco_alpha(RcoSpec{4, 5, 2, 1.0}, 0.5));
  auto g = Family::rcd(7, 4);
  CHECK_THROWS(family_alpha(g, 0.5, {}));
  auto e = family_alpha(g, 0.5, {1.0});
  CHECK(e.alpha == rcd_alpha(RcdSpec{7, 4}, 0.5, 1));
  REQUIRE(e.t.size() == 1);
  CHECK(e.t[0] == 1.0);
  auto both = Family::rco(7, 4, 1, 1);
  both.add_rcd();
  CHECK(family_alpha(both, 0.5, {1.0}).alpha > e.alpha);
  CHECK(g.has_rcd());
  CHECK_FALSE(f.has_rcd());
}

TEST_CASE("t candidates include the requested grid") {
  auto cfg = small_cfg();
  cfg.t_fixed = {1.0, 2.0};
  auto tc = t_candidates(Family::rcd(1000, 1001), cfg);
  CHECK(std::find(tc.begin(), tc.end(), 1.0) != tc.end());
  CHECK(std::find(tc.begin(), tc.end(), 2.0) != tc.end());
}

TEST_CASE("optimize refuses ineligible matrices") {
  CHECK_THROWS_WITH(optimize(Family::rco(4, 5, 1, 1), small_cfg()), "theorem-ineligible");
}

TEST_CASE("optimizer is deterministic") {
  auto f = Family::rco(17, 24, 1, 5);
  auto cfg = small_cfg();
  auto a = optimize_pattern_count(f, cfg);
  auto b = optimize_pattern_count(f, cfg);
  REQUIRE(a.found);
  CHECK(serialize_certificate(a.best) == serialize_certificate(b.best));
  CHECK(a.trace.size() == b.trace.size());
  cfg.threads = 3;
  auto c = optimize_pattern_count(f, cfg);
  CHECK(serialize_certificate(a.best) == serialize_certificate(c.best));
}

TEST_CASE("optimizer certificates recheck") {
  auto cfg = small_cfg();
  auto r = optimize_pattern_count(Family::rco(17, 24, 1, 5), cfg);
  REQUIRE(r.found);
  CHECK(r.best.certified);
  CHECK(r.best.M >= 2);
  std::string why;
  CHECK_MESSAGE(recheck_certificate(r.best, &why), why);
  cfg.objective = Objective::MaxDim;
  auto d = optimize_dimension(Family::rco(17, 24, 1, 5), cfg);
  REQUIRE(d.found);
  CHECK(d.best.dim_bound > 1.99);
  CHECK(d.best.dim_bound < 2);
}

TEST_CASE("adding a set never increases the certified bound") {
  auto cfg = small_cfg();
  cfg.objective = Objective::MaxDim;
  auto one = optimize_dimension(Family::rco(425, 365, 10, 3), cfg);
  auto f = Family::rco(425, 365, 10, 3);
  f.add_rco(1, 2);
  auto two = optimize_dimension(f, cfg);
  REQUIRE(one.found);
  REQUIRE(two.found);
  CHECK(two.best.dim_bound <= one.best.dim_bound);
}

TEST_CASE("smallest_U_for_M small cases") {
  auto cfg = small_cfg();
  auto r = smallest_U_for_M(1, 0, cfg);
  CHECK(r.cert.certified);
  CHECK(r.U >= 6);
  std::string why;
  CHECK_MESSAGE(recheck_certificate(r.cert, &why), why);
  CHECK_THROWS(smallest_U_for_M(4, 0, cfg, 64));
}

TEST_CASE("trace lines are stable") {
  Probe p{0.5, 0.001, 1, 3, 1.5L};
  CHECK(trace_line(p) == trace_line(p));
  CHECK(trace_line(p).find("M=3") != std::string::npos);
}
