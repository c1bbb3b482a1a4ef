#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpg/families.hpp"

namespace mpg {

using Point = std::vector<Rational>;

struct PatternQuery {
  std::vector<Point> C;  // b_1..b_M
  Rational lambda_lo{1}, lambda_hi{1};
  int lambda_steps = 1;  // evenly spaced in [lambda_lo, lambda_hi]
  int depth = 1;
  // translation step; defaults to half the smallest box half-width at depth
  std::optional<Rational> resolution;

  void validate() const;
  std::vector<Rational> lambdas() const;
};

// Entry k is true iff every lambda b_i + x lies in the level-k kept region.
// A necessary condition for membership in F, evaluated exactly.
std::vector<bool> verify_containment_depth(const Point& x, const Rational& lambda, const std::vector<Point>& C,
                                           const RectangleSet& rect, int depth);

struct Candidate {
  Rational lambda;
  Point x;
  int max_depth_passed = 0;
};

struct HomothetyResult {
  std::vector<Candidate> candidates;
  Rational resolution;
  int depth = 0;
  // candidates are consistent with F down to the query depth, nothing more
  std::string label() const { return "depth-" + std::to_string(depth) + " consistent"; }
};

Rational default_resolution(const RectangleSet& rect, int depth);

// Grid scan over lambda and translations x in [-1,1]^2; keeps the pairs that
// pass at the full query depth. Lambda slices run concurrently and are merged
// in order.
HomothetyResult find_homothety(const PatternQuery& q, const RectangleSet& rect, int threads = 1);

// "lambda,x1,...,xn,max_depth_passed"
void write_candidates_csv(std::ostream& os, const HomothetyResult& res);

Rational pattern_diameter(const std::vector<Point>& C);
// lambda < rho2 (1 - beta_max) / diam(C); any lambda works for a singleton.
bool lambda_admissible(const std::vector<Point>& C, long double lambda, long double rho2, long double beta_max);

}  // namespace mpg
