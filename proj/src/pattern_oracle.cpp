#include "mpg/pattern_oracle.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mpg {

void PatternQuery::validate() const {
  if (C.empty()) throw std::invalid_argument("pattern: C must contain at least one point");
  for (const auto& b : C)
    if (b.size() != C[0].size()) throw std::invalid_argument("pattern: points of C differ in dimension");
  if (lambda_lo.sign() <= 0 || lambda_hi < lambda_lo) throw std::invalid_argument("pattern: need 0 < lambda_lo <= lambda_hi");
  if (lambda_steps < 1) throw std::invalid_argument("pattern: lambda_steps must be positive");
  if (depth < 0) throw std::invalid_argument("pattern: depth must be nonnegative");
  if (resolution && resolution->sign() <= 0) throw std::invalid_argument("pattern: resolution must be positive");
}

std::vector<Rational> PatternQuery::lambdas() const {
  std::vector<Rational> out;
  if (lambda_steps == 1) return {lambda_lo};
  for (int i = 0; i < lambda_steps; ++i)
    out.push_back(lambda_lo + (lambda_hi - lambda_lo) * Rational(i) / Rational(lambda_steps - 1));
  return out;
}

std::vector<bool> verify_containment_depth(const Point& x, const Rational& lambda, const std::vector<Point>& C,
                                           const RectangleSet& rect, int depth) {
  int passed = depth;
  for (const auto& b : C) {
    if (b.size() != x.size()) throw std::invalid_argument("verify_containment_depth: dimension mismatch");
    Point p(x.size());
    for (size_t j = 0; j < x.size(); ++j) p[j] = lambda * b[j] + x[j];
    passed = std::min(passed, kept_depth(rect, p, depth));
    if (passed < 0) break;
  }
  std::vector<bool> out(static_cast<size_t>(depth + 1));
  for (int k = 0; k <= depth; ++k) out[static_cast<size_t>(k)] = k <= passed;
  return out;
}

Rational default_resolution(const RectangleSet& rect, int depth) {
  int64_t big = static_cast<int64_t>(std::max(rect.U, rect.V));
  return Rational(1) / (ipow(big, depth) * Rational(2));
}

HomothetyResult find_homothety(const PatternQuery& q, const RectangleSet& rect, int threads) {
  q.validate();
  if (q.C[0].size() != 2) throw std::invalid_argument("find_homothety: planar patterns only");
  if (q.depth > rect.depth) throw std::invalid_argument("find_homothety: rectangle set shallower than the query");
  HomothetyResult res;
  res.depth = q.depth;
  res.resolution = q.resolution ? *q.resolution : default_resolution(rect, q.depth);
  std::vector<Rational> xs;
  for (Rational v(-1); v <= Rational(1); v += res.resolution) xs.push_back(v);
  const auto lambdas = q.lambdas();
  std::vector<std::vector<Candidate>> slices(lambdas.size());
  auto scan = [&](size_t li) {
    for (const auto& y : xs)
      for (const auto& x : xs) {
        Point p{x, y};
        auto ok = verify_containment_depth(p, lambdas[li], q.C, rect, q.depth);
        if (ok.back()) slices[li].push_back({lambdas[li], p, q.depth});
      }
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(lambdas.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (size_t li = static_cast<size_t>(t); li < lambdas.size(); li += static_cast<size_t>(threads)) scan(li);
    });
  for (auto& th : pool) th.join();
  for (auto& s : slices)
    for (auto& c : s) res.candidates.push_back(std::move(c));
  return res;
}

void write_candidates_csv(std::ostream& os, const HomothetyResult& res) {
  size_t n = res.candidates.empty() ? 2 : res.candidates[0].x.size();
  os << "lambda";
  for (size_t j = 1; j <= n; ++j) os << ",x" << j;
  os << ",max_depth_passed\n";
  for (const auto& c : res.candidates) {
    os << format_ld(c.lambda.to_ld());
    for (const auto& v : c.x) os << ',' << format_ld(v.to_ld());
    os << ',' << c.max_depth_passed << '\n';
  }
}

Rational pattern_diameter(const std::vector<Point>& C) {
  Rational d(0);
  for (const auto& a : C)
    for (const auto& b : C)
      for (size_t j = 0; j < a.size(); ++j) d = max(d, (a[j] - b[j]).abs());
  return d;
}

bool lambda_admissible(const std::vector<Point>& C, long double lambda, long double rho2, long double beta_max) {
  if (lambda <= 0) return false;
  long double diam = pattern_diameter(C).to_ld();
  if (diam == 0) return true;
  return lambda < rho2 * (1 - beta_max) / diam;
}

}  // namespace mpg
