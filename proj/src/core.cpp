#include "mpg/core.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mpg {

DiagonalContraction::DiagonalContraction(std::vector<long double> betas) : betas_(std::move(betas)) {
  if (betas_.empty()) throw std::invalid_argument("DiagonalContraction: dimension must be positive");
  log_betas_.reserve(betas_.size());
  log_prod_ = 0;
  beta_max_ = 0;
  for (long double b : betas_) {
    if (!(b > 0 && b < 1)) throw std::invalid_argument("DiagonalContraction: every beta must lie in (0,1)");
    log_betas_.push_back(std::log(b));
    log_prod_ += log_betas_.back();
    beta_max_ = std::max(beta_max_, b);
  }
  log_beta_max_ = *std::max_element(log_betas_.begin(), log_betas_.end());
}

DiagonalContraction DiagonalContraction::from_reciprocals(std::vector<uint64_t> recips) {
  std::vector<long double> betas;
  for (uint64_t u : recips) {
    if (u < 2) throw std::invalid_argument("DiagonalContraction: reciprocal must be >= 2");
    betas.push_back(1.0L / static_cast<long double>(u));
  }
  DiagonalContraction A(betas);
  // log(1/U) directly, avoids rounding 1/U first
  A.log_prod_ = 0;
  for (size_t j = 0; j < recips.size(); ++j) {
    A.log_betas_[j] = -std::log(static_cast<long double>(recips[j]));
    A.log_prod_ += A.log_betas_[j];
  }
  A.log_beta_max_ = *std::max_element(A.log_betas_.begin(), A.log_betas_.end());
  A.recips_ = std::move(recips);
  return A;
}

DiagonalContraction DiagonalContraction::power(long double t) const {
  if (!(t > 0)) throw std::invalid_argument("DiagonalContraction::power: exponent must be positive");
  std::vector<long double> b;
  for (long double lb : log_betas_) b.push_back(std::exp(t * lb));
  return DiagonalContraction(b);
}

bool DiagonalContraction::theorem_eligible() const {
  if (has_reciprocals())
    return std::all_of(recips_.begin(), recips_.end(), [](uint64_t u) { return u > 5; });
  return std::all_of(betas_.begin(), betas_.end(), [](long double b) { return b < 0.2L; });
}

std::string ValidityReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return c.message;
  return "";
}

ValidityReport validate_params(const GameParameters& p) {
  ValidityReport r;
  auto add = [&](const std::string& name, bool ok, const std::string& msg) {
    r.checks.push_back({name, ok, ok ? "" : msg});
    if (!ok) r.valid = false;
  };
  add("alpha", !p.alpha.is_zero(), "alpha must be positive");
  add("c", p.c >= 0 && p.c < 1, "c must lie in [0,1)");
  add("rho2", p.rho2 > 0, "rho2 must be positive");
  add("rho_order", p.rho1 >= p.rho2, "rho1 < rho2");
  add("dimension", p.A.n() > 0, "A must have positive dimension");
  r.theorem_eligible = p.A.n() > 0 && p.A.theorem_eligible();
  r.c_positive = p.c > 0;
  return r;
}

bool dominates(const GameParameters& p, const GameParameters& q) {
  if (!(p.A == q.A)) throw std::invalid_argument("incomparable");
  return p.alpha <= q.alpha && p.c <= q.c && p.rho2 <= q.rho2 && q.rho2 <= q.rho1 && q.rho1 <= p.rho1;
}

LogScalar combine_alphas(const std::vector<LogScalar>& alphas, double c) {
  if (c == 0) throw std::domain_error("countable intersection undefined at c=0");
  if (!(c > 0 && c < 1)) throw std::domain_error("combine_alphas: c must lie in (0,1)");
  if (alphas.empty()) throw std::invalid_argument("combine_alphas: empty list");
  // sort for permutation-independent rounding
  std::vector<long double> terms;
  for (const auto& a : alphas) terms.push_back(a.log() * c);
  std::sort(terms.begin(), terms.end());
  long double hi = terms.back();
  if (hi == -std::numeric_limits<long double>::infinity()) return LogScalar::zero();
  long double s = 0;
  for (long double t : terms) s += std::exp(t - hi);
  return LogScalar::from_log((hi + std::log(s)) / c);
}

std::string FloorResult::tag_name() const {
  switch (tag) {
    case Tag::Exact: return "exact";
    case Tag::Approximate: return "approximate";
    default: return "infeasible";
  }
}

FloorResult safe_floor_ratio(double delta, LogScalar alpha) {
  if (!(delta > 0 && delta < 1)) throw std::domain_error("safe_floor_ratio: delta must lie in (0,1)");
  if (alpha.is_zero()) throw std::domain_error("safe_floor_ratio: alpha must be positive");
  FloorResult out;
  const long double lr = std::log(static_cast<long double>(delta)) - alpha.log();
  // relative error of exp(lr), from rounding in both logs
  const long double eps = 8 * LDBL_EPSILON * (std::fabs(std::log(static_cast<long double>(delta))) + std::fabs(alpha.log()) + 4);
  if (lr < 0) {
    out.tag = FloorResult::Tag::Infeasible;
    out.integer = 0;
    return out;
  }
  const long double two53 = 9007199254740992.0L;
  if (lr < std::log(two53)) {
    long double r = std::exp(lr);
    long double lo = std::floor(r * (1 - eps));
    long double hi = std::floor(r * (1 + eps));
    if (lo < 1) {
      out.tag = FloorResult::Tag::Infeasible;
      out.integer = 0;
      return out;
    }
    out.tag = lo == hi ? FloorResult::Tag::Exact : FloorResult::Tag::Approximate;
    out.integer = static_cast<uint64_t>(lo);
    out.log_value = std::log(lo);
    return out;
  }
  // r(1-eps) - 1 <= floor(r)
  out.tag = FloorResult::Tag::Approximate;
  long double lv = lr + std::log1p(-eps);
  lv += std::log1p(-std::exp(-lv));
  out.log_value = lv;
  if (lv < std::log(18446744073709551615.0L) - 1) out.integer = static_cast<uint64_t>(std::floor(std::exp(lv)));
  return out;
}

FloorResult safe_floor_ratio(const Rational& delta, const Rational& alpha) {
  if (!(delta > Rational(0) && delta < Rational(1))) throw std::domain_error("safe_floor_ratio: delta must lie in (0,1)");
  if (alpha <= Rational(0)) throw std::domain_error("safe_floor_ratio: alpha must be positive");
  FloorResult out;
  int64_t q = (delta / alpha).floor();
  out.integer = static_cast<uint64_t>(q);
  if (q < 1) {
    out.tag = FloorResult::Tag::Infeasible;
    out.integer = 0;
    return out;
  }
  out.tag = FloorResult::Tag::Exact;
  out.log_value = std::log(static_cast<long double>(q));
  return out;
}

long double log_pow_beta(long double log_beta, long double log_N) {
  // N * log_beta with N = exp(log_N)
  long double lv = -std::exp(log_N + std::log(-log_beta));
  if (lv < std::log(static_cast<long double>(DBL_MIN))) return -std::numeric_limits<long double>::infinity();
  return lv;
}

BoxRegion BoxRegion::scaled(const std::vector<Rational>& y, const Rational& r, const DiagonalContraction& A, int q) {
  if (!A.has_reciprocals()) throw std::invalid_argument("BoxRegion::scaled: exact boxes need integer reciprocals");
  if (y.size() != A.n()) throw std::invalid_argument("BoxRegion::scaled: dimension mismatch");
  BoxRegion b;
  b.center = y;
  for (size_t j = 0; j < A.n(); ++j) b.half.push_back(r / ipow(static_cast<int64_t>(A.reciprocals()[j]), q));
  return b;
}

bool BoxRegion::intersects(const BoxRegion& o) const {
  for (size_t j = 0; j < n(); ++j)
    if ((center[j] - o.center[j]).abs() > half[j] + o.half[j]) return false;
  return true;
}

bool BoxRegion::contains(const BoxRegion& o) const {
  for (size_t j = 0; j < n(); ++j)
    if ((center[j] - o.center[j]).abs() + o.half[j] > half[j]) return false;
  return true;
}

bool BoxRegion::contains_point(const std::vector<Rational>& p) const {
  for (size_t j = 0; j < n(); ++j)
    if ((center[j] - p[j]).abs() > half[j]) return false;
  return true;
}

bool BoxRegion::interior_contains_point(const std::vector<Rational>& p) const {
  for (size_t j = 0; j < n(); ++j)
    if ((center[j] - p[j]).abs() >= half[j]) return false;
  return true;
}

std::string format_ld(long double x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace mpg
