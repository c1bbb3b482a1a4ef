#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpg/log_scalar.hpp"
#include "mpg/rational.hpp"

namespace mpg {

// Diagonal matrix A = diag(beta_1..beta_n), every beta in (0,1).
// When built from integer reciprocals U_j the exact ratios 1/U_j are kept too.
class DiagonalContraction {
 public:
  DiagonalContraction() = default;
  explicit DiagonalContraction(std::vector<long double> betas);
  static DiagonalContraction from_reciprocals(std::vector<uint64_t> recips);

  size_t n() const { return betas_.size(); }
  const std::vector<long double>& betas() const { return betas_; }
  const std::vector<long double>& log_betas() const { return log_betas_; }
  long double beta_max() const { return beta_max_; }
  long double log_beta_max() const { return log_beta_max_; }
  long double log_prod() const { return log_prod_; }

  bool has_reciprocals() const { return !recips_.empty(); }
  const std::vector<uint64_t>& reciprocals() const { return recips_; }

  // entrywise power A^t
  DiagonalContraction power(long double t) const;
  // prod_j beta_j^q
  LogScalar prod_pow(long double q) const { return LogScalar::from_log(q * log_prod_); }
  // every beta < 1/5
  bool theorem_eligible() const;

  friend bool operator==(const DiagonalContraction& a, const DiagonalContraction& b) {
    return a.betas_ == b.betas_;
  }

 private:
  std::vector<long double> betas_, log_betas_;
  std::vector<uint64_t> recips_;
  long double beta_max_ = 0, log_beta_max_ = 0, log_prod_ = 0;
};

struct GameParameters {
  LogScalar alpha;
  DiagonalContraction A;
  double c = 0.5;
  double rho2 = 1.0;
  double rho1 = 1.0;
};

struct ValidityCheck {
  std::string name;
  bool pass = true;
  std::string message;
};

struct ValidityReport {
  std::vector<ValidityCheck> checks;
  bool valid = true;
  bool theorem_eligible = false;
  bool c_positive = false;
  std::string first_failure() const;
};

ValidityReport validate_params(const GameParameters& p);

// Throws std::invalid_argument("incomparable") when A differs.
bool dominates(const GameParameters& p, const GameParameters& p_prime);

// (sum_j alpha_j^c)^(1/c) in the log domain.
LogScalar combine_alphas(const std::vector<LogScalar>& alphas, double c);

struct FloorResult {
  enum class Tag { Exact, Approximate, Infeasible };
  Tag tag = Tag::Infeasible;
  // natural log of the value; -inf for 0
  long double log_value = -std::numeric_limits<long double>::infinity();
  // the integer itself when it fits in 64 bits
  std::optional<uint64_t> integer;

  bool feasible() const { return tag != Tag::Infeasible; }
  bool approximate() const { return tag == Tag::Approximate; }
  long double value() const { return std::exp(log_value); }
  std::string tag_name() const;
};

// floor(delta/alpha), or a lower bound tagged Approximate when the ratio is
// too large (or too close to an integer) to floor reliably.
FloorResult safe_floor_ratio(double delta, LogScalar alpha);
// Exact variant for rational inputs (decimal literals such as 0.1 stay exact).
FloorResult safe_floor_ratio(const Rational& delta, const Rational& alpha);

// log(beta^N) for N given through its log; -inf if it underflows below the
// smallest normal double.
long double log_pow_beta(long double log_beta, long double log_N);

// Axis-aligned closed box in the sup metric: center +- half_widths.
struct BoxRegion {
  std::vector<Rational> center;
  std::vector<Rational> half;

  size_t n() const { return center.size(); }
  // A^q(B[0,r]) + y for A with integer reciprocals
  static BoxRegion scaled(const std::vector<Rational>& y, const Rational& r, const DiagonalContraction& A, int q);

  bool intersects(const BoxRegion& o) const;
  bool contains(const BoxRegion& o) const;
  bool contains_point(const std::vector<Rational>& p) const;
  bool interior_contains_point(const std::vector<Rational>& p) const;
  Rational lo(size_t j) const { return center[j] - half[j]; }
  Rational hi(size_t j) const { return center[j] + half[j]; }
  friend bool operator==(const BoxRegion& a, const BoxRegion& b) {
    return a.center == b.center && a.half == b.half;
  }
};

std::string format_ld(long double x, int digits = 17);

}  // namespace mpg
