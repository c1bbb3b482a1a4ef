#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpg/core.hpp"

namespace mpg {

// Relative margin demanded of the strict inequality in condition 2.
inline constexpr long double kCondition2Margin = 9.094947017729282379e-13L;  // 2^-40

struct Condition1 {
  LogScalar lhs, rhs;
  bool holds = false;
};

struct Condition2 {
  long double lhs = 0, rhs = 0;
  long double diff = 0;    // lhs - rhs, shared with claimB_bound
  bool raw = false;        // diff > 0
  bool holds = false;      // diff > margin * lhs
  long double margin = 0;  // diff / lhs
};

struct FeasibilityReport {
  uint64_t M = 1;
  Condition1 condition1;
  Condition2 condition2;
  FloorResult N;
  bool feasible = false;
  std::string reason;
};

// 3^-n prod(1 - 5 beta^N) and 8^n (1 + 2^(2n+1)) delta
long double condition2_lhs(const DiagonalContraction& A, const FloorResult& N);
long double condition2_rhs(size_t n, double delta);
long double condition2_diff(const DiagonalContraction& A, const FloorResult& N, double delta);

double default_delta(const DiagonalContraction& A);

FeasibilityReport thm52_feasible(LogScalar alpha, const DiagonalContraction& A, double c, double delta);
FeasibilityReport pattern_feasible(uint64_t M, LogScalar alpha, const DiagonalContraction& A, double c, double delta);

long double k1_constant(const DiagonalContraction& A, double delta, const FloorResult& N);

struct DimBound {
  long double value = 0;
  bool positive = false;
  long double K = 0;
};
DimBound dim_lower_bound(LogScalar alpha, const DiagonalContraction& A, double c, double delta);

struct PatternDim {
  long double KM = 0;
  FloorResult N;
  bool moreover = false;  // the strengthened inequality holds
  std::optional<long double> bound;
  // the same bound with M^(1/c) alpha in place of alpha
  std::optional<long double> scaled_bound;
};
PatternDim pattern_dim_bound(uint64_t M, LogScalar alpha, const DiagonalContraction& A, double c, double delta);

uint64_t max_pattern_size(LogScalar alpha, const DiagonalContraction& A, double c, double delta);

struct ClaimB {
  bool positive = false;
  long double diff = 0;
  LogScalar magnitude;  // |prod beta^-N * diff|
  std::optional<uint64_t> K;
};
ClaimB claimB_bound(const DiagonalContraction& A, const FloorResult& N, double delta);
ClaimB claimB_bound(const DiagonalContraction& A, uint64_t N, double delta);

struct Certificate {
  std::string family;  // free-form description, round-tripped verbatim
  GameParameters params;
  double delta = 0;
  std::vector<double> t;
  uint64_t M = 1;
  FloorResult N;
  long double K1 = 0, KM = 0;
  long double dim_bound = 0;
  std::optional<long double> pattern_dim_bound;
  std::optional<long double> pattern_dim_scaled;
  bool theorem_eligible = false;
  bool approximate_ceiling = false;
  bool approximate_floor = false;
  bool certified = false;
  std::string reason;
  long double margin1_log = 0;  // log(rhs1 / lhs1)
  long double margin2 = 0;      // (lhs2 - rhs2) / lhs2
};

// Builds a certificate for pattern size M (1 = non-emptiness). Never throws
// on infeasible inputs; certified=false carries the reason.
Certificate issue_certificate(LogScalar alpha, const DiagonalContraction& A, double c, double delta, uint64_t M,
                              const std::string& family = "raw", const std::vector<double>& t = {},
                              bool approximate_ceiling = false);

// Recomputes every field from params, delta, M; true when they all agree.
bool recheck_certificate(const Certificate& cert, std::string* why = nullptr);

Certificate intersect_certificate(const std::vector<LogScalar>& alphas, const DiagonalContraction& A, double c,
                                  double delta);

struct DistanceStatement {
  bool certified = false;
  std::string text;
};
DistanceStatement distance_set_certificate(LogScalar alpha, const DiagonalContraction& A, double c, double delta,
                                           const std::vector<double>& etas, double lambda, double rho2 = 1.0);

std::string serialize_certificate(const Certificate& cert);
Certificate parse_certificate(const std::string& text);

// Flat key = value text, shared with config parsing.
std::map<std::string, std::string> parse_kv(const std::string& text);

}  // namespace mpg
