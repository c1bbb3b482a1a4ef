#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpg/certifier.hpp"
#include "mpg/families.hpp"

namespace mpg {

enum class Objective { MaxM, MaxDim, MaxPatternDim };

struct SearchConfig {
  // c grid, uniform in s = -log10(1 - c)
  int c_count = 160;
  double c_lo = 0.05;
  double c_hi = 0.9999999;
  int c_passes = 2;
  double zoom = 10;
  // delta sampling below delta_max
  int delta_samples = 48;
  double delta_rel_lo = 1e-6;
  double delta_rel_hi = 1 - 1e-9;
  int window_samples = 32;
  int golden_iters = 60;
  // t grid for corner-family members
  int t_count = 24;
  double t_lo = 0.25;
  double t_hi = 6;
  bool t_breakpoints = true;
  std::vector<double> t_fixed;  // when set, replaces the t grid

  Objective objective = Objective::MaxM;
  uint64_t target_M = 1;
  int threads = 1;

  void validate() const;
};

struct Member {
  enum class Kind { Rco, Rcd, Raw } kind = Kind::Rcd;
  uint64_t m = 1;
  double t = 1;
  LogScalar raw;
};

// A finite intersection of family members sharing one matrix A.
struct Family {
  uint64_t U = 0, V = 0;
  DiagonalContraction A;
  std::vector<Member> members;

  static Family rco(uint64_t U, uint64_t V, uint64_t m, double t);
  static Family rcd(uint64_t U, uint64_t V);
  static Family raw(const DiagonalContraction& A, LogScalar alpha);
  Family& add_rco(uint64_t m, double t);
  Family& add_rcd();
  Family& add_raw(LogScalar alpha);
  std::string describe() const;
  bool has_rcd() const;
};

struct AlphaEval {
  LogScalar alpha;
  std::vector<double> t;  // one entry per corner member
  bool approximate_ceiling = false;
};

// Candidate t values (grid plus ceiling breakpoints when enabled).
std::vector<double> t_candidates(const Family& f, const SearchConfig& cfg);
AlphaEval family_alpha(const Family& f, double c, const std::vector<double>& t_cands);

struct Probe {
  double c = 0, delta = 0, t = 0;
  uint64_t M = 0;
  long double value = 0;
};

struct SearchResult {
  bool found = false;
  Certificate best;
  std::vector<Probe> trace;
};

// Largest delta (within tolerance) meeting condition 2 with the margin.
// The c argument does not enter condition 2; it is kept for the call shape.
double delta_max(double c, LogScalar alpha, const DiagonalContraction& A);

SearchResult optimize_pattern_count(const Family& f, const SearchConfig& cfg);
SearchResult optimize_dimension(const Family& f, const SearchConfig& cfg);
SearchResult optimize(const Family& f, const SearchConfig& cfg);

struct SmallestU {
  uint64_t U = 0;
  Certificate cert;
  uint64_t probes = 0;
};
SmallestU smallest_U_for_M(uint64_t M, uint64_t ell, const SearchConfig& cfg, uint64_t cap = uint64_t{1} << 62);

std::string trace_line(const Probe& p);

}  // namespace mpg
