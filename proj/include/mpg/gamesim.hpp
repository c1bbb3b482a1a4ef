#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpg/core.hpp"
#include "mpg/families.hpp"

namespace mpg {

// E_k = (rho/2) A^k Z^n + y and D_k = 3 rho A^k Z^n + y; every cell is
// A^k(B[0,rho]) + center.
struct Lattice {
  enum class Kind { E, D } kind = Kind::E;
  int k = 1;
  Rational rho{1};
  std::vector<Rational> y;  // empty means the origin
  DiagonalContraction A;

  std::vector<Rational> center(const std::vector<int64_t>& z) const;  // needs integer reciprocals
  std::vector<long double> center_ld(const std::vector<int64_t>& z) const;
  BoxRegion box(const std::vector<int64_t>& z) const;
  std::vector<Rational> half() const;
};

// D-index z as an E-index at the same level.
inline int64_t d_to_e(int64_t z) { return 6 * z; }

enum class ProjectionRule {
  Full,         // mod-N branch onto D_k, else per-axis nearest center
  NearestOnly,  // negative control: never takes the D branch
};

// pi_k on integer E-indices for A = diag(1/U_j). A cell of E_{k+1} with
// index w maps to a cell of E_k; per axis the nearest center wins and ties
// go to the smaller index, which is the lexicographically smallest choice.
class Projector {
 public:
  Projector(std::vector<int64_t> U, int N, ProjectionRule rule = ProjectionRule::Full);

  size_t n() const { return U_.size(); }
  int N() const { return N_; }
  const std::vector<int64_t>& U() const { return U_; }
  bool d_branch_level(int k) const { return rule_ == ProjectionRule::Full && (k % N_) == (1 % N_); }

  // k >= 1; out may alias w
  void project(int k, const int64_t* w, int64_t* out) const;
  std::vector<int64_t> project(int k, const std::vector<int64_t>& w) const;
  // pi_{from,to}: a cell of E_from down to E_to (identity when to >= from)
  std::vector<int64_t> compose(int from, int to, const std::vector<int64_t>& w) const;

 private:
  std::vector<int64_t> U_;
  int N_;
  ProjectionRule rule_;
};

struct VerifyReport {
  bool pass = true;
  uint64_t checked = 0;
  uint64_t failures = 0;
  std::string witness;  // first counterexample
};

// Claim A: every D_{(k+1)N+1} cell inside the half-shrunk D_{kN+1} cell T
// projects back onto T. Parents range over |z_j| <= radius.
VerifyReport verify_claimA(const Projector& P, int k, int64_t radius, int threads = 1);
// Same check for an explicit list of parent D-indices.
VerifyReport verify_claimA(const Projector& P, int k, const std::vector<std::vector<int64_t>>& parents,
                           int threads = 1);

// Lemma A.1 for every E_{k+1} cell with |w_j| <= radius at each level
// k in [1, max_level] with k not congruent to 1 mod N.
VerifyReport verify_lemmaA1(const Projector& P, int max_level, int64_t radius);

struct BudgetReport {
  bool pass = true;
  uint64_t tuples = 0;
  uint64_t worst_count = 0;
  long double worst_ratio = 0;  // worst mass / (a_k prod beta^k)^c
  int worst_count_k = -1, worst_ratio_k = -1;
  std::vector<Rational> count_witness, ratio_witness;  // test box centers
  std::string witness;
};

// Relative slack for floating budget comparisons (masses are sums of
// rounded powers).
inline constexpr long double kBudgetSlack = 1e-12L;

// For each level k in [k_lo, k_hi] the maximum, over every translate z, of
// the tuple count and tuple mass meeting A^k(B[0,rho1]) + z. Exact planar
// sweep, so it dominates any lattice-restricted scan.
BudgetReport verify_sdic_budget(const SdicStrategy& s, int k_lo, int k_hi);

// Player I policies
struct PlayerI {
  enum class Kind { SteerToward, FixedSequence, Chain } kind = Kind::SteerToward;
  std::vector<Rational> target;                 // SteerToward
  std::vector<std::vector<Rational>> centers;   // FixedSequence, centers b_1, b_2, ...
  std::optional<Projector> projector;           // Chain: plays pi_{depth,m}(T)
  std::vector<int64_t> chain_cell;              // Chain: E-index of T at level depth

  static PlayerI steer(std::vector<Rational> target);
  static PlayerI fixed(std::vector<std::vector<Rational>> centers);
  static PlayerI chain(Projector P, std::vector<int64_t> cell);
};

struct Response {
  int m = 1;
  std::vector<SdicTuple> tuples;  // empty = skip
  bool skipped_budget = false;    // the rule asked for more than the budget allowed
  LogScalar mass;                 // sum of (prod beta^q)^c
  LogScalar limit;                // (alpha prod beta^m)^c
};

struct PlayTranscript {
  Rational r{1};
  double c = 0.5;
  LogScalar alpha;
  DiagonalContraction A;
  std::vector<BoxRegion> boxes;  // U_1..U_depth
  std::vector<Response> responses;
  BoxRegion outcome_box;
  bool outcome_inside_deleted = false;
  bool outcome_meets_deleted = false;
  bool outcome_meets_kept = false;

  std::string serialize() const;
};

struct PlayOptions {
  bool skip_always = false;
  // level-depth approximation of F, for the kept-set flag
  const RectangleSet* kept = nullptr;
};

// Player II answers U_m with the tuples of Q_m whose boxes meet U_m, and
// skips whenever that set would break the budget.
PlayTranscript play_game(const PlayerI& pI, const SdicStrategy& s, int depth, const PlayOptions& opt = {});

// Recomputes every recorded response's mass and compares with its limit.
VerifyReport audit_budget(const PlayTranscript& tr);

struct PotentialEntry {
  int level = 1;
  BoxRegion cell;
  LogScalar phi;
  std::vector<LogScalar> partial;  // running sums after turns 1..level-1
  bool in_d_prime = false;         // phi <= (delta prod beta^level)^c
};

struct PotentialLedger {
  std::vector<PotentialEntry> entries;
  bool monotone() const;  // partial sums never decrease
};

// phi_l of U_l: mass of tuples from turns t < l meeting U_l.
PotentialEntry potential_phi(const PlayTranscript& tr, int l, double delta);
PotentialLedger potential_ledger(const PlayTranscript& tr, double delta);

struct Claim2Report {
  bool pass = true;  // closed form matches enumeration, lower bound and Claim 1 hold
  uint64_t cells = 0;
  std::vector<Rational> gamma;
  uint64_t enumerated = 0;        // #Q by enumeration (last parent)
  uint64_t closed_form = 0;       // prod (floor(f+g) - ceil(f-g) + 1)
  uint64_t product_of_floors = 0; // prod floor(gamma_j)
  bool equals_product_of_floors = true;
  std::string witness;
};

// gamma_j = U_j^N / 6 - 1/3
Rational claim2_gamma(int64_t U, int N);
Claim2Report verify_claim2(const std::vector<int64_t>& U, int N, int k, int64_t radius);

struct Claim3Report {
  bool pass = true;
  uint64_t draws = 0;
  long double worst_ratio = 0;  // count / bound
  std::string witness;
};
Claim3Report verify_claim3(uint64_t draws, uint64_t seed);

struct InequalityReport {
  bool pass = true;
  uint64_t samples = 0;
  long double worst_ratio = 0;  // lhs / rhs
  std::string witness;
};
// min{1, x^c/(g y)^c}(a x + b y) <= (a + b) x^c max{x^(1-c), y^(1-c)/g^c}
long double min_inequality_lhs(long double x, long double y, long double a, long double b, long double g,
                               long double c);
long double min_inequality_rhs(long double x, long double y, long double a, long double b, long double g,
                               long double c);
InequalityReport verify_min_inequality(uint64_t samples, uint64_t seed);

}  // namespace mpg
