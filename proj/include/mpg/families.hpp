#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mpg/core.hpp"

namespace mpg {

enum class Placement { Grid, Hashed };

// Cut-out family: from each level-k cell remove m boxes of relative depth t.
struct RcoSpec {
  uint64_t U = 2, V = 2;
  uint64_t m = 1;
  double t = 1.0;
  Placement placement = Placement::Grid;
  uint64_t seed = 0;

  void validate() const;
  DiagonalContraction A() const { return DiagonalContraction::from_reciprocals({U, V}); }
};

// Corner family: keep one corner box of each cell of a (U-1)x(V-1) split.
struct RcdSpec {
  uint64_t U = 2, V = 2;
  uint64_t seed = 0;
  // -1 selects the address hash; 0..3 pins (q,r) = (fixed&1, fixed>>1)
  int fixed_corner = -1;

  void validate() const;
  DiagonalContraction A() const { return DiagonalContraction::from_reciprocals({U, V}); }
  // corner (q,r) for child letter i of the box at `address`
  std::pair<int, int> corner(const std::string& address, uint64_t letter) const;
};

uint64_t splitmix64(uint64_t x);

// ceil(base^t / divisor); exact for integer t while base^t fits in 127 bits,
// otherwise a conservative upper bound tagged approximate.
struct CeilValue {
  long double value = 0;
  bool approximate = false;
};
CeilValue ceil_pow_ratio(uint64_t base, double t, uint64_t divisor);

struct NtResult {
  long double value = 0;
  long double option1 = 0, option2 = 0;
  int option = 1;  // the minimizing partition; ties take option 1
  bool approximate = false;
};
NtResult rcd_Nt(uint64_t U, uint64_t V, double t);

LogScalar rco_alpha(const RcoSpec& spec, double c);
LogScalar rcd_alpha(const RcdSpec& spec, double c, double t, bool* approximate = nullptr);

struct AddressedBox {
  std::string address;
  BoxRegion box;
};

struct RectangleSet {
  enum class Kind { Rco, Rcd } kind = Kind::Rcd;
  uint64_t U = 2, V = 2;
  uint64_t m = 0;
  int t = 0;
  int depth = 0;
  // Rcd: kept boxes per level, levels[0] is B[0,1]; children of box p at
  // level k are p*(U-1)(V-1) + (i-1).
  // Rco: cut-outs per level (levels[0] empty); cut-outs of cell idx are
  // idx*m .. idx*m+m-1 with idx = b*U^k + a.
  std::vector<std::vector<AddressedBox>> levels;
  // Rco only: partition cells per level
  std::vector<std::vector<AddressedBox>> cells;
};

RectangleSet generate_rco(const RcoSpec& spec, int depth);
RectangleSet generate_rcd(const RcdSpec& spec, int depth);

// Largest k <= max_level with p in the level-k kept region, -1 when p is
// outside B[0,1].
int kept_depth(const RectangleSet& rect, const std::vector<Rational>& p, int max_level);

void write_csv(std::ostream& os, const RectangleSet& rect);
void write_pbm(std::ostream& os, const RectangleSet& rect, int level, int width, int height);

struct SdicTuple {
  int q = 1;
  std::vector<Rational> y;
};

struct SdicLevel {
  int k = 0;
  std::vector<SdicTuple> tuples;
  // tuples of region g are [group_offsets[g], group_offsets[g+1])
  std::vector<size_t> group_offsets;
};

struct SdicStrategy {
  DiagonalContraction A;
  Rational r{1};
  Rational rho1{1};
  double c = 0.5;
  LogScalar a;  // a_k, constant in k for both families
  std::vector<SdicLevel> levels;
  std::string note;

  const SdicLevel* level(int k) const;
  BoxRegion box(const SdicTuple& tu) const { return BoxRegion::scaled(tu.y, r, A, tu.q); }
};

// Levels k = 1..depth, q = k + t; needs integer t.
SdicStrategy sdic_for_rco(const RcoSpec& spec, double c, int depth);
// Levels k = 0..depth-1, q = k + 1 + t; needs integer t.
SdicStrategy sdic_for_rcd(const RcdSpec& spec, double t, double c, int depth);

struct CoverReport {
  bool pass = true;
  size_t regions = 0;
  std::string witness;
};

// Exact check that Q_k covers (level-k cells) minus (level-(k+1) kept region).
CoverReport verify_sdic_cover(const SdicStrategy& s, const RectangleSet& rect, int k);

// Closed box R inside the union of closed boxes (planar), exact.
bool rect_covered(const BoxRegion& R, const std::vector<const BoxRegion*>& boxes);

}  // namespace mpg
