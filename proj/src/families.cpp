#include "mpg/families.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace mpg {

namespace {

using u128 = unsigned __int128;

bool is_integer(double t) { return t == std::floor(t); }

int int_t(double t, const char* who) {
  if (!is_integer(t) || t < 1 || t > 30)
    throw std::invalid_argument(std::string(who) + ": materialization requires an integer t in [1,30]");
  return static_cast<int>(t);
}

std::string join_address(const std::string& parent, uint64_t letter) {
  if (parent == "e") return std::to_string(letter);
  return parent + "." + std::to_string(letter);
}

// Even tiling of [lo,hi] by n boxes of full width w, first and last flush.
std::vector<Rational> tile_centers(const Rational& lo, const Rational& hi, int64_t n, const Rational& w) {
  std::vector<Rational> out;
  if (n <= 1) {
    out.push_back((lo + hi) / Rational(2));
    return out;
  }
  Rational step = (hi - lo - w) / Rational(n - 1);
  for (int64_t i = 0; i < n; ++i) out.push_back(lo + w / Rational(2) + step * Rational(i));
  return out;
}

void tile_rect(std::vector<SdicTuple>& out, const Rational& xlo, const Rational& xhi, const Rational& ylo,
               const Rational& yhi, const Rational& hx, const Rational& hy, int q) {
  int64_t nx = ((xhi - xlo) / (hx * Rational(2))).ceil();
  int64_t ny = ((yhi - ylo) / (hy * Rational(2))).ceil();
  auto xs = tile_centers(xlo, xhi, nx, hx * Rational(2));
  auto ys = tile_centers(ylo, yhi, ny, hy * Rational(2));
  for (const auto& y : ys)
    for (const auto& x : xs) out.push_back({q, {x, y}});
}

}  // namespace

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void RcoSpec::validate() const {
  if (U < 2 || V < 2) throw std::invalid_argument("rco: U and V must be >= 2");
  if (m < 1) throw std::invalid_argument("rco: m must be >= 1");
  if (!(t > 0)) throw std::invalid_argument("rco: t must be positive");
}

void RcdSpec::validate() const {
  if (U < 2 || V < 2) throw std::invalid_argument("rcd: U and V must be >= 2");
  if (fixed_corner < -1 || fixed_corner > 3) throw std::invalid_argument("rcd: fixed_corner must be -1..3");
}

std::pair<int, int> RcdSpec::corner(const std::string& address, uint64_t letter) const {
  if (fixed_corner >= 0) return {fixed_corner & 1, fixed_corner >> 1};
  uint64_t h = splitmix64(seed);
  for (char ch : address) h = splitmix64(h ^ static_cast<unsigned char>(ch));
  h = splitmix64(h ^ (letter * 0x100000001b3ULL));
  return {static_cast<int>(h & 1), static_cast<int>((h >> 1) & 1)};
}

CeilValue ceil_pow_ratio(uint64_t base, double t, uint64_t divisor) {
  if (base < 2 || divisor < 1 || !(t >= 0)) throw std::invalid_argument("ceil_pow_ratio: bad arguments");
  CeilValue out;
  if (is_integer(t) && t <= 127) {
    u128 p = 1;
    bool overflow = false;
    const u128 cap = ~static_cast<u128>(0) >> 1;
    for (int i = 0; i < static_cast<int>(t); ++i) {
      if (p > cap / base) {
        overflow = true;
        break;
      }
      p *= base;
    }
    if (!overflow) {
      u128 q = (p + divisor - 1) / divisor;
      long double v = static_cast<long double>(q);
      if (static_cast<u128>(v) < q) v = std::nextafter(v, std::numeric_limits<long double>::infinity());
      out.value = v;
      out.approximate = static_cast<u128>(v) != q;
      return out;
    }
  }
  const long double lx = static_cast<long double>(t) * std::log(static_cast<long double>(base)) -
                         std::log(static_cast<long double>(divisor));
  const long double x = std::exp(lx);
  const long double eta = 16 * LDBL_EPSILON * (1 + std::fabs(lx));
  if (x < 9007199254740992.0L) {
    long double lo = std::ceil(x * (1 - eta));
    long double hi = std::ceil(x * (1 + eta));
    out.value = hi;
    out.approximate = lo != hi;
    return out;
  }
  // upper-bound surrogate; alpha grows with N_t so this stays conservative
  out.value = x * (1 + eta) + 1;
  out.approximate = true;
  return out;
}

NtResult rcd_Nt(uint64_t U, uint64_t V, double t) {
  if (U < 2 || V < 2 || !(t > 0)) throw std::invalid_argument("rcd_Nt: need U,V >= 2 and t > 0");
  auto c1 = ceil_pow_ratio(U, t, U - 1);
  auto c2 = ceil_pow_ratio(V, t + 1, V - 1);
  auto c3 = ceil_pow_ratio(V, t, V - 1);
  auto c4 = ceil_pow_ratio(U, t, 1);
  auto c5 = ceil_pow_ratio(U, t + 1, U - 1);
  auto c8 = ceil_pow_ratio(V, t, 1);
  bool approx = c1.approximate || c2.approximate || c3.approximate || c4.approximate || c5.approximate ||
                c8.approximate;
  const long double two63 = 9223372036854775808.0L;
  auto mul = [&](long double a, long double b) {
    long double p = a * b;
    if (p >= two63) {
      p *= 1 + 2 * LDBL_EPSILON;
      approx = true;
    }
    return p;
  };
  NtResult r;
  r.option1 = mul(c1.value, c2.value) + mul(c3.value, c4.value);
  r.option2 = mul(c5.value, c3.value) + mul(c1.value, c8.value);
  r.option = r.option2 < r.option1 ? 2 : 1;
  r.value = r.option == 1 ? r.option1 : r.option2;
  r.approximate = approx;
  return r;
}

LogScalar rco_alpha(const RcoSpec& spec, double c) {
  spec.validate();
  if (!(c > 0 && c < 1)) throw std::domain_error("rco_alpha: c must lie in (0,1)");
  long double luv = std::log(static_cast<long double>(spec.U)) + std::log(static_cast<long double>(spec.V));
  return LogScalar::from_log(std::log(9.0L * spec.m) / c - spec.t * luv);
}

LogScalar rcd_alpha(const RcdSpec& spec, double c, double t, bool* approximate) {
  spec.validate();
  if (!(c > 0 && c < 1)) throw std::domain_error("rcd_alpha: c must lie in (0,1)");
  auto nt = rcd_Nt(spec.U, spec.V, t);
  if (approximate) *approximate = nt.approximate;
  long double U = static_cast<long double>(spec.U), V = static_cast<long double>(spec.V);
  long double num = std::log(9.0L) + std::log(U - 1) + std::log(V - 1) + std::log(nt.value);
  return LogScalar::from_log(num / c - (1 + static_cast<long double>(t)) * (std::log(U) + std::log(V)));
}

RectangleSet generate_rco(const RcoSpec& spec, int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("generate_rco: depth must be >= 0");
  const int t = depth > 0 ? int_t(spec.t, "generate_rco") : 0;
  RectangleSet rs;
  rs.kind = RectangleSet::Kind::Rco;
  rs.U = spec.U;
  rs.V = spec.V;
  rs.m = spec.m;
  rs.t = t;
  rs.depth = depth;
  rs.levels.resize(depth + 1);
  rs.cells.resize(depth + 1);
  rs.cells[0].push_back({"e", BoxRegion{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}});
  const uint64_t g = static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(spec.m)) - 1e-12));
  const uint64_t rows = (spec.m + g - 1) / g;
  for (int k = 1; k <= depth; ++k) {
    Rational Uk = ipow(static_cast<int64_t>(spec.U), k), Vk = ipow(static_cast<int64_t>(spec.V), k);
    Rational hx = Rational(1) / Uk, hy = Rational(1) / Vk;
    Rational cx_half = hx / ipow(static_cast<int64_t>(spec.U), t), cy_half = hy / ipow(static_cast<int64_t>(spec.V), t);
    const int64_t na = Uk.num(), nb = Vk.num();
    if (static_cast<double>(na) * static_cast<double>(nb) * static_cast<double>(spec.m) > 5e7)
      throw std::invalid_argument("generate_rco: construction too large");
    auto& cells = rs.cells[k];
    auto& cuts = rs.levels[k];
    cells.reserve(na * nb);
    cuts.reserve(na * nb * spec.m);
    for (int64_t b = 0; b < nb; ++b) {
      for (int64_t a = 0; a < na; ++a) {
        Rational cx = Rational(-1) + Rational(2 * a + 1) * hx;
        Rational cy = Rational(-1) + Rational(2 * b + 1) * hy;
        BoxRegion cell{{cx, cy}, {hx, hy}};
        std::string caddr = std::to_string(k) + ":" + std::to_string(a) + "_" + std::to_string(b);
        Rational xlo = cx - hx + cx_half, xhi = cx + hx - cx_half;
        Rational ylo = cy - hy + cy_half, yhi = cy + hy - cy_half;
        for (uint64_t j = 0; j < spec.m; ++j) {
          Rational x, y;
          if (spec.placement == Placement::Grid) {
            uint64_t col = j % g, row = j / g;
            x = g > 1 ? xlo + (xhi - xlo) * Rational(static_cast<int64_t>(col)) / Rational(static_cast<int64_t>(g - 1)) : cx;
            y = rows > 1 ? ylo + (yhi - ylo) * Rational(static_cast<int64_t>(row)) / Rational(static_cast<int64_t>(rows - 1)) : cy;
          } else {
            // slot lattice of step one cut-out width
            int64_t sx = ipow(static_cast<int64_t>(spec.U), t).num(), sy = ipow(static_cast<int64_t>(spec.V), t).num();
            uint64_t h = splitmix64(spec.seed ^ splitmix64(static_cast<uint64_t>(k) * 1000003ULL + j) ^
                                    splitmix64(static_cast<uint64_t>(a) * 0x9E3779B1ULL + static_cast<uint64_t>(b)));
            int64_t ix = static_cast<int64_t>(h % static_cast<uint64_t>(sx));
            int64_t iy = static_cast<int64_t>((h >> 32) % static_cast<uint64_t>(sy));
            x = xlo + cx_half * Rational(2 * ix);
            y = ylo + cy_half * Rational(2 * iy);
          }
          BoxRegion cut{{x, y}, {cx_half, cy_half}};
          if (!cell.contains(cut)) throw std::logic_error("generate_rco: cut-out outside its cell at " + caddr);
          cuts.push_back({caddr + "#" + std::to_string(j), std::move(cut)});
        }
        cells.push_back({caddr, std::move(cell)});
      }
    }
  }
  return rs;
}

RectangleSet generate_rcd(const RcdSpec& spec, int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("generate_rcd: depth must be >= 0");
  RectangleSet rs;
  rs.kind = RectangleSet::Kind::Rcd;
  rs.U = spec.U;
  rs.V = spec.V;
  rs.depth = depth;
  rs.levels.resize(depth + 1);
  rs.levels[0].push_back({"e", BoxRegion{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}});
  const int64_t U = static_cast<int64_t>(spec.U), V = static_cast<int64_t>(spec.V);
  const uint64_t letters = (spec.U - 1) * (spec.V - 1);
  for (int k = 0; k < depth; ++k) {
    const auto& parents = rs.levels[k];
    if (static_cast<double>(parents.size()) * static_cast<double>(letters) > 2e7)
      throw std::invalid_argument("generate_rcd: construction too large");
    auto& kids = rs.levels[k + 1];
    kids.reserve(parents.size() * letters);
    Rational Uk = ipow(U, k), Vk = ipow(V, k);
    Rational ux_den = Uk * Rational(U - 1), uy_den = Vk * Rational(V - 1);
    Rational vx = Rational(1) / (ux_den * Rational(U)), vy = Rational(1) / (uy_den * Rational(V));
    Rational hx = Rational(1) / (Uk * Rational(U)), hy = Rational(1) / (Vk * Rational(V));
    for (const auto& par : parents) {
      for (int64_t tt = 1; tt <= V - 1; ++tt) {
        for (int64_t s = 1; s <= U - 1; ++s) {
          uint64_t i = static_cast<uint64_t>(s + (tt - 1) * (U - 1));
          auto [q, r] = spec.corner(par.address, i);
          Rational cx = par.box.center[0] + Rational(2 * s - U) / ux_den + (q ? -vx : vx);
          Rational cy = par.box.center[1] + Rational(2 * tt - V) / uy_den + (r ? -vy : vy);
          kids.push_back({join_address(par.address, i), BoxRegion{{cx, cy}, {hx, hy}}});
        }
      }
    }
  }
  return rs;
}

namespace {

int rcd_kept_depth(const RectangleSet& rs, size_t idx, int k, const std::vector<Rational>& p, int max_level) {
  if (k == max_level) return k;
  const auto& box = rs.levels[k][idx].box;
  const int64_t U = static_cast<int64_t>(rs.U), V = static_cast<int64_t>(rs.V);
  Rational wx = box.half[0] * Rational(2) / Rational(U - 1);
  Rational wy = box.half[1] * Rational(2) / Rational(V - 1);
  Rational fx = (p[0] - box.lo(0)) / wx, fy = (p[1] - box.lo(1)) / wy;
  auto candidates = [](const Rational& f, int64_t cap) {
    std::vector<int64_t> out;
    int64_t fl = f.floor();
    if (Rational(fl) == f) {
      if (fl >= 1 && fl <= cap) out.push_back(fl);
      if (fl + 1 >= 1 && fl + 1 <= cap) out.push_back(fl + 1);
    } else if (fl + 1 >= 1 && fl + 1 <= cap) {
      out.push_back(fl + 1);
    }
    return out;
  };
  int best = k;
  for (int64_t tt : candidates(fy, V - 1)) {
    for (int64_t s : candidates(fx, U - 1)) {
      size_t child = idx * static_cast<size_t>((U - 1) * (V - 1)) + static_cast<size_t>(s - 1 + (tt - 1) * (U - 1));
      if (rs.levels[k + 1][child].box.contains_point(p))
        best = std::max(best, rcd_kept_depth(rs, child, k + 1, p, max_level));
      if (best == max_level) return best;
    }
  }
  return best;
}

}  // namespace

int kept_depth(const RectangleSet& rs, const std::vector<Rational>& p, int max_level) {
  if (p.size() != 2) throw std::invalid_argument("kept_depth: planar point expected");
  max_level = std::min(max_level, rs.depth);
  BoxRegion B{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}};
  if (!B.contains_point(p)) return -1;
  if (rs.kind == RectangleSet::Kind::Rcd) return rcd_kept_depth(rs, 0, 0, p, max_level);
  for (int k = 1; k <= max_level; ++k) {
    int64_t Uk = ipow(static_cast<int64_t>(rs.U), k).num(), Vk = ipow(static_cast<int64_t>(rs.V), k).num();
    int64_t a = std::min(((p[0] + Rational(1)) * Rational(Uk) / Rational(2)).floor(), Uk - 1);
    int64_t b = std::min(((p[1] + Rational(1)) * Rational(Vk) / Rational(2)).floor(), Vk - 1);
    size_t idx = static_cast<size_t>(b * Uk + a);
    for (uint64_t j = 0; j < rs.m; ++j)
      if (rs.levels[k][idx * rs.m + j].box.interior_contains_point(p)) return k - 1;
  }
  return max_level;
}

void write_csv(std::ostream& os, const RectangleSet& rs) {
  os << "level,address,cx,cy,hx,hy\n";
  auto row = [&](int k, const AddressedBox& ab) {
    os << k << ',' << ab.address;
    for (const auto& v : ab.box.center) os << ',' << format_ld(v.to_ld());
    for (const auto& v : ab.box.half) os << ',' << format_ld(v.to_ld());
    os << '\n';
  };
  for (int k = 1; k <= rs.depth; ++k)
    for (const auto& ab : rs.levels[k]) row(k, ab);
}

void write_pbm(std::ostream& os, const RectangleSet& rs, int level, int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("write_pbm: raster size must be positive");
  if (level < 0 || level > rs.depth) throw std::invalid_argument("write_pbm: level out of range");
  os << "P1\n" << width << ' ' << height << '\n';
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      // top row is y = +1
      std::vector<Rational> p{Rational(2 * col + 1, width) - Rational(1), Rational(1) - Rational(2 * row + 1, height)};
      os << (kept_depth(rs, p, level) >= level ? '1' : '0') << (col + 1 < width ? " " : "");
    }
    os << '\n';
  }
}

const SdicLevel* SdicStrategy::level(int k) const {
  for (const auto& l : levels)
    if (l.k == k) return &l;
  return nullptr;
}

SdicStrategy sdic_for_rco(const RcoSpec& spec, double c, int depth) {
  const int t = int_t(spec.t, "sdic_for_rco");
  SdicStrategy s;
  s.A = spec.A();
  s.c = c;
  s.a = rco_alpha(spec, c);
  s.note = "rco cut-outs, q = k + t";
  auto rs = generate_rco(spec, depth);
  for (int k = 1; k <= depth; ++k) {
    SdicLevel lv;
    lv.k = k;
    for (const auto& cut : rs.levels[k]) {
      lv.group_offsets.push_back(lv.tuples.size());
      lv.tuples.push_back({k + t, cut.box.center});
    }
    lv.group_offsets.push_back(lv.tuples.size());
    s.levels.push_back(std::move(lv));
  }
  return s;
}

SdicStrategy sdic_for_rcd(const RcdSpec& spec, double t_real, double c, int depth) {
  const int t = int_t(t_real, "sdic_for_rcd");
  SdicStrategy s;
  s.A = spec.A();
  s.c = c;
  s.a = rcd_alpha(spec, c, t_real);
  auto nt = rcd_Nt(spec.U, spec.V, t_real);
  s.note = "rcd corner complements, q = k + 1 + t, partition option " + std::to_string(nt.option) +
           (nt.option1 == nt.option2 ? " (tie, first option)" : "");
  auto rs = generate_rcd(spec, depth);
  const int64_t U = static_cast<int64_t>(spec.U), V = static_cast<int64_t>(spec.V);
  for (int k = 0; k < depth; ++k) {
    SdicLevel lv;
    lv.k = k;
    const int q = k + 1 + t;
    Rational qhx = Rational(1) / ipow(U, q), qhy = Rational(1) / ipow(V, q);
    Rational Lhx = Rational(1) / (ipow(U, k) * Rational(U - 1)), Lhy = Rational(1) / (ipow(V, k) * Rational(V - 1));
    for (size_t pi = 0; pi < rs.levels[k].size(); ++pi) {
      const auto& par = rs.levels[k][pi].box;
      for (int64_t tt = 1; tt <= V - 1; ++tt) {
        for (int64_t sx = 1; sx <= U - 1; ++sx) {
          size_t ci = pi * static_cast<size_t>((U - 1) * (V - 1)) + static_cast<size_t>(sx - 1 + (tt - 1) * (U - 1));
          const auto& child = rs.levels[k + 1][ci].box;
          Rational Lx = par.center[0] + Rational(2 * sx - U) * Lhx, Ly = par.center[1] + Rational(2 * tt - V) * Lhy;
          Rational Lxlo = Lx - Lhx, Lxhi = Lx + Lhx, Lylo = Ly - Lhy, Lyhi = Ly + Lhy;
          bool right = child.center[0] > Lx, top = child.center[1] > Ly;
          Rational m1lo = right ? Lxlo : child.hi(0), m1hi = right ? child.lo(0) : Lxhi;
          Rational m2lo = top ? Lylo : child.hi(1), m2hi = top ? child.lo(1) : Lyhi;
          lv.group_offsets.push_back(lv.tuples.size());
          if (nt.option == 1) {
            tile_rect(lv.tuples, m1lo, m1hi, Lylo, Lyhi, qhx, qhy, q);
            tile_rect(lv.tuples, child.lo(0), child.hi(0), m2lo, m2hi, qhx, qhy, q);
          } else {
            tile_rect(lv.tuples, m1lo, m1hi, child.lo(1), child.hi(1), qhx, qhy, q);
            tile_rect(lv.tuples, Lxlo, Lxhi, m2lo, m2hi, qhx, qhy, q);
          }
        }
      }
    }
    lv.group_offsets.push_back(lv.tuples.size());
    s.levels.push_back(std::move(lv));
  }
  return s;
}

bool rect_covered(const BoxRegion& R, const std::vector<const BoxRegion*>& boxes) {
  std::vector<Rational> xs{R.lo(0), R.hi(0)};
  for (const auto* b : boxes) {
    for (const Rational& e : {b->lo(0), b->hi(0)})
      if (e > R.lo(0) && e < R.hi(0)) xs.push_back(e);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> reps;
  for (size_t i = 0; i < xs.size(); ++i) {
    reps.push_back(xs[i]);
    if (i + 1 < xs.size()) reps.push_back((xs[i] + xs[i + 1]) / Rational(2));
  }
  std::vector<std::pair<Rational, Rational>> iv;
  for (const auto& x : reps) {
    iv.clear();
    for (const auto* b : boxes)
      if (b->lo(0) <= x && x <= b->hi(0) && b->hi(1) >= R.lo(1) && b->lo(1) <= R.hi(1)) iv.emplace_back(b->lo(1), b->hi(1));
    std::sort(iv.begin(), iv.end());
    Rational cur = R.lo(1);
    bool covered_cur = false;
    for (const auto& [lo, hi] : iv) {
      if (lo > cur) break;
      if (hi >= cur) {
        covered_cur = true;
        cur = hi;
      }
      if (cur >= R.hi(1)) break;
    }
    if (!covered_cur || cur < R.hi(1)) return false;
  }
  return true;
}

CoverReport verify_sdic_cover(const SdicStrategy& s, const RectangleSet& rs, int k) {
  CoverReport rep;
  const SdicLevel* lv = s.level(k);
  if (rs.kind == RectangleSet::Kind::Rco) {
    if (k < 1 || k > rs.depth) throw std::invalid_argument("verify_sdic_cover: level out of range");
    if (!lv) throw std::invalid_argument("verify_sdic_cover: strategy lacks level");
    // complement is the union of open cut-outs; each must sit in the cover
    std::vector<const BoxRegion*> boxes;
    std::vector<BoxRegion> store;
    store.reserve(lv->tuples.size());
    for (const auto& tu : lv->tuples) store.push_back(s.box(tu));
    for (size_t g = 0; g < rs.levels[k].size(); ++g) {
      ++rep.regions;
      boxes.clear();
      for (size_t i = lv->group_offsets[g]; i < lv->group_offsets[g + 1]; ++i) boxes.push_back(&store[i]);
      if (!rect_covered(rs.levels[k][g].box, boxes)) {
        rep.pass = false;
        rep.witness = rs.levels[k][g].address;
        return rep;
      }
    }
    return rep;
  }
  if (k < 0 || k + 1 > rs.depth) throw std::invalid_argument("verify_sdic_cover: level out of range");
  if (!lv) throw std::invalid_argument("verify_sdic_cover: strategy lacks level");
  const int64_t U = static_cast<int64_t>(rs.U), V = static_cast<int64_t>(rs.V);
  Rational Lhx = Rational(1) / (ipow(U, k) * Rational(U - 1)), Lhy = Rational(1) / (ipow(V, k) * Rational(V - 1));
  std::vector<BoxRegion> store;
  std::vector<const BoxRegion*> boxes;
  size_t g = 0;
  for (size_t pi = 0; pi < rs.levels[k].size(); ++pi) {
    const auto& par = rs.levels[k][pi].box;
    for (int64_t tt = 1; tt <= V - 1; ++tt) {
      for (int64_t sx = 1; sx <= U - 1; ++sx, ++g) {
        ++rep.regions;
        size_t ci = pi * static_cast<size_t>((U - 1) * (V - 1)) + static_cast<size_t>(sx - 1 + (tt - 1) * (U - 1));
        const auto& child = rs.levels[k + 1][ci].box;
        Rational Lx = par.center[0] + Rational(2 * sx - U) * Lhx, Ly = par.center[1] + Rational(2 * tt - V) * Lhy;
        BoxRegion L{{Lx, Ly}, {Lhx, Lhy}};
        store.clear();
        boxes.clear();
        for (size_t i = lv->group_offsets[g]; i < lv->group_offsets[g + 1]; ++i) store.push_back(s.box(lv->tuples[i]));
        for (const auto& b : store) boxes.push_back(&b);
        // L \ child is the union of the two strips beside the child
        bool right = child.center[0] > Lx, top = child.center[1] > Ly;
        Rational sxlo = right ? L.lo(0) : child.hi(0), sxhi = right ? child.lo(0) : L.hi(0);
        Rational sylo = top ? L.lo(1) : child.hi(1), syhi = top ? child.lo(1) : L.hi(1);
        BoxRegion strip_x{{(sxlo + sxhi) / Rational(2), Ly}, {(sxhi - sxlo) / Rational(2), Lhy}};
        BoxRegion strip_y{{Lx, (sylo + syhi) / Rational(2)}, {Lhx, (syhi - sylo) / Rational(2)}};
        if (!rect_covered(strip_x, boxes) || !rect_covered(strip_y, boxes)) {
          rep.pass = false;
          rep.witness = rs.levels[k][pi].address + "/" + std::to_string(sx + (tt - 1) * (U - 1));
          return rep;
        }
      }
    }
  }
  return rep;
}

}  // namespace mpg
