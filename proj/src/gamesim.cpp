#include "mpg/gamesim.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mpg {

namespace {

constexpr size_t kMaxDim = 8;

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

int64_t ipow64(int64_t b, int e) { return ipow(b, e).num(); }

std::string join_ints(const int64_t* v, size_t n) {
  std::string s;
  for (size_t j = 0; j < n; ++j) s += (j ? "," : "") + std::to_string(v[j]);
  return s;
}

std::string join_rationals(const std::vector<Rational>& v) {
  std::string s;
  for (size_t j = 0; j < v.size(); ++j) s += (j ? "," : "") + v[j].str();
  return s;
}

void check_U(const std::vector<int64_t>& U) {
  if (U.empty() || U.size() > kMaxDim) throw std::invalid_argument("Projector: dimension must be 1..8");
  for (int64_t u : U)
    if (u < 2) throw std::invalid_argument("Projector: every U must be at least 2");
}

// Runs body(i) for i in [0, count) on strided partitions.
template <class Body>
void parallel_for(size_t count, int threads, Body body) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<size_t>(count, 1))));
  if (threads == 1) {
    for (size_t i = 0; i < count; ++i) body(0, i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (size_t i = static_cast<size_t>(t); i < count; i += static_cast<size_t>(threads)) body(t, i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

// ---- lattices

std::vector<Rational> Lattice::half() const {
  if (!A.has_reciprocals()) throw std::invalid_argument("Lattice: exact mode needs integer reciprocals");
  std::vector<Rational> h;
  for (uint64_t u : A.reciprocals()) h.push_back(rho / ipow(static_cast<int64_t>(u), k));
  return h;
}

std::vector<Rational> Lattice::center(const std::vector<int64_t>& z) const {
  if (z.size() != A.n()) throw std::invalid_argument("Lattice: dimension mismatch");
  auto h = half();
  std::vector<Rational> c;
  for (size_t j = 0; j < z.size(); ++j) {
    Rational spacing = kind == Kind::E ? h[j] / Rational(2) : h[j] * Rational(3);
    c.push_back((y.empty() ? Rational(0) : y[j]) + spacing * Rational(z[j]));
  }
  return c;
}

std::vector<long double> Lattice::center_ld(const std::vector<int64_t>& z) const {
  if (z.size() != A.n()) throw std::invalid_argument("Lattice: dimension mismatch");
  std::vector<long double> c;
  for (size_t j = 0; j < z.size(); ++j) {
    long double h = rho.to_ld() * std::pow(A.betas()[j], static_cast<long double>(k));
    long double spacing = kind == Kind::E ? h / 2 : 3 * h;
    c.push_back((y.empty() ? 0.0L : y[j].to_ld()) + spacing * static_cast<long double>(z[j]));
  }
  return c;
}

BoxRegion Lattice::box(const std::vector<int64_t>& z) const { return BoxRegion{center(z), half()}; }

// ---- projection

Projector::Projector(std::vector<int64_t> U, int N, ProjectionRule rule) : U_(std::move(U)), N_(N), rule_(rule) {
  check_U(U_);
  if (N < 1) throw std::invalid_argument("Projector: N must be at least 1");
}

void Projector::project(int k, const int64_t* w, int64_t* out) const {
  if (k < 1) throw std::invalid_argument("Projector: pi_k needs k >= 1");
  const size_t n = U_.size();
  std::array<int64_t, kMaxDim> v{};
  if (d_branch_level(k)) {
    // D cell with E-index 6z contains T iff |6zU - w| + 2 <= 2U on each axis
    bool all = true;
    for (size_t j = 0; j < n && all; ++j) {
      const int64_t U = U_[j];
      int64_t z0 = floor_div(w[j], 6 * U);
      bool found = false;
      for (int64_t z = z0; z <= z0 + 1 && !found; ++z) {
        if (std::llabs(6 * z * U - w[j]) <= 2 * U - 2) {
          v[j] = 6 * z;
          found = true;
        }
      }
      all = found;
    }
    if (all) {
      std::copy(v.begin(), v.begin() + static_cast<long>(n), out);
      return;
    }
  }
  // nearest center vU to w, ties toward the smaller index
  for (size_t j = 0; j < n; ++j) v[j] = ceil_div(2 * w[j] - U_[j], 2 * U_[j]);
  std::copy(v.begin(), v.begin() + static_cast<long>(n), out);
}

std::vector<int64_t> Projector::project(int k, const std::vector<int64_t>& w) const {
  if (w.size() != n()) throw std::invalid_argument("Projector: dimension mismatch");
  std::vector<int64_t> out(n());
  project(k, w.data(), out.data());
  return out;
}

std::vector<int64_t> Projector::compose(int from, int to, const std::vector<int64_t>& w) const {
  std::vector<int64_t> cur = w;
  for (int lvl = from - 1; lvl >= to; --lvl) project(lvl, cur.data(), cur.data());
  return cur;
}

// ---- Claim A and Lemma A.1

VerifyReport verify_claimA(const Projector& P, int k, int64_t radius, int threads) {
  if (radius < 0) throw std::invalid_argument("verify_claimA: negative radius");
  const size_t n = P.n();
  std::vector<std::vector<int64_t>> parents;
  std::vector<int64_t> z(n, -radius);
  while (true) {
    parents.push_back(z);
    size_t j = 0;
    while (j < n && z[j] == radius) z[j++] = -radius;
    if (j == n) break;
    ++z[j];
  }
  return verify_claimA(P, k, parents, threads);
}

VerifyReport verify_claimA(const Projector& P, int k, const std::vector<std::vector<int64_t>>& parents,
                           int threads) {
  if (k < 0) throw std::invalid_argument("verify_claimA: k must be nonnegative");
  const size_t n = P.n();
  const int N = P.N();
  const int base = k * N + 1, top = (k + 1) * N + 1;
  std::vector<int64_t> UN(n);
  for (size_t j = 0; j < n; ++j) UN[j] = ipow64(P.U()[j], N);

  struct Part {
    uint64_t checked = 0, failures = 0;
    size_t first = SIZE_MAX;
    std::string witness;
  };
  threads = std::max(1, threads);
  std::vector<Part> parts(static_cast<size_t>(threads));
  parallel_for(parents.size(), threads, [&](int t, size_t pi) {
    Part& part = parts[static_cast<size_t>(t)];
    const auto& z = parents[pi];
    if (z.size() != n) throw std::invalid_argument("verify_claimA: parent dimension mismatch");
    // children T' with |6z' - 6 z U^N| + 2 <= U^N in level-top E units
    std::array<int64_t, kMaxDim> lo{}, hi{}, cur{}, w{};
    for (size_t j = 0; j < n; ++j) {
      int64_t c = 6 * z[j] * UN[j];
      lo[j] = ceil_div(c - UN[j] + 2, 6);
      hi[j] = floor_div(c + UN[j] - 2, 6);
      if (lo[j] > hi[j]) return;
      cur[j] = lo[j];
    }
    while (true) {
      for (size_t j = 0; j < n; ++j) w[j] = 6 * cur[j];
      for (int lvl = top - 1; lvl >= base; --lvl) P.project(lvl, w.data(), w.data());
      ++part.checked;
      bool ok = true;
      for (size_t j = 0; j < n; ++j) ok = ok && w[j] == 6 * z[j];
      if (!ok) {
        ++part.failures;
        if (pi < part.first) {
          part.first = pi;
          part.witness = "k=" + std::to_string(k) + " T=D" + std::to_string(base) + "[" + join_ints(z.data(), n) +
                         "] T'=D" + std::to_string(top) + "[" + join_ints(cur.data(), n) + "] -> E" +
                         std::to_string(base) + "[" + join_ints(w.data(), n) + "]";
        }
      }
      size_t j = 0;
      while (j < n && cur[j] == hi[j]) {
        cur[j] = lo[j];
        ++j;
      }
      if (j == n) break;
      ++cur[j];
    }
  });
  VerifyReport rep;
  size_t first = SIZE_MAX;
  for (const auto& p : parts) {
    rep.checked += p.checked;
    rep.failures += p.failures;
    if (p.first < first) {
      first = p.first;
      rep.witness = p.witness;
    }
  }
  rep.pass = rep.failures == 0;
  return rep;
}

VerifyReport verify_lemmaA1(const Projector& P, int max_level, int64_t radius) {
  const size_t n = P.n();
  const int N = P.N();
  VerifyReport rep;
  for (int k = 1; k <= max_level; ++k) {
    if (k % N == 1 % N) continue;
    std::array<int64_t, kMaxDim> w{}, v{};
    for (size_t j = 0; j < n; ++j) w[j] = -radius;
    while (true) {
      P.project(k, w.data(), v.data());
      ++rep.checked;
      // T has half 2 and the half-shrunk parent has half U, in level-(k+1) E units
      bool ok = true;
      for (size_t j = 0; j < n; ++j) ok = ok && std::llabs(w[j] - v[j] * P.U()[j]) + 2 <= P.U()[j];
      if (!ok && rep.failures++ == 0)
        rep.witness = "k=" + std::to_string(k) + " T=E" + std::to_string(k + 1) + "[" + join_ints(w.data(), n) +
                      "] -> E" + std::to_string(k) + "[" + join_ints(v.data(), n) + "]";
      size_t j = 0;
      while (j < n && w[j] == radius) w[j++] = -radius;
      if (j == n) break;
      ++w[j];
    }
  }
  rep.pass = rep.failures == 0;
  return rep;
}

// ---- SDIC budget audit

namespace {

// Range add, global max with leftmost argmax.
template <class T>
class MaxTree {
 public:
  explicit MaxTree(size_t n) : n_(n), mx_(4 * std::max<size_t>(n, 1)), add_(4 * std::max<size_t>(n, 1)) {}
  void add(size_t l, size_t r, T v) { add(1, 0, n_ - 1, l, r, v); }
  T max() const { return mx_[1]; }
  size_t argmax() const {
    // ancestors add equally to both children, so compare the children directly
    size_t node = 1, lo = 0, hi = n_ - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (mx_[2 * node] >= mx_[2 * node + 1]) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  void add(size_t node, size_t lo, size_t hi, size_t l, size_t r, T v) {
    if (r < lo || hi < l) return;
    if (l <= lo && hi <= r) {
      mx_[node] += v;
      add_[node] += v;
      return;
    }
    size_t mid = (lo + hi) / 2;
    add(2 * node, lo, mid, l, r, v);
    add(2 * node + 1, mid + 1, hi, l, r, v);
    mx_[node] = std::max(mx_[2 * node], mx_[2 * node + 1]) + add_[node];
  }
  size_t n_;
  std::vector<T> mx_, add_;
};

struct SweepResult {
  long double best = 0;
  Rational x, y;
};

// Maximum total weight of closed rectangles covering one point.
template <class T>
SweepResult sweep_max(const std::vector<BoxRegion>& rects, const std::vector<T>& weight) {
  SweepResult res;
  if (rects.empty()) return res;
  std::vector<Rational> xs, ys;
  for (const auto& r : rects) {
    xs.push_back(r.lo(0));
    xs.push_back(r.hi(0));
    ys.push_back(r.lo(1));
    ys.push_back(r.hi(1));
  }
  auto uniq = [](std::vector<Rational>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(xs);
  uniq(ys);
  auto idx = [](const std::vector<Rational>& v, const Rational& x) {
    return static_cast<size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  struct Ev {
    size_t x, ylo, yhi;
    size_t r;
  };
  std::vector<Ev> adds, removes;
  for (size_t i = 0; i < rects.size(); ++i) {
    size_t ylo = idx(ys, rects[i].lo(1)), yhi = idx(ys, rects[i].hi(1));
    adds.push_back({idx(xs, rects[i].lo(0)), ylo, yhi, i});
    removes.push_back({idx(xs, rects[i].hi(0)), ylo, yhi, i});
  }
  auto by_x = [](const Ev& a, const Ev& b) { return a.x < b.x || (a.x == b.x && a.r < b.r); };
  std::sort(adds.begin(), adds.end(), by_x);
  std::sort(removes.begin(), removes.end(), by_x);
  MaxTree<T> tree(ys.size());
  size_t ai = 0, ri = 0;
  bool have = false;
  for (size_t xi = 0; xi < xs.size(); ++xi) {
    bool changed = false;
    for (; ai < adds.size() && adds[ai].x == xi; ++ai) {
      tree.add(adds[ai].ylo, adds[ai].yhi, weight[adds[ai].r]);
      changed = true;
    }
    if (changed) {
      long double m = static_cast<long double>(tree.max());
      if (!have || m > res.best) {
        have = true;
        res.best = m;
        res.x = xs[xi];
        res.y = ys[tree.argmax()];
      }
    }
    for (; ri < removes.size() && removes[ri].x == xi; ++ri) tree.add(removes[ri].ylo, removes[ri].yhi, -weight[removes[ri].r]);
  }
  return res;
}

}  // namespace

BudgetReport verify_sdic_budget(const SdicStrategy& s, int k_lo, int k_hi) {
  BudgetReport rep;
  for (int k = k_lo; k <= k_hi; ++k) {
    const SdicLevel* lv = s.level(k);
    if (!lv || lv->tuples.empty()) continue;
    if (s.A.n() != 2) throw std::invalid_argument("verify_sdic_budget: planar strategies only");
    const auto& U = s.A.reciprocals();
    std::vector<Rational> test_half;
    for (uint64_t u : U) test_half.push_back(s.rho1 / ipow(static_cast<int64_t>(u), k));
    // a tuple box meets A^k(B[0,rho1]) + z iff z lies in the box grown by the test half-widths
    std::vector<BoxRegion> grown;
    std::vector<int64_t> ones;
    std::vector<long double> mass;
    const LogScalar limit = (s.a * s.A.prod_pow(k)).pow(s.c);
    for (const auto& tu : lv->tuples) {
      BoxRegion b = s.box(tu);
      for (size_t j = 0; j < 2; ++j) b.half[j] += test_half[j];
      grown.push_back(std::move(b));
      ones.push_back(1);
      mass.push_back((s.A.prod_pow(tu.q).pow(s.c) / limit).value());
    }
    rep.tuples += lv->tuples.size();
    auto cnt = sweep_max(grown, ones);
    auto ms = sweep_max(grown, mass);
    if (static_cast<uint64_t>(cnt.best) > rep.worst_count) {
      rep.worst_count = static_cast<uint64_t>(cnt.best);
      rep.worst_count_k = k;
      rep.count_witness = {cnt.x, cnt.y};
    }
    if (ms.best > rep.worst_ratio) {
      rep.worst_ratio = ms.best;
      rep.worst_ratio_k = k;
      rep.ratio_witness = {ms.x, ms.y};
    }
  }
  rep.pass = rep.worst_ratio <= 1 + kBudgetSlack;
  if (!rep.pass)
    rep.witness = "k=" + std::to_string(rep.worst_ratio_k) + " z=" + join_rationals(rep.ratio_witness) +
                  " ratio=" + format_ld(rep.worst_ratio);
  return rep;
}

// ---- game play

PlayerI PlayerI::steer(std::vector<Rational> target) {
  PlayerI p;
  p.kind = Kind::SteerToward;
  p.target = std::move(target);
  return p;
}

PlayerI PlayerI::fixed(std::vector<std::vector<Rational>> centers) {
  PlayerI p;
  p.kind = Kind::FixedSequence;
  p.centers = std::move(centers);
  return p;
}

PlayerI PlayerI::chain(Projector P, std::vector<int64_t> cell) {
  PlayerI p;
  p.kind = Kind::Chain;
  p.projector = std::move(P);
  p.chain_cell = std::move(cell);
  return p;
}

namespace {

std::vector<Rational> next_center(const PlayerI& pI, int m, int depth, const BoxRegion* prev,
                                  const std::vector<Rational>& half, const Rational& r, const DiagonalContraction& A) {
  switch (pI.kind) {
    case PlayerI::Kind::SteerToward: {
      if (pI.target.size() != A.n()) throw std::invalid_argument("play_game: target dimension mismatch");
      if (!prev) return pI.target;
      std::vector<Rational> c(A.n());
      for (size_t j = 0; j < A.n(); ++j) {
        Rational slack = prev->half[j] - half[j];
        c[j] = max(prev->center[j] - slack, min(prev->center[j] + slack, pI.target[j]));
      }
      return c;
    }
    case PlayerI::Kind::FixedSequence:
      if (static_cast<size_t>(m) > pI.centers.size())
        throw std::invalid_argument("play_game: illegal Player I move at m=" + std::to_string(m) + ": no move given");
      return pI.centers[static_cast<size_t>(m - 1)];
    case PlayerI::Kind::Chain: {
      if (!pI.projector) throw std::invalid_argument("play_game: chain policy without projector");
      Lattice lat{Lattice::Kind::E, m, r, {}, A};
      return lat.center(pI.projector->compose(depth, m, pI.chain_cell));
    }
  }
  throw std::logic_error("play_game: unknown policy");
}

LogScalar tuple_mass(const DiagonalContraction& A, int q, double c) { return A.prod_pow(q).pow(c); }

}  // namespace

PlayTranscript play_game(const PlayerI& pI, const SdicStrategy& s, int depth, const PlayOptions& opt) {
  if (depth < 1) throw std::invalid_argument("play_game: depth must be at least 1");
  if (!s.A.has_reciprocals()) throw std::invalid_argument("play_game: exact play needs integer reciprocals");
  PlayTranscript tr;
  tr.r = s.r;
  tr.c = s.c;
  tr.alpha = s.a;
  tr.A = s.A;
  const size_t n = s.A.n();
  for (int m = 1; m <= depth; ++m) {
    std::vector<Rational> half;
    for (uint64_t u : s.A.reciprocals()) half.push_back(s.r / ipow(static_cast<int64_t>(u), m));
    const BoxRegion* prev = tr.boxes.empty() ? nullptr : &tr.boxes.back();
    auto center = next_center(pI, m, depth, prev, half, s.r, s.A);
    if (center.size() != n) throw std::invalid_argument("play_game: illegal Player I move at m=" + std::to_string(m) + ": dimension");
    BoxRegion Um{center, half};
    if (prev && !prev->contains(Um))
      throw std::invalid_argument("play_game: illegal Player I move at m=" + std::to_string(m) + ": not nested");
    tr.boxes.push_back(Um);

    Response resp;
    resp.m = m;
    resp.limit = (s.a * s.A.prod_pow(m)).pow(s.c);
    if (!opt.skip_always) {
      if (const SdicLevel* lv = s.level(m)) {
        for (const auto& tu : lv->tuples)
          if (s.box(tu).intersects(Um)) resp.tuples.push_back(tu);
      }
      LogScalar mass;
      for (const auto& tu : resp.tuples) mass = mass + tuple_mass(s.A, tu.q, s.c);
      bool legal;
      if (s.c == 0) {
        legal = resp.tuples.size() <= 1 &&
                (resp.tuples.empty() || s.A.prod_pow(resp.tuples[0].q) <= s.a * s.A.prod_pow(m));
      } else {
        legal = mass <= resp.limit * LogScalar::from_value(1 + kBudgetSlack);
      }
      if (legal) {
        resp.mass = mass;
      } else {
        resp.tuples.clear();
        resp.skipped_budget = true;
      }
    }
    tr.responses.push_back(std::move(resp));
  }
  tr.outcome_box = tr.boxes.back();
  for (const auto& resp : tr.responses)
    for (const auto& tu : resp.tuples) {
      BoxRegion b = s.box(tu);
      tr.outcome_inside_deleted = tr.outcome_inside_deleted || b.contains(tr.outcome_box);
      tr.outcome_meets_deleted = tr.outcome_meets_deleted || b.intersects(tr.outcome_box);
    }
  if (opt.kept) {
    const RectangleSet& rs = *opt.kept;
    const BoxRegion& ob = tr.outcome_box;
    if (rs.kind == RectangleSet::Kind::Rcd) {
      for (const auto& ab : rs.levels[static_cast<size_t>(rs.depth)])
        if (ab.box.intersects(ob)) {
          tr.outcome_meets_kept = true;
          break;
        }
    } else {
      // clip to B[0,1]; cut-out boundaries count as deleted here
      BoxRegion clip;
      bool empty = false;
      for (size_t j = 0; j < n; ++j) {
        Rational lo = max(ob.lo(j), Rational(-1)), hi = min(ob.hi(j), Rational(1));
        if (lo > hi) empty = true;
        clip.center.push_back((lo + hi) / Rational(2));
        clip.half.push_back((hi - lo) / Rational(2));
      }
      if (!empty) {
        std::vector<const BoxRegion*> cuts;
        for (int k = 1; k <= rs.depth; ++k)
          for (const auto& ab : rs.levels[static_cast<size_t>(k)]) cuts.push_back(&ab.box);
        tr.outcome_meets_kept = !rect_covered(clip, cuts);
      }
    }
  }
  return tr;
}

std::string PlayTranscript::serialize() const {
  std::ostringstream os;
  os << "game n=" << A.n() << " r=" << r.str() << " c=" << format_ld(c) << " log_alpha=" << format_ld(alpha.log(), 21)
     << " A=";
  for (size_t j = 0; j < A.n(); ++j)
    os << (j ? "," : "") << (A.has_reciprocals() ? "1/" + std::to_string(A.reciprocals()[j]) : format_ld(A.betas()[j]));
  os << '\n';
  for (size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    const auto& resp = responses[i];
    os << "m=" << resp.m << " center=" << join_rationals(b.center) << " half=" << join_rationals(b.half) << " response=";
    if (resp.tuples.empty()) {
      os << (resp.skipped_budget ? "skip-budget" : "skip");
    } else {
      for (size_t t = 0; t < resp.tuples.size(); ++t)
        os << (t ? ";" : "") << resp.tuples[t].q << ':' << join_rationals(resp.tuples[t].y);
    }
    os << '\n';
  }
  os << "outcome center=" << join_rationals(outcome_box.center) << " half=" << join_rationals(outcome_box.half)
     << " inside_deleted=" << outcome_inside_deleted << " meets_deleted=" << outcome_meets_deleted
     << " meets_kept=" << outcome_meets_kept << '\n';
  return os.str();
}

VerifyReport audit_budget(const PlayTranscript& tr) {
  VerifyReport rep;
  for (const auto& resp : tr.responses) {
    ++rep.checked;
    LogScalar limit = (tr.alpha * tr.A.prod_pow(resp.m)).pow(tr.c);
    bool ok;
    if (tr.c == 0) {
      ok = resp.tuples.size() <= 1 &&
           (resp.tuples.empty() || tr.A.prod_pow(resp.tuples[0].q) <= tr.alpha * tr.A.prod_pow(resp.m));
    } else {
      LogScalar mass;
      for (const auto& tu : resp.tuples) mass = mass + tuple_mass(tr.A, tu.q, tr.c);
      ok = mass <= limit * LogScalar::from_value(1 + kBudgetSlack);
    }
    if (!ok && rep.failures++ == 0) rep.witness = "m=" + std::to_string(resp.m);
  }
  rep.pass = rep.failures == 0;
  return rep;
}

// ---- potential

PotentialEntry potential_phi(const PlayTranscript& tr, int l, double delta) {
  if (l < 1 || static_cast<size_t>(l) > tr.boxes.size())
    throw std::invalid_argument("potential_phi: level outside the transcript");
  PotentialEntry e;
  e.level = l;
  e.cell = tr.boxes[static_cast<size_t>(l - 1)];
  LogScalar run;
  for (int t = 1; t < l; ++t) {
    const auto& resp = tr.responses[static_cast<size_t>(t - 1)];
    for (const auto& tu : resp.tuples)
      if (BoxRegion::scaled(tu.y, tr.r, tr.A, tu.q).intersects(e.cell)) run = run + tuple_mass(tr.A, tu.q, tr.c);
    e.partial.push_back(run);
  }
  e.phi = run;
  e.in_d_prime = e.phi <= (LogScalar::from_value(delta) * tr.A.prod_pow(l)).pow(tr.c);
  return e;
}

PotentialLedger potential_ledger(const PlayTranscript& tr, double delta) {
  PotentialLedger led;
  for (int l = 1; l <= static_cast<int>(tr.boxes.size()); ++l) led.entries.push_back(potential_phi(tr, l, delta));
  return led;
}

bool PotentialLedger::monotone() const {
  for (const auto& e : entries)
    for (size_t i = 1; i < e.partial.size(); ++i)
      if (e.partial[i] < e.partial[i - 1]) return false;
  return true;
}

// ---- counting oracles

Rational claim2_gamma(int64_t U, int N) { return Rational(ipow64(U, N)) / Rational(6) - Rational(1, 3); }

namespace {

// nearest integer, halves rounded down
int64_t H(const Rational& x) { return (x - Rational(1, 2)).ceil(); }

}  // namespace

Claim2Report verify_claim2(const std::vector<int64_t>& U, int N, int k, int64_t radius) {
  check_U(U);
  if (N < 1 || k < 0 || radius < 0) throw std::invalid_argument("verify_claim2: bad arguments");
  const size_t n = U.size();
  const int base = k * N + 1, top = (k + 1) * N + 1;
  std::vector<uint64_t> recips(U.begin(), U.end());
  auto A = DiagonalContraction::from_reciprocals(recips);
  Lattice parent_lat{Lattice::Kind::D, base, Rational(1), {}, A};
  Lattice child_lat{Lattice::Kind::D, top, Rational(1), {}, A};
  Claim2Report rep;
  rep.product_of_floors = 1;
  for (size_t j = 0; j < n; ++j) {
    rep.gamma.push_back(claim2_gamma(U[j], N));
    rep.product_of_floors *= static_cast<uint64_t>(rep.gamma[j].floor());
  }
  std::vector<int64_t> r(n, -radius);
  while (true) {
    ++rep.cells;
    BoxRegion shrunk = parent_lat.box(r);
    for (auto& h : shrunk.half) h /= Rational(2);
    std::vector<Rational> f(n);
    std::vector<int64_t> Hf(n), lo(n), hi(n);
    uint64_t closed = 1;
    for (size_t j = 0; j < n; ++j) {
      f[j] = Rational(ipow64(U[j], N)) * Rational(r[j]);
      Hf[j] = H(f[j]);
      closed *= static_cast<uint64_t>((f[j] + rep.gamma[j]).floor() - (f[j] - rep.gamma[j]).ceil() + 1);
      int64_t g = rep.gamma[j].ceil() + 1;
      lo[j] = -g;
      hi[j] = g;
    }
    // enumerate l over a window wider than gamma and keep the members of Q
    uint64_t count = 0;
    std::vector<int64_t> l = lo, zc(n);
    while (true) {
      bool member = true;
      for (size_t j = 0; j < n && member; ++j)
        member = (f[j] - Rational(Hf[j]) - Rational(l[j])).abs() <= rep.gamma[j];
      if (member) {
        ++count;
        for (size_t j = 0; j < n; ++j) zc[j] = Hf[j] + l[j];
        if (!shrunk.contains(child_lat.box(zc)) && rep.pass) {
          rep.pass = false;
          rep.witness = "Q cell outside the half-shrunk parent: T=[" + join_ints(r.data(), n) + "] T'=[" +
                        join_ints(zc.data(), n) + "]";
        }
      }
      size_t j = 0;
      while (j < n && l[j] == hi[j]) {
        l[j] = lo[j];
        ++j;
      }
      if (j == n) break;
      ++l[j];
    }
    rep.enumerated = count;
    rep.closed_form = closed;
    if (count != rep.product_of_floors) rep.equals_product_of_floors = false;
    if ((count != closed || count < rep.product_of_floors) && rep.pass) {
      rep.pass = false;
      rep.witness = "T=[" + join_ints(r.data(), n) + "] enumerated=" + std::to_string(count) +
                    " closed_form=" + std::to_string(closed);
    }
    size_t j = 0;
    while (j < n && r[j] == radius) r[j++] = -radius;
    if (j == n) break;
    ++r[j];
  }
  return rep;
}

Claim3Report verify_claim3(uint64_t draws, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int64_t lo, int64_t hi) { return std::uniform_int_distribution<int64_t>(lo, hi)(rng); };
  Claim3Report rep;
  for (uint64_t d = 0; d < draws; ++d) {
    const int n = static_cast<int>(uni(1, 2));
    const int N = static_cast<int>(uni(1, 3));
    const int k = static_cast<int>(uni(0, 1));
    const int L = (k + 1) * N + 1;
    const int t = static_cast<int>(uni(std::max(1, k * N + 1), (k + 1) * N));
    const int q = static_cast<int>(uni(1, L + 1));
    // per-axis units of (1/2) beta^(L+1), rho = 1
    uint64_t count = 1;
    Rational bound(ipow64(4, n));
    std::string desc = "n=" + std::to_string(n) + " N=" + std::to_string(N) + " k=" + std::to_string(k) +
                       " t=" + std::to_string(t) + " q=" + std::to_string(q);
    for (int j = 0; j < n; ++j) {
      const int64_t U = uni(6, 12);
      const int64_t S = ipow64(U, L + 1 - t);   // half-shrunk T'' half-width
      const int64_t Hq = 2 * ipow64(U, L + 1 - q);
      const int64_t w = uni(-20, 20);
      const int64_t c = w * S;
      const int64_t u = c + uni(-(2 * S + Hq), 2 * S + Hq);  // the tuple box meets T''
      uint64_t axis = 0;
      for (int64_t z = floor_div(c - S, 6 * U) - 1; z <= ceil_div(c + S, 6 * U) + 1; ++z) {
        int64_t zc = 6 * U * z;
        bool inside = std::llabs(zc - c) + 2 * U <= S;
        bool meets = std::llabs(zc - u) <= 2 * U + Hq;
        if (inside && meets) ++axis;
      }
      count *= axis;
      bound *= q <= L ? Rational(ipow64(U, L - q) + 1) : Rational(1) + Rational(1) / Rational(ipow64(U, q - L));
      desc += " U" + std::to_string(j) + "=" + std::to_string(U) + " w=" + std::to_string(w) + " u=" + std::to_string(u);
    }
    ++rep.draws;
    long double ratio = static_cast<long double>(count) / bound.to_ld();
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (Rational(static_cast<int64_t>(count)) > bound && rep.pass) {
      rep.pass = false;
      rep.witness = desc + " count=" + std::to_string(count) + " bound=" + bound.str();
    }
  }
  return rep;
}

long double min_inequality_lhs(long double x, long double y, long double a, long double b, long double g,
                               long double c) {
  return std::min(1.0L, std::pow(x, c) / std::pow(g * y, c)) * (a * x + b * y);
}

long double min_inequality_rhs(long double x, long double y, long double a, long double b, long double g,
                               long double c) {
  return (a + b) * std::pow(x, c) * std::max(std::pow(x, 1 - c), std::pow(y, 1 - c) / std::pow(g, c));
}

InequalityReport verify_min_inequality(uint64_t samples, uint64_t seed) {
  // rounding allowance for a handful of pow and product evaluations
  constexpr long double kTol = 64 * LDBL_EPSILON;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<long double> pos(0.0L, 10.0L), unit(0.0L, 1.0L);
  auto draw = [&](auto& dist, long double lo) {
    long double v;
    do v = dist(rng);
    while (v <= lo);
    return v;
  };
  InequalityReport rep;
  for (uint64_t i = 0; i < samples; ++i) {
    long double x = draw(pos, 0), y = draw(pos, 0), a = draw(pos, 0), b = draw(pos, 0), g = draw(pos, 0);
    long double c = draw(unit, 0);
    long double l = min_inequality_lhs(x, y, a, b, g, c), r = min_inequality_rhs(x, y, a, b, g, c);
    ++rep.samples;
    rep.worst_ratio = std::max(rep.worst_ratio, l / r);
    if (l > r * (1 + kTol) && rep.pass) {
      rep.pass = false;
      rep.witness = "x=" + format_ld(x) + " y=" + format_ld(y) + " a=" + format_ld(a) + " b=" + format_ld(b) +
                    " gamma=" + format_ld(g) + " c=" + format_ld(c);
    }
  }
  return rep;
}

}  // namespace mpg
