#include "mpg/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace mpg {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

double c_from_s(double s) { return -std::expm1(-s * std::log(10.0)); }
double s_from_c(double c) { return -std::log10(1 - c); }

bool better(const Probe& a, const Probe& b, Objective o) {
  if (o == Objective::MaxM && a.M != b.M) return a.M > b.M;
  if (a.value != b.value) return a.value > b.value;
  return std::tie(a.c, a.delta, a.t) < std::tie(b.c, b.delta, b.t);
}

struct CEval {
  bool feasible = false;
  Probe best;
  std::vector<Probe> probes;
  AlphaEval ae;
};

LogScalar scaled(LogScalar alpha, uint64_t M, double c) {
  return LogScalar::from_log(alpha.log() + std::log(static_cast<long double>(M)) / c);
}

// smallest delta allowed by condition 1 for pattern size M
double delta_lo1(LogScalar alpha, const DiagonalContraction& A, double c, uint64_t M) {
  long double l = std::log(static_cast<long double>(M)) + c * alpha.log() - std::log(-std::expm1((1.0L - c) * A.log_prod()));
  return static_cast<double>(std::exp(l / 2));
}

std::optional<double> try_delta_max(double c, LogScalar alpha, const DiagonalContraction& A) {
  try {
    return delta_max(c, alpha, A);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

long double value_at(Objective o, uint64_t M, LogScalar alpha, const DiagonalContraction& A, double c, double delta) {
  if (M == 0) return kNegInf;
  if (o == Objective::MaxDim) {
    if (!thm52_feasible(alpha, A, c, delta).feasible) return kNegInf;
    return dim_lower_bound(alpha, A, c, delta).value;
  }
  if (!pattern_feasible(M, alpha, A, c, delta).feasible) return kNegInf;
  auto pd = pattern_dim_bound(M, alpha, A, c, delta);
  return pd.bound ? *pd.bound : kNegInf;
}

CEval eval_c(const Family& f, double c, const SearchConfig& cfg, const std::vector<double>& tc) {
  CEval ev;
  ev.ae = family_alpha(f, c, tc);
  const LogScalar alpha = ev.ae.alpha;
  const auto& A = f.A;
  const double trep = ev.ae.t.empty() ? 0.0 : ev.ae.t.front();
  ev.best = Probe{c, 0, trep, 0, kNegInf};
  auto dmax = try_delta_max(c, alpha, A);
  if (!dmax) return ev;

  auto probe = [&](double delta, uint64_t fixedM) {
    if (!(delta > 0 && delta < 1)) return;
    Probe p{c, delta, trep, 0, kNegInf};
    if (cfg.objective == Objective::MaxM) {
      p.M = fixedM ? (pattern_feasible(fixedM, alpha, A, c, delta).feasible ? fixedM : 0)
                   : max_pattern_size(alpha, A, c, delta);
    } else {
      uint64_t M = cfg.objective == Objective::MaxDim ? 1 : cfg.target_M;
      p.M = pattern_feasible(M, alpha, A, c, delta).feasible ? M : 0;
    }
    p.value = value_at(cfg.objective, p.M, alpha, A, c, delta);
    ev.probes.push_back(p);
    if (p.M > 0) ev.feasible = true;
    if (better(p, ev.best, cfg.objective)) ev.best = p;
  };

  // geometric samples on (dmax*lo, dmax*hi]
  const int S = cfg.delta_samples;
  const double l0 = std::log(*dmax * cfg.delta_rel_lo), l1 = std::log(*dmax * cfg.delta_rel_hi);
  for (int i = 0; i < S; ++i) probe(std::exp(l0 + (l1 - l0) * (i + 1) / S), 0);

  // pattern size the window search should target
  uint64_t Mw = 1;
  if (cfg.objective == Objective::MaxPatternDim) Mw = cfg.target_M;
  if (cfg.objective == Objective::MaxM) {
    // largest M whose own delta_max satisfies condition 1
    auto g = [&](uint64_t M) {
      auto d = try_delta_max(c, scaled(alpha, M, c), A);
      return d && pattern_feasible(M, alpha, A, c, *d).feasible;
    };
    uint64_t lo = 0, hi = 2;
    if (g(1)) {
      lo = 1;
      while (hi < (uint64_t{1} << 62) && g(hi)) {
        lo = hi;
        hi *= 2;
      }
      while (hi - lo > 1) {
        uint64_t mid = lo + (hi - lo) / 2;
        (g(mid) ? lo : hi) = mid;
      }
    }
    Mw = std::max(lo, ev.best.M);
    if (Mw == 0) return ev;
  }

  auto dhi = try_delta_max(c, scaled(alpha, Mw, c), A);
  if (!dhi) return ev;
  double dlo = std::max(delta_lo1(alpha, A, c, Mw), *dhi * 1e-12);
  if (dlo > *dhi) return ev;
  std::vector<double> window;
  const int W = cfg.window_samples;
  for (int i = 0; i < W; ++i) {
    double d = W == 1 ? *dhi : std::exp(std::log(dlo) + (std::log(*dhi) - std::log(dlo)) * i / (W - 1));
    window.push_back(std::clamp(d, dlo, *dhi));
  }
  const uint64_t fixedM = cfg.objective == Objective::MaxM ? Mw : 0;
  size_t first = ev.probes.size();
  for (double d : window) probe(d, fixedM);
  // golden-section refinement in log delta around the best window sample
  size_t bi = first;
  for (size_t i = first; i < ev.probes.size(); ++i)
    if (better(ev.probes[i], ev.probes[bi], cfg.objective)) bi = i;
  if (bi < ev.probes.size() && ev.probes[bi].value > kNegInf) {
    size_t wi = bi - first;
    double a = std::log(window[wi > 0 ? wi - 1 : 0]), b = std::log(window[std::min(wi + 1, window.size() - 1)]);
    const double gr = (std::sqrt(5.0) - 1) / 2;
    auto val = [&](double x) {
      probe(std::exp(x), fixedM);
      return ev.probes.back().value;
    };
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    long double f1 = val(x1), f2 = val(x2);
    for (int it = 0; it < cfg.golden_iters && b - a > 1e-15; ++it) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = val(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = val(x2);
      }
    }
  }
  return ev;
}

std::vector<CEval> eval_grid(const Family& f, const std::vector<double>& cs, const SearchConfig& cfg,
                             const std::vector<double>& tc) {
  std::vector<CEval> out(cs.size());
  int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(cs.size())));
  if (threads == 1) {
    for (size_t i = 0; i < cs.size(); ++i) out[i] = eval_c(f, cs[i], cfg, tc);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < cs.size(); i += threads) out[i] = eval_c(f, cs[i], cfg, tc);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

void SearchConfig::validate() const {
  if (c_count < 2) throw std::invalid_argument("optimizer.c_count must be >= 2");
  if (!(c_lo > 0 && c_lo < c_hi && c_hi < 1)) throw std::invalid_argument("optimizer.c range must satisfy 0 < lo < hi < 1");
  if (c_passes < 0) throw std::invalid_argument("optimizer.c_passes must be >= 0");
  if (!(zoom > 1)) throw std::invalid_argument("optimizer.zoom must exceed 1");
  if (delta_samples < 2) throw std::invalid_argument("optimizer.delta_samples must be >= 2");
  if (!(delta_rel_lo > 0 && delta_rel_lo < delta_rel_hi && delta_rel_hi < 1))
    throw std::invalid_argument("optimizer.delta range must satisfy 0 < lo < hi < 1");
  if (window_samples < 2) throw std::invalid_argument("optimizer.window_samples must be >= 2");
  if (golden_iters < 0) throw std::invalid_argument("optimizer.golden_iters must be >= 0");
  if (t_count < 2) throw std::invalid_argument("optimizer.t_count must be >= 2");
  if (!(t_lo > 0 && t_lo < t_hi)) throw std::invalid_argument("optimizer.t range must satisfy 0 < lo < hi");
  for (double t : t_fixed)
    if (!(t > 0)) throw std::invalid_argument("optimizer.t_fixed entries must be positive");
  if (objective == Objective::MaxPatternDim && target_M < 1) throw std::invalid_argument("optimizer.target_M must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

Family Family::rco(uint64_t U, uint64_t V, uint64_t m, double t) {
  Family f;
  f.U = U;
  f.V = V;
  f.A = DiagonalContraction::from_reciprocals({U, V});
  f.add_rco(m, t);
  return f;
}

Family Family::rcd(uint64_t U, uint64_t V) {
  Family f;
  f.U = U;
  f.V = V;
  f.A = DiagonalContraction::from_reciprocals({U, V});
  f.add_rcd();
  return f;
}

Family Family::raw(const DiagonalContraction& A, LogScalar alpha) {
  Family f;
  f.A = A;
  f.add_raw(alpha);
  return f;
}

Family& Family::add_rco(uint64_t m, double t) {
  RcoSpec{U, V, m, t}.validate();
  Member mb;
  mb.kind = Member::Kind::Rco;
  mb.m = m;
  mb.t = t;
  members.push_back(mb);
  return *this;
}

Family& Family::add_rcd() {
  RcdSpec{U, V}.validate();
  Member mb;
  mb.kind = Member::Kind::Rcd;
  members.push_back(mb);
  return *this;
}

Family& Family::add_raw(LogScalar alpha) {
  if (alpha.is_zero()) throw std::invalid_argument("raw alpha must be positive");
  Member mb;
  mb.kind = Member::Kind::Raw;
  mb.raw = alpha;
  members.push_back(mb);
  return *this;
}

bool Family::has_rcd() const {
  return std::any_of(members.begin(), members.end(), [](const Member& m) { return m.kind == Member::Kind::Rcd; });
}

std::string Family::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  if (U) os << "U=" << U << " V=" << V << ":";
  for (size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    os << (i ? " + " : " ");
    switch (m.kind) {
      case Member::Kind::Rco: os << "rco(m=" << m.m << ",t=" << m.t << ")"; break;
      case Member::Kind::Rcd: os << "rcd"; break;
      case Member::Kind::Raw: os << "raw(log_alpha=" << format_ld(m.raw.log(), 21) << ")"; break;
    }
  }
  return os.str();
}

std::vector<double> t_candidates(const Family& f, const SearchConfig& cfg) {
  std::vector<double> ts;
  if (!f.has_rcd()) return ts;
  if (!cfg.t_fixed.empty()) {
    ts = cfg.t_fixed;
  } else {
    for (int i = 0; i < cfg.t_count; ++i) ts.push_back(cfg.t_lo + (cfg.t_hi - cfg.t_lo) * i / (cfg.t_count - 1));
    if (cfg.t_breakpoints) {
      // just below each t where one of the ceilings in N_t steps to k
      const long double lU = std::log(static_cast<long double>(f.U)), lV = std::log(static_cast<long double>(f.V));
      struct Arg {
        long double lbase, shift, ldiv;
      };
      const Arg args[] = {{lU, 0, std::log(f.U - 1.0L)}, {lV, 1, std::log(f.V - 1.0L)}, {lV, 0, std::log(f.V - 1.0L)},
                          {lU, 0, 0},                      {lU, 1, std::log(f.U - 1.0L)}, {lV, 0, 0}};
      for (const auto& a : args) {
        for (int k = 1; k <= 64; ++k) {
          long double t = (std::log(static_cast<long double>(k)) + a.ldiv) / a.lbase - a.shift - 1e-9L;
          if (t >= cfg.t_lo && t <= cfg.t_hi) ts.push_back(static_cast<double>(t));
        }
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

AlphaEval family_alpha(const Family& f, double c, const std::vector<double>& t_cands) {
  if (f.members.empty()) throw std::invalid_argument("family has no members");
  AlphaEval ev;
  std::optional<LogScalar> rcd_best;
  double t_best = 0;
  bool t_approx = false;
  if (f.has_rcd()) {
    if (t_cands.empty()) throw std::invalid_argument("corner member needs t candidates");
    RcdSpec spec{f.U, f.V};
    for (double t : t_cands) {
      bool approx = false;
      auto a = rcd_alpha(spec, c, t, &approx);
      if (!rcd_best || a < *rcd_best) {
        rcd_best = a;
        t_best = t;
        t_approx = approx;
      }
    }
  }
  std::vector<LogScalar> parts;
  for (const auto& m : f.members) {
    switch (m.kind) {
      case Member::Kind::Rco: parts.push_back(rco_alpha(RcoSpec{f.U, f.V, m.m, m.t}, c)); break;
      case Member::Kind::Rcd:
        parts.push_back(*rcd_best);
        ev.t.push_back(t_best);
        ev.approximate_ceiling = ev.approximate_ceiling || t_approx;
        break;
      case Member::Kind::Raw: parts.push_back(m.raw); break;
    }
  }
  ev.alpha = parts.size() == 1 ? parts.front() : combine_alphas(parts, c);
  return ev;
}

double delta_max(double c, LogScalar alpha, const DiagonalContraction& A) {
  (void)c;
  if (!A.theorem_eligible()) throw std::domain_error("theorem-ineligible");
  const size_t n = A.n();
  const long double R = condition2_rhs(n, 1.0);
  const long double Linf = std::pow(3.0L, -static_cast<long double>(n));
  auto ok = [&](double d) {
    if (!(d > 0 && d < 1)) return false;
    auto N = safe_floor_ratio(d, alpha);
    if (!N.feasible()) return false;
    return condition2_diff(A, N, d) > kCondition2Margin * condition2_lhs(A, N);
  };
  auto backoff = [&](double cand) -> double {
    if (ok(cand)) return cand;
    double good = 0;
    for (int k = 50; k >= 1; --k) {
      double d = cand * (1 - std::ldexp(1.0, -k));
      if (ok(d)) {
        good = d;
        break;
      }
    }
    if (good == 0) throw std::domain_error("empty feasible interval");
    double bad = cand;
    for (int it = 0; it < 80 && bad - good > good * 1e-15; ++it) {
      double mid = good + (bad - good) / 2;
      (ok(mid) ? good : bad) = mid;
    }
    return good;
  };

  // saturated regime: beta^N negligible at the largest admissible delta
  double sat = static_cast<double>(Linf * (1 - kCondition2Margin) / R);
  sat = std::nextafter(std::nextafter(sat, 0.0), 0.0);
  if (ok(sat)) return sat;

  // step lattice delta in alpha*Z: h(N) <=> some delta with floor(delta/alpha) = N works
  auto gN = [&](uint64_t N) {
    FloorResult f;
    f.tag = FloorResult::Tag::Exact;
    f.integer = N;
    f.log_value = std::log(static_cast<long double>(N));
    return condition2_lhs(A, f) * (1 - kCondition2Margin) / R;
  };
  auto h = [&](uint64_t N) {
    return std::exp(std::log(static_cast<long double>(N)) + alpha.log()) < gN(N);
  };
  long double ntop_l = std::floor(std::exp(std::log(Linf / R) - alpha.log())) + 1;
  uint64_t ntop = ntop_l >= 4.0e18L ? (uint64_t{1} << 62) : static_cast<uint64_t>(ntop_l);
  uint64_t first = 0;
  for (uint64_t N = 1; N <= std::min<uint64_t>(ntop, 1000000); ++N) {
    if (h(N)) {
      first = N;
      break;
    }
  }
  if (first == 0) throw std::domain_error("empty feasible interval");
  uint64_t lo = first, hi = ntop + 1;
  while (hi - lo > 1) {
    uint64_t mid = lo + (hi - lo) / 2;
    (h(mid) ? lo : hi) = mid;
  }
  long double step_hi = std::exp(std::log(static_cast<long double>(lo + 1)) + alpha.log());
  double cand = static_cast<double>(std::min(gN(lo), step_hi) * (1 - 1e-15L));
  if (!(cand < 1)) cand = std::nextafter(1.0, 0.0);
  return backoff(cand);
}

SearchResult optimize(const Family& f, const SearchConfig& cfg) {
  cfg.validate();
  if (!f.A.theorem_eligible()) throw std::domain_error("theorem-ineligible");
  const auto tc = t_candidates(f, cfg);
  SearchResult res;
  const double s_lo = s_from_c(cfg.c_lo), s_hi = s_from_c(cfg.c_hi);
  double a = s_lo, b = s_hi;
  std::optional<Probe> inc;
  for (int pass = 0; pass <= cfg.c_passes; ++pass) {
    std::vector<double> cs;
    for (int i = 0; i < cfg.c_count; ++i) cs.push_back(c_from_s(a + (b - a) * i / (cfg.c_count - 1)));
    if (inc) cs.push_back(inc->c);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    auto evs = eval_grid(f, cs, cfg, tc);
    for (auto& ev : evs) {
      res.trace.insert(res.trace.end(), ev.probes.begin(), ev.probes.end());
      if (ev.feasible && (!inc || better(ev.best, *inc, cfg.objective))) inc = ev.best;
    }
    if (!inc) break;
    double span = (b - a) / cfg.zoom;
    double sc = s_from_c(inc->c);
    a = std::max(s_lo, sc - span / 2);
    b = std::min(s_hi, sc + span / 2);
    if (b - a < 1e-12) break;
  }
  if (!inc || inc->M == 0) {
    res.found = false;
    res.best.family = f.describe();
    res.best.params.A = f.A;
    res.best.M = 0;
    res.best.reason = "no feasible point";
    return res;
  }
  auto ae = family_alpha(f, inc->c, tc);
  res.best = issue_certificate(ae.alpha, f.A, inc->c, inc->delta, inc->M, f.describe(), ae.t, ae.approximate_ceiling);
  std::string why;
  if (!res.best.certified || !recheck_certificate(res.best, &why))
    throw std::logic_error("optimizer result failed re-validation: " + res.best.reason + why);
  res.found = true;
  return res;
}

SearchResult optimize_pattern_count(const Family& f, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.objective = Objective::MaxM;
  return optimize(f, c);
}

SearchResult optimize_dimension(const Family& f, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.objective = Objective::MaxDim;
  return optimize(f, c);
}

SmallestU smallest_U_for_M(uint64_t M, uint64_t ell, const SearchConfig& cfg, uint64_t cap) {
  if (M < 1) throw std::invalid_argument("smallest_U_for_M: M must be >= 1");
  SearchConfig sc = cfg;
  sc.objective = Objective::MaxM;
  sc.t_fixed = {1.0};
  SmallestU out;
  auto pred = [&](uint64_t U, Certificate* cert) {
    ++out.probes;
    Family f = Family::rcd(U, U + ell);
    auto tc = t_candidates(f, sc);
    // the recipe point c = 9/10 first
    auto ae = family_alpha(f, 0.9, tc);
    auto d = delta_max(0.9, LogScalar::from_log(ae.alpha.log() + std::log(static_cast<long double>(M)) / 0.9), f.A);
    auto c9 = issue_certificate(ae.alpha, f.A, 0.9, d, M, f.describe(), ae.t, ae.approximate_ceiling);
    if (c9.certified) {
      if (cert) *cert = c9;
      return true;
    }
    auto r = optimize(f, sc);
    if (r.found && r.best.M >= M) {
      if (cert) *cert = issue_certificate(r.best.params.alpha, f.A, r.best.params.c, r.best.delta, M, f.describe(),
                                          r.best.t, r.best.approximate_ceiling);
      return cert ? cert->certified : true;
    }
    return false;
  };
  auto safe_pred = [&](uint64_t U, Certificate* cert) {
    try {
      return pred(U, cert);
    } catch (const std::domain_error&) {
      return false;
    }
  };
  uint64_t hi = 6;
  while (!safe_pred(hi, nullptr)) {
    if (hi > cap / 2) throw std::runtime_error("smallest_U_for_M: search cap " + std::to_string(cap) + " reached");
    hi *= 2;
  }
  uint64_t lo = hi / 2;  // not certified (or ineligible when hi = 6)
  while (hi - lo > 1) {
    uint64_t mid = lo + (hi - lo) / 2;
    (safe_pred(mid, nullptr) ? hi : lo) = mid;
  }
  out.U = hi;
  if (!pred(hi, &out.cert)) throw std::logic_error("smallest_U_for_M: returned U failed to re-certify");
  return out;
}

std::string trace_line(const Probe& p) {
  std::ostringstream os;
  os << "c=" << format_ld(p.c) << " delta=" << format_ld(p.delta) << " t=" << format_ld(p.t) << " M=" << p.M
     << " value=" << (p.value == kNegInf ? std::string("-inf") : format_ld(p.value));
  return os.str();
}

}  // namespace mpg
