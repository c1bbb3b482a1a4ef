#include "mpg/certifier.hpp"

#include <cfloat>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mpg {

namespace {

void require_eligible(const DiagonalContraction& A) {
  if (!A.theorem_eligible()) throw std::domain_error("theorem-ineligible");
}

void require_c(double c) {
  if (c == 0) throw std::domain_error("c = 0 is not certifiable");
  if (!(c > 0 && c < 1)) throw std::domain_error("c must lie in (0,1)");
}

void require_delta(double delta) {
  if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0,1)");
}

// log(beta_j^N)
long double log_beta_pow(long double log_beta, const FloorResult& N) {
  if (N.integer && N.tag == FloorResult::Tag::Exact) {
    long double lv = static_cast<long double>(*N.integer) * log_beta;
    if (lv < std::log(static_cast<long double>(DBL_MIN))) return -std::numeric_limits<long double>::infinity();
    return lv;
  }
  return log_pow_beta(log_beta, N.log_value);
}

// log(1 - P^(1-c))
long double log_one_minus_pow(const DiagonalContraction& A, double c) {
  return std::log(-std::expm1((1.0L - c) * A.log_prod()));
}

LogScalar scaled_alpha(LogScalar alpha, uint64_t M, double c) {
  return LogScalar::from_log(alpha.log() + std::log(static_cast<long double>(M)) / c);
}

}  // namespace

long double condition2_lhs(const DiagonalContraction& A, const FloorResult& N) {
  if (!N.feasible()) throw std::domain_error("condition 2 needs N >= 1");
  long double p = 1;
  for (long double lb : A.log_betas()) {
    long double lv = log_beta_pow(lb, N);
    long double b = std::isinf(lv) ? 0.0L : std::exp(lv);
    p *= 1 - 5 * b;
  }
  return p * std::pow(3.0L, -static_cast<long double>(A.n()));
}

long double condition2_rhs(size_t n, double delta) {
  long double nn = static_cast<long double>(n);
  return std::pow(8.0L, nn) * (1 + std::pow(2.0L, 2 * nn + 1)) * static_cast<long double>(delta);
}

long double condition2_diff(const DiagonalContraction& A, const FloorResult& N, double delta) {
  return condition2_lhs(A, N) - condition2_rhs(A.n(), delta);
}

double default_delta(const DiagonalContraction& A) {
  require_eligible(A);
  long double n = static_cast<long double>(A.n());
  long double v = 1 / (2 * std::pow(8.0L, n) * (1 + std::pow(2.0L, 2 * n + 1)));
  v *= std::pow(3.0L, -n);
  for (long double b : A.betas()) v *= 1 - 5 * b;
  return static_cast<double>(v);
}

FeasibilityReport pattern_feasible(uint64_t M, LogScalar alpha, const DiagonalContraction& A, double c, double delta) {
  if (M < 1) throw std::invalid_argument("pattern_feasible: M must be >= 1");
  require_c(c);
  require_delta(delta);
  require_eligible(A);
  if (alpha.is_zero()) throw std::domain_error("alpha must be positive");
  FeasibilityReport r;
  r.M = M;
  r.condition1.lhs = LogScalar::from_log(std::log(static_cast<long double>(M)) + c * alpha.log());
  r.condition1.rhs = LogScalar::from_log(2 * std::log(static_cast<long double>(delta)) + log_one_minus_pow(A, c));
  r.condition1.holds = r.condition1.lhs <= r.condition1.rhs;
  r.N = safe_floor_ratio(delta, scaled_alpha(alpha, M, c));
  if (!r.N.feasible()) {
    r.condition2.rhs = condition2_rhs(A.n(), delta);
    r.reason = "δ/α < 1";
    return r;
  }
  auto& c2 = r.condition2;
  c2.lhs = condition2_lhs(A, r.N);
  c2.rhs = condition2_rhs(A.n(), delta);
  c2.diff = condition2_diff(A, r.N, delta);
  c2.raw = c2.diff > 0;
  c2.holds = c2.diff > kCondition2Margin * c2.lhs;
  c2.margin = c2.diff / c2.lhs;
  r.feasible = r.condition1.holds && c2.holds;
  if (!r.condition1.holds)
    r.reason = "condition 1 fails";
  else if (!c2.holds)
    r.reason = c2.raw ? "condition 2 margin too small" : "condition 2 fails";
  return r;
}

FeasibilityReport thm52_feasible(LogScalar alpha, const DiagonalContraction& A, double c, double delta) {
  return pattern_feasible(1, alpha, A, c, delta);
}

long double k1_constant(const DiagonalContraction& A, double delta, const FloorResult& N) {
  long double d = condition2_diff(A, N, delta);
  if (!(d > 0)) throw std::domain_error("condition 2 violated");
  return 2 / static_cast<long double>(delta) * std::fabs(std::log(d));
}

DimBound dim_lower_bound(LogScalar alpha, const DiagonalContraction& A, double c, double delta) {
  auto rep = thm52_feasible(alpha, A, c, delta);
  if (!rep.feasible) throw std::domain_error("dim_lower_bound: infeasible (" + rep.reason + ")");
  DimBound d;
  d.K = k1_constant(A, delta, rep.N);
  long double n = static_cast<long double>(A.n());
  long double term = std::exp(std::log(d.K) + alpha.log() - std::log(-A.log_beta_max()));
  d.positive = term < n;
  d.value = std::max(n - term, 0.0L);
  return d;
}

PatternDim pattern_dim_bound(uint64_t M, LogScalar alpha, const DiagonalContraction& A, double c, double delta) {
  auto rep = pattern_feasible(M, alpha, A, c, delta);
  if (!rep.feasible) throw std::domain_error("pattern_dim_bound: infeasible (" + rep.reason + ")");
  PatternDim p;
  p.N = rep.N;
  p.KM = k1_constant(A, delta, rep.N);
  const long double n = static_cast<long double>(A.n());
  const long double lbm = std::log(-A.log_beta_max());
  long double lhs = std::log(static_cast<long double>(M)) + c * alpha.log();
  long double cap = std::min(2 * std::log(static_cast<long double>(delta)), std::log(n) + lbm - std::log(p.KM));
  p.moreover = lhs <= cap + log_one_minus_pow(A, c);
  if (p.moreover) {
    long double term = std::exp(std::log(p.KM) + alpha.log() - lbm);
    long double sterm = std::exp(std::log(p.KM) + scaled_alpha(alpha, M, c).log() - lbm);
    p.bound = std::max(n - term, 0.0L);
    p.scaled_bound = std::max(n - sterm, 0.0L);
  }
  return p;
}

uint64_t max_pattern_size(LogScalar alpha, const DiagonalContraction& A, double c, double delta) {
  if (!thm52_feasible(alpha, A, c, delta).feasible) return 0;
  auto base = thm52_feasible(alpha, A, c, delta);
  // condition 1 alone caps M
  long double lcap = base.condition1.rhs.log() - c * alpha.log();
  uint64_t hi = lcap >= std::log(4.0e18L) ? (uint64_t{1} << 62) : static_cast<uint64_t>(std::floor(std::exp(lcap))) + 1;
  uint64_t lo = 1;
  if (hi <= lo) return lo;
  if (pattern_feasible(hi, alpha, A, c, delta).feasible) return hi;
  while (hi - lo > 1) {
    uint64_t mid = lo + (hi - lo) / 2;
    if (pattern_feasible(mid, alpha, A, c, delta).feasible)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

ClaimB claimB_bound(const DiagonalContraction& A, const FloorResult& N, double delta) {
  if (!N.feasible()) throw std::invalid_argument("claimB_bound: N must be >= 1");
  ClaimB b;
  b.diff = condition2_diff(A, N, delta);
  b.positive = b.diff > 0;
  long double lnp = N.integer && N.tag == FloorResult::Tag::Exact
                        ? static_cast<long double>(*N.integer) * A.log_prod()
                        : -std::exp(N.log_value + std::log(-A.log_prod()));
  if (b.diff != 0) b.magnitude = LogScalar::from_log(std::log(std::fabs(b.diff)) - lnp);
  if (b.positive && b.magnitude.log() < std::log(9.0e18L)) {
    b.K = static_cast<uint64_t>(std::ceil(b.magnitude.value()));
  }
  return b;
}

ClaimB claimB_bound(const DiagonalContraction& A, uint64_t N, double delta) {
  FloorResult f;
  f.tag = FloorResult::Tag::Exact;
  f.integer = N;
  f.log_value = std::log(static_cast<long double>(N));
  return claimB_bound(A, f, delta);
}

Certificate issue_certificate(LogScalar alpha, const DiagonalContraction& A, double c, double delta, uint64_t M,
                              const std::string& family, const std::vector<double>& t, bool approximate_ceiling) {
  Certificate cert;
  cert.family = family;
  cert.params.alpha = alpha;
  cert.params.A = A;
  cert.params.c = c;
  cert.delta = delta;
  cert.t = t;
  cert.M = M;
  cert.approximate_ceiling = approximate_ceiling;
  cert.theorem_eligible = A.theorem_eligible();
  if (!cert.theorem_eligible) {
    cert.reason = "theorem-ineligible";
    return cert;
  }
  if (c == 0) {
    cert.reason = "c = 0 is not certifiable";
    return cert;
  }
  try {
    auto rep = pattern_feasible(M, alpha, A, c, delta);
    cert.N = rep.N;
    cert.margin1_log = rep.condition1.rhs.log() - rep.condition1.lhs.log();
    cert.margin2 = rep.condition2.margin;
    if (!rep.feasible) {
      cert.reason = rep.reason;
      return cert;
    }
    auto base = thm52_feasible(alpha, A, c, delta);
    auto dim = dim_lower_bound(alpha, A, c, delta);
    cert.K1 = dim.K;
    cert.dim_bound = dim.value;
    auto pd = pattern_dim_bound(M, alpha, A, c, delta);
    cert.KM = pd.KM;
    cert.pattern_dim_bound = pd.bound;
    cert.pattern_dim_scaled = pd.scaled_bound;
    cert.approximate_floor = rep.N.approximate() || base.N.approximate();
    cert.certified = true;
  } catch (const std::exception& e) {
    cert.reason = e.what();
  }
  return cert;
}

Certificate intersect_certificate(const std::vector<LogScalar>& alphas, const DiagonalContraction& A, double c,
                                  double delta) {
  auto alpha = combine_alphas(alphas, c);
  auto cert = issue_certificate(alpha, A, c, delta, 1, "intersection of " + std::to_string(alphas.size()) + " sets");
  return cert;
}

DistanceStatement distance_set_certificate(LogScalar alpha, const DiagonalContraction& A, double c, double delta,
                                           const std::vector<double>& etas, double lambda, double rho2) {
  if (etas.size() != A.n()) throw std::invalid_argument("distance_set_certificate: eta dimension mismatch");
  for (double e : etas)
    if (!(e >= 0 && e <= 1)) throw std::invalid_argument("distance_set_certificate: eta must lie in [0,1]");
  if (!(lambda > 0 && lambda < (1 - A.beta_max()) * rho2))
    throw std::invalid_argument("distance_set_certificate: lambda outside (0, (1-beta_max) rho2)");
  DistanceStatement st;
  uint64_t M = max_pattern_size(alpha, A, c, delta);
  if (M < 2) {
    st.text = "not certified";
    return st;
  }
  std::ostringstream os;
  os << std::setprecision(17) << "S contains x, y with |x_j - y_j| = eta_j * lambda, eta = (";
  for (size_t j = 0; j < etas.size(); ++j) os << (j ? ", " : "") << etas[j];
  os << "), lambda = " << lambda << " (certified pattern size " << M << ")";
  st.certified = true;
  st.text = os.str();
  return st;
}

namespace {

std::string fmt(long double x, int digits) { return format_ld(x, digits); }

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string serialize_certificate(const Certificate& c) {
  std::ostringstream os;
  const auto& A = c.params.A;
  os << "# mpgame certificate\n";
  os << "family = " << c.family << "\n";
  os << "certified = " << bool_str(c.certified) << "\n";
  os << "reason = " << c.reason << "\n";
  os << "n = " << A.n() << "\n";
  if (A.has_reciprocals()) {
    os << "A.reciprocals = ";
    for (size_t j = 0; j < A.n(); ++j) os << (j ? "," : "") << A.reciprocals()[j];
  } else {
    os << "A.betas = ";
    for (size_t j = 0; j < A.n(); ++j) os << (j ? "," : "") << fmt(A.betas()[j], 21);
  }
  os << "\n";
  os << "alpha.log = " << fmt(c.params.alpha.log(), 21) << "\n";
  os << "alpha = " << fmt(c.params.alpha.value(), 17) << "\n";
  os << "c = " << fmt(c.params.c, 17) << "\n";
  os << "rho2 = " << fmt(c.params.rho2, 17) << "\n";
  os << "rho1 = " << fmt(c.params.rho1, 17) << "\n";
  os << "delta = " << fmt(c.delta, 17) << "\n";
  os << "t = ";
  for (size_t i = 0; i < c.t.size(); ++i) os << (i ? "," : "") << fmt(c.t[i], 17);
  os << "\n";
  os << "M = " << c.M << "\n";
  if (c.N.integer)
    os << "N = " << *c.N.integer << "\n";
  else
    os << "N = none\n";
  os << "N.log = " << fmt(c.N.log_value, 21) << "\n";
  os << "N.tag = " << c.N.tag_name() << "\n";
  os << "K1 = " << fmt(c.K1, 17) << "\n";
  os << "KM = " << fmt(c.KM, 17) << "\n";
  os << "dim_bound = " << fmt(c.dim_bound, 17) << "\n";
  os << "pattern_dim_bound = " << (c.pattern_dim_bound ? fmt(*c.pattern_dim_bound, 17) : "none") << "\n";
  os << "pattern_dim_scaled = " << (c.pattern_dim_scaled ? fmt(*c.pattern_dim_scaled, 17) : "none") << "\n";
  os << "flags.theorem_eligible = " << bool_str(c.theorem_eligible) << "\n";
  os << "flags.approximate_ceiling = " << bool_str(c.approximate_ceiling) << "\n";
  os << "flags.approximate_floor = " << bool_str(c.approximate_floor) << "\n";
  os << "margin.condition1_log = " << fmt(c.margin1_log, 17) << "\n";
  os << "margin.condition2 = " << fmt(c.margin2, 17) << "\n";
  return os.str();
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
    if (out.count(key)) throw std::invalid_argument("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

namespace {

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("certificate: missing field '" + key + "'");
  return it->second;
}

long double to_ld(const std::string& s, const std::string& key) {
  char* end = nullptr;
  long double v = std::strtold(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw std::invalid_argument("certificate: bad number in '" + key + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Certificate parse_certificate(const std::string& text) {
  auto kv = parse_kv(text);
  Certificate c;
  c.family = need(kv, "family");
  c.certified = need(kv, "certified") == "true";
  c.reason = need(kv, "reason");
  if (kv.count("A.reciprocals")) {
    std::vector<uint64_t> r;
    for (const auto& s : split_commas(kv.at("A.reciprocals"))) r.push_back(std::stoull(s));
    c.params.A = DiagonalContraction::from_reciprocals(r);
  } else {
    std::vector<long double> b;
    for (const auto& s : split_commas(need(kv, "A.betas"))) b.push_back(to_ld(s, "A.betas"));
    c.params.A = DiagonalContraction(b);
  }
  c.params.alpha = LogScalar::from_log(to_ld(need(kv, "alpha.log"), "alpha.log"));
  c.params.c = static_cast<double>(to_ld(need(kv, "c"), "c"));
  c.params.rho2 = static_cast<double>(to_ld(need(kv, "rho2"), "rho2"));
  c.params.rho1 = static_cast<double>(to_ld(need(kv, "rho1"), "rho1"));
  c.delta = static_cast<double>(to_ld(need(kv, "delta"), "delta"));
  for (const auto& s : split_commas(need(kv, "t"))) c.t.push_back(static_cast<double>(to_ld(s, "t")));
  c.M = std::stoull(need(kv, "M"));
  const auto& ns = need(kv, "N");
  if (ns != "none") c.N.integer = std::stoull(ns);
  c.N.log_value = to_ld(need(kv, "N.log"), "N.log");
  const auto& tag = need(kv, "N.tag");
  c.N.tag = tag == "exact" ? FloorResult::Tag::Exact
                           : (tag == "approximate" ? FloorResult::Tag::Approximate : FloorResult::Tag::Infeasible);
  c.K1 = to_ld(need(kv, "K1"), "K1");
  c.KM = to_ld(need(kv, "KM"), "KM");
  c.dim_bound = to_ld(need(kv, "dim_bound"), "dim_bound");
  const auto& pdb = need(kv, "pattern_dim_bound");
  if (pdb != "none") c.pattern_dim_bound = to_ld(pdb, "pattern_dim_bound");
  const auto& pds = need(kv, "pattern_dim_scaled");
  if (pds != "none") c.pattern_dim_scaled = to_ld(pds, "pattern_dim_scaled");
  c.theorem_eligible = need(kv, "flags.theorem_eligible") == "true";
  c.approximate_ceiling = need(kv, "flags.approximate_ceiling") == "true";
  c.approximate_floor = need(kv, "flags.approximate_floor") == "true";
  c.margin1_log = to_ld(need(kv, "margin.condition1_log"), "margin.condition1_log");
  c.margin2 = to_ld(need(kv, "margin.condition2"), "margin.condition2");
  return c;
}

bool recheck_certificate(const Certificate& cert, std::string* why) {
  auto fresh = issue_certificate(cert.params.alpha, cert.params.A, cert.params.c, cert.delta, cert.M, cert.family,
                                 cert.t, cert.approximate_ceiling);
  fresh.params.rho1 = cert.params.rho1;
  fresh.params.rho2 = cert.params.rho2;
  if (serialize_certificate(fresh) != serialize_certificate(cert)) {
    if (why) *why = fresh.certified || cert.certified == fresh.certified ? "recomputed fields differ"
                                                                          : "not certified: " + fresh.reason;
    return false;
  }
  return true;
}

}  // namespace mpg
