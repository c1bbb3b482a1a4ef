#include "mpg/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mpg/certifier.hpp"

namespace mpg {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(d)) throw ConfigError(key, "expected a number, got '" + v + "'");
  return d;
}

// decimal integer or b^e
uint64_t to_count(const std::string& key, const std::string& v) {
  auto parse_u = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError(key, "expected a nonnegative integer, got '" + v + "'");
    try {
      return static_cast<uint64_t>(std::stoull(s));
    } catch (const std::exception&) {
      throw ConfigError(key, "integer out of range: '" + v + "'");
    }
  };
  size_t caret = v.find('^');
  if (caret == std::string::npos) return parse_u(v);
  uint64_t b = parse_u(trim(v.substr(0, caret))), e = parse_u(trim(v.substr(caret + 1)));
  unsigned __int128 r = 1;
  for (uint64_t i = 0; i < e; ++i) {
    r *= b;
    if (r > UINT64_MAX) throw ConfigError(key, "power out of range: '" + v + "'");
  }
  return static_cast<uint64_t>(r);
}

Objective to_objective(const std::string& key, const std::string& v) {
  if (v == "max_m") return Objective::MaxM;
  if (v == "max_dim") return Objective::MaxDim;
  if (v == "max_pattern_dim") return Objective::MaxPatternDim;
  throw ConfigError(key, "expected max_m, max_dim or max_pattern_dim");
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  try {
    c.kv_ = parse_kv(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config", e.what());
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& key) const {
  read_.insert(key);
  return kv_.count(key) > 0;
}

const std::string& Config::raw(const std::string& key) const {
  read_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError(key, "missing required field");
  return it->second;
}

std::string Config::str(const std::string& key) const { return raw(key); }
std::string Config::str(const std::string& key, const std::string& dflt) const { return has(key) ? raw(key) : dflt; }

double Config::real(const std::string& key) const { return to_double(key, raw(key)); }
double Config::real(const std::string& key, double dflt) const { return has(key) ? real(key) : dflt; }

int64_t Config::integer(const std::string& key) const {
  const std::string& v = raw(key);
  size_t pos = 0;
  int64_t r;
  try {
    r = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return r;
}
int64_t Config::integer(const std::string& key, int64_t dflt) const { return has(key) ? integer(key) : dflt; }

uint64_t Config::count(const std::string& key) const { return to_count(key, raw(key)); }
uint64_t Config::count(const std::string& key, uint64_t dflt) const { return has(key) ? count(key) : dflt; }

bool Config::boolean(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  const std::string& v = raw(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key, "expected true or false");
}

Rational Config::rational(const std::string& key) const {
  try {
    return Rational::parse(raw(key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}
Rational Config::rational(const std::string& key, const Rational& dflt) const { return has(key) ? rational(key) : dflt; }

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split(raw(key), ',')) out.push_back(to_double(key, s));
  return out;
}

std::vector<std::vector<Rational>> Config::points(const std::string& key) const {
  std::vector<std::vector<Rational>> out;
  for (const auto& p : split(raw(key), ';')) {
    std::vector<Rational> pt;
    for (const auto& s : split(p, ',')) {
      try {
        pt.push_back(Rational::parse(s));
      } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
      }
    }
    out.push_back(std::move(pt));
  }
  if (out.empty()) throw ConfigError(key, "expected at least one point");
  return out;
}

std::vector<std::string> Config::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv_)
    if (!read_.count(k)) out.push_back(k);
  return out;
}

RcoSpec rco_from_config(const Config& cfg) {
  RcoSpec s;
  s.U = cfg.count("family.U");
  s.V = cfg.count("family.V");
  s.m = cfg.count("family.m", 1);
  s.t = cfg.real("family.t", 1);
  std::string pl = cfg.str("family.placement", "grid");
  if (pl == "grid") s.placement = Placement::Grid;
  else if (pl == "hashed") s.placement = Placement::Hashed;
  else throw ConfigError("family.placement", "expected grid or hashed");
  s.seed = cfg.count("family.seed", 0);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("family", e.what());
  }
  return s;
}

RcdSpec rcd_from_config(const Config& cfg) {
  RcdSpec s;
  s.U = cfg.count("family.U");
  s.V = cfg.count("family.V");
  s.seed = cfg.count("family.seed", 0);
  s.fixed_corner = static_cast<int>(cfg.integer("family.corner", -1));
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("family", e.what());
  }
  return s;
}

Family family_from_config(const Config& cfg) {
  const std::string kind = cfg.str("family.kind");
  try {
    if (kind == "rco") {
      auto s = rco_from_config(cfg);
      return Family::rco(s.U, s.V, s.m, s.t);
    }
    if (kind == "rcd") {
      auto s = rcd_from_config(cfg);
      return Family::rcd(s.U, s.V);
    }
    if (kind == "raw") {
      DiagonalContraction A;
      if (cfg.has("family.betas")) {
        std::vector<long double> b;
        for (double v : cfg.reals("family.betas")) b.push_back(v);
        A = DiagonalContraction(b);
      } else {
        A = DiagonalContraction::from_reciprocals({cfg.count("family.U"), cfg.count("family.V")});
      }
      LogScalar alpha = cfg.has("family.log_alpha") ? LogScalar::from_log(cfg.real("family.log_alpha"))
                                                    : LogScalar::from_value(cfg.real("family.alpha"));
      return Family::raw(A, alpha);
    }
    if (kind == "intersection") {
      Family f;
      f.U = cfg.count("family.U");
      f.V = cfg.count("family.V");
      f.A = DiagonalContraction::from_reciprocals({f.U, f.V});
      // "rcd; rco m=1 t=2; raw log_alpha=-30"
      for (const auto& item : split(cfg.str("family.members"), ';')) {
        auto words = split(item, ' ');
        std::map<std::string, std::string> opt;
        for (size_t i = 1; i < words.size(); ++i) {
          size_t eq = words[i].find('=');
          if (eq == std::string::npos) throw ConfigError("family.members", "expected key=value in '" + item + "'");
          opt[words[i].substr(0, eq)] = words[i].substr(eq + 1);
        }
        if (words[0] == "rcd") {
          f.add_rcd();
        } else if (words[0] == "rco") {
          f.add_rco(opt.count("m") ? to_count("family.members", opt["m"]) : 1,
                    opt.count("t") ? to_double("family.members", opt["t"]) : 1);
        } else if (words[0] == "raw") {
          if (!opt.count("log_alpha")) throw ConfigError("family.members", "raw member needs log_alpha");
          f.add_raw(LogScalar::from_log(to_double("family.members", opt["log_alpha"])));
        } else {
          throw ConfigError("family.members", "unknown member '" + words[0] + "'");
        }
      }
      if (f.members.empty()) throw ConfigError("family.members", "no members");
      return f;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("family", e.what());
  }
  throw ConfigError("family.kind", "expected rco, rcd, raw or intersection");
}

SearchConfig search_from_config(const Config& cfg) {
  SearchConfig s;
  s.c_count = static_cast<int>(cfg.integer("optimizer.c_count", s.c_count));
  s.c_lo = cfg.real("optimizer.c_lo", s.c_lo);
  s.c_hi = cfg.real("optimizer.c_hi", s.c_hi);
  s.c_passes = static_cast<int>(cfg.integer("optimizer.c_passes", s.c_passes));
  s.zoom = cfg.real("optimizer.zoom", s.zoom);
  s.delta_samples = static_cast<int>(cfg.integer("optimizer.delta_samples", s.delta_samples));
  s.delta_rel_lo = cfg.real("optimizer.delta_rel_lo", s.delta_rel_lo);
  s.delta_rel_hi = cfg.real("optimizer.delta_rel_hi", s.delta_rel_hi);
  s.window_samples = static_cast<int>(cfg.integer("optimizer.window_samples", s.window_samples));
  s.golden_iters = static_cast<int>(cfg.integer("optimizer.golden_iters", s.golden_iters));
  s.t_count = static_cast<int>(cfg.integer("optimizer.t_count", s.t_count));
  s.t_lo = cfg.real("optimizer.t_lo", s.t_lo);
  s.t_hi = cfg.real("optimizer.t_hi", s.t_hi);
  s.t_breakpoints = cfg.boolean("optimizer.t_breakpoints", s.t_breakpoints);
  if (cfg.has("optimizer.t_fixed")) s.t_fixed = cfg.reals("optimizer.t_fixed");
  if (cfg.has("optimizer.objective")) s.objective = to_objective("optimizer.objective", cfg.str("optimizer.objective"));
  s.target_M = cfg.count("optimizer.target_M", s.target_M);
  s.threads = static_cast<int>(cfg.integer("optimizer.threads", s.threads));
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("optimizer", e.what());
  }
  return s;
}

}  // namespace mpg
