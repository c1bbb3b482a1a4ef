#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mpg/certifier.hpp"
#include "mpg/config.hpp"
#include "mpg/families.hpp"
#include "mpg/gamesim.hpp"
#include "mpg/optimizer.hpp"
#include "mpg/pattern_oracle.hpp"

namespace fs = std::filesystem;
using namespace mpg;

namespace {

constexpr int kOk = 0, kError = 1, kNotCertified = 2;

struct Outcome {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
  int code = kOk;
};

struct Options {
  std::string command;
  int threads = 1;
  bool trace = false;
};

std::vector<int64_t> ints(const Config& cfg, const std::string& key) {
  std::vector<int64_t> out;
  for (double v : cfg.reals(key)) {
    if (v != static_cast<double>(static_cast<int64_t>(v))) throw ConfigError(key, "expected integers");
    out.push_back(static_cast<int64_t>(v));
  }
  return out;
}

std::string cert_summary(const Certificate& c) {
  std::ostringstream os;
  if (c.certified) {
    os << "certified M=" << c.M << " c=" << format_ld(c.params.c) << " delta=" << format_ld(c.delta)
       << " dim_bound=" << format_ld(c.dim_bound);
    if (c.pattern_dim_bound) os << " pattern_dim_bound=" << format_ld(*c.pattern_dim_bound);
  } else {
    os << "not certified: " << c.reason;
  }
  return os.str();
}

std::string family_kind(const Config& cfg) {
  std::string k = cfg.str("family.kind");
  if (k != "rco" && k != "rcd") throw ConfigError("family.kind", "this command needs rco or rcd");
  return k;
}

RectangleSet rectangles(const Config& cfg, int depth) {
  if (family_kind(cfg) == "rco") return generate_rco(rco_from_config(cfg), depth);
  return generate_rcd(rcd_from_config(cfg), depth);
}

Outcome run_certify(const Config& cfg) {
  Outcome out;
  if (cfg.has("certify.file")) {
    std::ifstream in(cfg.str("certify.file"));
    if (!in) throw ConfigError("certify.file", "cannot open '" + cfg.str("certify.file") + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Certificate cert;
    try {
      cert = parse_certificate(ss.str());
    } catch (const std::exception& e) {
      throw ConfigError("certify.file", e.what());
    }
    std::string why;
    if (!recheck_certificate(cert, &why)) {
      out.summary = "re-validation failed: " + why;
      out.code = kError;
      return out;
    }
    out.summary = "re-validated; " + cert_summary(cert);
    out.code = cert.certified ? kOk : kNotCertified;
    return out;
  }
  Family f = family_from_config(cfg);
  const double c = cfg.real("params.c", 0.5);
  // an ineligible A is refused before delta is used
  const double delta = cfg.has("params.delta") ? cfg.real("params.delta") : f.A.theorem_eligible() ? default_delta(f.A) : 0;
  const uint64_t M = cfg.count("params.M", 1);
  std::vector<double> tc;
  if (f.has_rcd()) tc = {cfg.real("params.t", 1)};
  Certificate cert;
  try {
    auto ae = family_alpha(f, c, tc);
    cert = issue_certificate(ae.alpha, f.A, c, delta, M, f.describe(), ae.t, ae.approximate_ceiling);
  } catch (const std::domain_error& e) {
    out.summary = std::string("not certified: ") + e.what();
    out.code = kNotCertified;
    return out;
  }
  out.files.push_back({"certificate.txt", serialize_certificate(cert)});
  out.summary = cert_summary(cert);
  out.code = cert.certified ? kOk : kNotCertified;
  return out;
}

Outcome run_maximize(const Config& cfg, const Options& opt, bool intersect) {
  Outcome out;
  Family f = family_from_config(cfg);
  if (intersect && f.members.size() < 2) throw ConfigError("family.members", "intersect needs at least two members");
  SearchConfig sc = search_from_config(cfg);
  if (intersect && !cfg.has("optimizer.objective")) sc.objective = Objective::MaxDim;
  sc.threads = opt.threads;
  if (!f.A.theorem_eligible()) {
    out.summary = "not certified: theorem-ineligible";
    out.code = kNotCertified;
    return out;
  }
  SearchResult res;
  try {
    res = optimize(f, sc);
  } catch (const std::domain_error& e) {
    out.summary = std::string("not certified: ") + e.what();
    out.code = kNotCertified;
    return out;
  }
  out.files.push_back({"certificate.txt", serialize_certificate(res.best)});
  if (opt.trace) {
    std::string tr;
    for (const auto& p : res.trace) tr += trace_line(p) + "\n";
    out.files.push_back({"trace.txt", tr});
  }
  out.summary = cert_summary(res.best);
  out.code = res.found && res.best.certified ? kOk : kNotCertified;
  return out;
}

Outcome run_generate(const Config& cfg) {
  Outcome out;
  const int depth = static_cast<int>(cfg.integer("generate.depth", 2));
  if (depth < 0 || depth > 8) throw ConfigError("generate.depth", "expected 0..8");
  auto rs = rectangles(cfg, depth);
  const std::string fmt = cfg.str("generate.format", "csv");
  std::ostringstream os;
  if (fmt == "csv") {
    write_csv(os, rs);
    out.files.push_back({"rectangles.csv", os.str()});
  } else if (fmt == "pbm") {
    const int level = static_cast<int>(cfg.integer("generate.level", depth));
    const int w = static_cast<int>(cfg.integer("generate.width", 256)), h = static_cast<int>(cfg.integer("generate.height", 256));
    if (level < 0 || level > depth) throw ConfigError("generate.level", "expected 0..depth");
    if (w < 1 || h < 1) throw ConfigError("generate.width", "raster size must be positive");
    write_pbm(os, rs, level, w, h);
    out.files.push_back({"rectangles.pbm", os.str()});
  } else {
    throw ConfigError("generate.format", "expected csv or pbm");
  }
  size_t boxes = 0;
  for (int k = 1; k <= depth; ++k) boxes += rs.levels[static_cast<size_t>(k)].size();
  out.summary = "generated " + std::to_string(boxes) + " boxes to depth " + std::to_string(depth);
  return out;
}

Outcome run_simulate(const Config& cfg) {
  Outcome out;
  const int depth = static_cast<int>(cfg.integer("simulate.depth", 3));
  if (depth < 1 || depth > 6) throw ConfigError("simulate.depth", "expected 1..6");
  const double c = cfg.real("simulate.c", 0.5);
  if (!(c > 0 && c < 1)) throw ConfigError("simulate.c", "expected 0 < c < 1");
  SdicStrategy s;
  RectangleSet rs;
  try {
    if (family_kind(cfg) == "rco") {
      auto spec = rco_from_config(cfg);
      s = sdic_for_rco(spec, c, depth);
      rs = generate_rco(spec, depth);
    } else {
      auto spec = rcd_from_config(cfg);
      s = sdic_for_rcd(spec, cfg.real("simulate.t", 1), c, depth + 1);
      rs = generate_rcd(spec, depth);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("family", e.what());
  }
  const std::string policy = cfg.str("simulate.policy", "steer");
  PlayerI pI;
  if (policy == "steer") {
    auto pts = cfg.points("simulate.target");
    if (pts.size() != 1 || pts[0].size() != 2) throw ConfigError("simulate.target", "expected one planar point");
    pI = PlayerI::steer(pts[0]);
  } else if (policy == "fixed") {
    pI = PlayerI::fixed(cfg.points("simulate.centers"));
  } else {
    throw ConfigError("simulate.policy", "expected steer or fixed");
  }
  PlayOptions po;
  po.skip_always = cfg.boolean("simulate.skip_always", false);
  po.kept = &rs;
  PlayTranscript tr;
  try {
    tr = play_game(pI, s, depth, po);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("simulate", e.what());
  }
  auto audit = audit_budget(tr);
  if (!cfg.has("simulate.delta") && !s.A.theorem_eligible())
    throw ConfigError("simulate.delta", "required when A has an entry >= 1/5");
  const double delta = cfg.has("simulate.delta") ? cfg.real("simulate.delta") : default_delta(s.A);
  auto led = potential_ledger(tr, delta);
  std::ostringstream pot;
  for (const auto& e : led.entries)
    pot << "l=" << e.level << " log_phi=" << format_ld(e.phi.log(), 21) << " in_d_prime=" << e.in_d_prime << '\n';
  pot << "monotone=" << led.monotone() << '\n';
  out.files.push_back({"transcript.txt", tr.serialize()});
  out.files.push_back({"potential.txt", pot.str()});
  out.summary = std::string("budget audit ") + (audit.pass ? "passed" : "FAILED " + audit.witness) +
                "; outcome inside_deleted=" + std::to_string(tr.outcome_inside_deleted) +
                " meets_kept=" + std::to_string(tr.outcome_meets_kept);
  out.code = audit.pass ? kOk : kError;
  return out;
}

Outcome run_verify(const Config& cfg, const Options& opt) {
  Outcome out;
  const std::string check = cfg.str("verify.check");
  std::ostringstream rep;
  bool pass = false;
  auto report = [&](const VerifyReport& r) {
    rep << "checked = " << r.checked << "\nfailures = " << r.failures << "\nwitness = " << r.witness << '\n';
    pass = r.pass;
  };
  if (check == "claimA" || check == "lemmaA1") {
    auto U = ints(cfg, "verify.U");
    const int N = static_cast<int>(cfg.integer("verify.N"));
    const std::string rule = cfg.str("verify.rule", "full");
    if (rule != "full" && rule != "nearest") throw ConfigError("verify.rule", "expected full or nearest");
    Projector P(U, N, rule == "full" ? ProjectionRule::Full : ProjectionRule::NearestOnly);
    const int64_t radius = cfg.integer("verify.radius", 10);
    if (check == "claimA")
      report(verify_claimA(P, static_cast<int>(cfg.integer("verify.k", 0)), radius, opt.threads));
    else
      report(verify_lemmaA1(P, static_cast<int>(cfg.integer("verify.max_level", 2 * N + 1)), radius));
  } else if (check == "budget") {
    const int k_lo = static_cast<int>(cfg.integer("verify.k_lo", 1)), k_hi = static_cast<int>(cfg.integer("verify.k_hi", 2));
    const double c = cfg.real("verify.c", 0.5);
    SdicStrategy s = family_kind(cfg) == "rco" ? sdic_for_rco(rco_from_config(cfg), c, k_hi)
                                               : sdic_for_rcd(rcd_from_config(cfg), cfg.real("verify.t", 1), c, k_hi + 1);
    auto r = verify_sdic_budget(s, k_lo, k_hi);
    rep << "tuples = " << r.tuples << "\nworst_count = " << r.worst_count << "\nworst_ratio = " << format_ld(r.worst_ratio)
        << "\nwitness = " << r.witness << '\n';
    pass = r.pass;
    if (cfg.has("verify.max_count")) {
      bool within = r.worst_count <= cfg.count("verify.max_count");
      rep << "count_within_bound = " << within << '\n';
      pass = pass && within;
    }
  } else if (check == "claim2") {
    auto r = verify_claim2(ints(cfg, "verify.U"), static_cast<int>(cfg.integer("verify.N")),
                           static_cast<int>(cfg.integer("verify.k", 0)), cfg.integer("verify.radius", 1));
    rep << "cells = " << r.cells << "\nenumerated = " << r.enumerated << "\nclosed_form = " << r.closed_form
        << "\nproduct_of_floors = " << r.product_of_floors << "\nwitness = " << r.witness << '\n';
    pass = r.pass;
  } else if (check == "claim3") {
    auto r = verify_claim3(cfg.count("verify.draws", 10000), cfg.count("verify.seed", 1));
    rep << "draws = " << r.draws << "\nworst_ratio = " << format_ld(r.worst_ratio) << "\nwitness = " << r.witness << '\n';
    pass = r.pass;
  } else if (check == "inequality") {
    auto r = verify_min_inequality(cfg.count("verify.samples", 100000), cfg.count("verify.seed", 1));
    rep << "samples = " << r.samples << "\nworst_ratio = " << format_ld(r.worst_ratio) << "\nwitness = " << r.witness << '\n';
    pass = r.pass;
  } else if (check == "cover") {
    const int k = static_cast<int>(cfg.integer("verify.k", 1));
    const double c = cfg.real("verify.c", 0.5);
    const bool rco = family_kind(cfg) == "rco";
    SdicStrategy s = rco ? sdic_for_rco(rco_from_config(cfg), c, k + 1)
                         : sdic_for_rcd(rcd_from_config(cfg), cfg.real("verify.t", 1), c, k + 1);
    auto rs = rectangles(cfg, k + 1);
    auto r = verify_sdic_cover(s, rs, k);
    rep << "regions = " << r.regions << "\nwitness = " << r.witness << '\n';
    pass = r.pass;
  } else {
    throw ConfigError("verify.check", "expected claimA, lemmaA1, budget, claim2, claim3, inequality or cover");
  }
  rep << "pass = " << (pass ? "true" : "false") << '\n';
  out.files.push_back({"report.txt", rep.str()});
  out.summary = check + (pass ? " passed" : " FAILED");
  out.code = pass ? kOk : kNotCertified;
  return out;
}

Outcome run_find_pattern(const Config& cfg, const Options& opt) {
  Outcome out;
  PatternQuery q;
  q.C = cfg.points("pattern.points");
  q.lambda_lo = cfg.rational("pattern.lambda_lo");
  q.lambda_hi = cfg.rational("pattern.lambda_hi", q.lambda_lo);
  q.lambda_steps = static_cast<int>(cfg.integer("pattern.lambda_steps", 1));
  q.depth = static_cast<int>(cfg.integer("pattern.depth", 2));
  if (q.depth < 0 || q.depth > 6) throw ConfigError("pattern.depth", "expected 0..6");
  if (cfg.has("pattern.resolution")) q.resolution = cfg.rational("pattern.resolution");
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("pattern", e.what());
  }
  auto rs = rectangles(cfg, q.depth);
  auto res = find_homothety(q, rs, opt.threads);
  std::ostringstream os;
  write_candidates_csv(os, res);
  out.files.push_back({"candidates.csv", os.str()});
  out.summary = std::to_string(res.candidates.size()) + " candidates (" + res.label() + ")";
  return out;
}

Outcome run_smallest_u(const Config& cfg, const Options& opt) {
  Outcome out;
  SearchConfig sc = search_from_config(cfg);
  sc.threads = opt.threads;
  auto r = smallest_U_for_M(cfg.count("smallest_u.M", 4), cfg.count("smallest_u.ell", 0), sc,
                            cfg.count("smallest_u.cap", uint64_t{1} << 62));
  out.files.push_back({"certificate.txt", serialize_certificate(r.cert)});
  out.summary = "U=" + std::to_string(r.U) + " after " + std::to_string(r.probes) + " probes; " + cert_summary(r.cert);
  out.code = r.cert.certified ? kOk : kNotCertified;
  return out;
}

Outcome dispatch(const Config& cfg, const Options& opt) {
  const std::string& c = opt.command;
  if (c == "certify") return run_certify(cfg);
  if (c == "maximize") return run_maximize(cfg, opt, false);
  if (c == "intersect") return run_maximize(cfg, opt, true);
  if (c == "generate") return run_generate(cfg);
  if (c == "simulate") return run_simulate(cfg);
  if (c == "verify") return run_verify(cfg, opt);
  if (c == "find-pattern") return run_find_pattern(cfg, opt);
  if (c == "smallest-u") return run_smallest_u(cfg, opt);
  throw ConfigError("command", "unknown command '" + c + "'");
}

int resolve_threads(int flag, const Config& cfg) {
  if (flag > 0) return flag;
  if (cfg.has("optimizer.threads")) return static_cast<int>(cfg.integer("optimizer.threads"));
  if (const char* env = std::getenv("MPGAME_THREADS")) {
    try {
      int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    throw ConfigError("MPGAME_THREADS", "expected a positive integer");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify, optimize and simulate matrix potential games"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = ".";
  int threads = 0;
  bool trace = false;
  app.add_option("--config", config_path, "flat key = value run configuration")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: MPGAME_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_flag("--trace", trace, "write the optimizer probe trace");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"certify", "issue or re-validate a certificate"},
      {"maximize", "search (c, delta, t) for the best certificate"},
      {"intersect", "certify a finite intersection of family members"},
      {"generate", "write RCO/RCD rectangles as CSV or PBM"},
      {"simulate", "play the game against the SDIC strategy"},
      {"verify", "run an exhaustive or randomized proof oracle"},
      {"find-pattern", "grid-scan for homothetic pattern copies"},
      {"smallest-u", "smallest U whose corner family certifies M"}};
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }
  Options opt;
  opt.command = app.get_subcommands().front()->get_name();
  opt.trace = trace;
  try {
    Config cfg = Config::load(config_path);
    if (cfg.has("command") && cfg.str("command") != opt.command)
      throw ConfigError("command", "config names '" + cfg.str("command") + "' but the subcommand is '" + opt.command + "'");
    opt.threads = resolve_threads(threads, cfg);
    if (cfg.has("io.out") && out_dir == ".") out_dir = cfg.str("io.out");
    Outcome res = dispatch(cfg, opt);
    auto unused = cfg.unused();
    if (!unused.empty()) throw ConfigError(unused.front(), "unknown field");
    fs::create_directories(out_dir);
    for (const auto& [name, content] : res.files) {
      std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + (fs::path(out_dir) / name).string());
      f << content;
    }
    std::cout << res.summary << '\n';
    return res.code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
