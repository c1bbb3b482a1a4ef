#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpg/families.hpp"
#include "mpg/optimizer.hpp"

namespace mpg {

// Error tied to a dotted config key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Flat "section.key = value" text with typed, validated access. Reads are
// tracked so unknown keys can be reported.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& dflt) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double dflt) const;
  int64_t integer(const std::string& key) const;
  int64_t integer(const std::string& key, int64_t dflt) const;
  uint64_t count(const std::string& key) const;  // nonnegative integer, powers like 2^37 allowed
  uint64_t count(const std::string& key, uint64_t dflt) const;
  bool boolean(const std::string& key, bool dflt) const;
  Rational rational(const std::string& key) const;
  Rational rational(const std::string& key, const Rational& dflt) const;
  std::vector<double> reals(const std::string& key) const;              // "a, b, c"
  std::vector<std::vector<Rational>> points(const std::string& key) const;  // "x,y; x,y"

  std::vector<std::string> unused() const;

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> read_;
};

// family.kind = rco | rcd | raw | intersection
Family family_from_config(const Config& cfg);
RcoSpec rco_from_config(const Config& cfg);
RcdSpec rcd_from_config(const Config& cfg);
SearchConfig search_from_config(const Config& cfg);

}  // namespace mpg
