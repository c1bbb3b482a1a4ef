#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpg {

// Nonnegative magnitude stored as its natural log. -inf encodes zero.
// long double keeps exp(log x) within a few ulp of x for doubles.
class LogScalar {
 public:
  LogScalar() = default;

  static LogScalar zero() { return LogScalar(); }
  static LogScalar one() { return from_log(0.0L); }
  static LogScalar from_log(long double lv) {
    if (std::isnan(lv) || lv == std::numeric_limits<long double>::infinity())
      throw std::domain_error("LogScalar: log value must be finite or -inf");
    LogScalar s;
    s.lv_ = lv;
    return s;
  }
  static LogScalar from_value(long double x) {
    if (std::isnan(x) || x < 0) throw std::domain_error("LogScalar: value must be nonnegative");
    if (std::isinf(x)) throw std::domain_error("LogScalar: value must be finite");
    return from_log(x == 0 ? -std::numeric_limits<long double>::infinity() : std::log(x));
  }

  long double log() const { return lv_; }
  long double value() const { return std::exp(lv_); }
  bool is_zero() const { return lv_ == -std::numeric_limits<long double>::infinity(); }

  LogScalar pow(long double p) const {
    if (is_zero()) {
      if (p <= 0) throw std::domain_error("LogScalar: zero to nonpositive power");
      return zero();
    }
    return from_log(lv_ * p);
  }

  friend LogScalar operator*(LogScalar a, LogScalar b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.lv_ + b.lv_);
  }
  friend LogScalar operator/(LogScalar a, LogScalar b) {
    if (b.is_zero()) throw std::domain_error("LogScalar: division by zero");
    if (a.is_zero()) return zero();
    return from_log(a.lv_ - b.lv_);
  }
  friend LogScalar operator+(LogScalar a, LogScalar b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long double hi = std::max(a.lv_, b.lv_), lo = std::min(a.lv_, b.lv_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  // a - b for a >= b.
  friend LogScalar operator-(LogScalar a, LogScalar b) {
    if (b.is_zero()) return a;
    if (b.lv_ > a.lv_) throw std::domain_error("LogScalar: negative difference");
    if (b.lv_ == a.lv_) return zero();
    return from_log(a.lv_ + std::log(-std::expm1(b.lv_ - a.lv_)));
  }

  friend bool operator<(LogScalar a, LogScalar b) { return a.lv_ < b.lv_; }
  friend bool operator<=(LogScalar a, LogScalar b) { return a.lv_ <= b.lv_; }
  friend bool operator>(LogScalar a, LogScalar b) { return a.lv_ > b.lv_; }
  friend bool operator>=(LogScalar a, LogScalar b) { return a.lv_ >= b.lv_; }
  friend bool operator==(LogScalar a, LogScalar b) { return a.lv_ == b.lv_; }

 private:
  long double lv_ = -std::numeric_limits<long double>::infinity();
};

}  // namespace mpg
