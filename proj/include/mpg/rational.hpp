#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mpg {

// Exact rational with 64-bit numerator and denominator. Intermediate products
// use 128-bit integers; any result that does not fit throws std::overflow_error.
class Rational {
 public:
  using i128 = __int128;

  constexpr Rational() = default;
  constexpr Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT
  Rational(int64_t n, int64_t d) { assign(n, d); }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  static Rational from_i128(i128 n, i128 d);
  // Parses "3", "-7/4", "0.125", "1e-3".
  static Rational parse(const std::string& s);

  long double to_ld() const { return static_cast<long double>(num_) / static_cast<long double>(den_); }
  std::string str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend int compare(const Rational& a, const Rational& b) {
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return l < r ? -1 : (l > r ? 1 : 0);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

  int64_t floor() const;
  int64_t ceil() const;
  Rational abs() const { return num_ < 0 ? -*this : *this; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign(i128 n, i128 d);

  int64_t num_ = 0;
  int64_t den_ = 1;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// base^e as an exact integer rational; throws on overflow.
Rational ipow(int64_t base, int e);

}  // namespace mpg
