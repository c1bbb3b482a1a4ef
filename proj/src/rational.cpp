#include "mpg/rational.hpp"

#include <cctype>
#include <limits>

namespace mpg {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) {
  return v >= std::numeric_limits<int64_t>::min() && v <= std::numeric_limits<int64_t>::max();
}

}  // namespace

void Rational::assign(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits64(n) || !fits64(d)) throw std::overflow_error("rational: value exceeds 64-bit range");
  num_ = static_cast<int64_t>(n);
  den_ = static_cast<int64_t>(d);
}

Rational Rational::from_i128(i128 n, i128 d) {
  Rational r;
  r.assign(n, d);
  return r;
}

Rational Rational::operator-() const {
  if (num_ == std::numeric_limits<int64_t>::min()) throw std::overflow_error("rational: negation overflow");
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::from_i128(static_cast<i128>(a.num_) + b.num_, a.den_);
  i128 g = gcd128(a.den_, b.den_);
  i128 bd = b.den_ / g;
  i128 n = static_cast<i128>(a.num_) * bd + static_cast<i128>(b.num_) * (a.den_ / g);
  return Rational::from_i128(n, static_cast<i128>(a.den_) * bd);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  i128 g1 = gcd128(a.num_, b.den_);
  i128 g2 = gcd128(b.num_, a.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  i128 n = (a.num_ / g1) * (b.num_ / g2);
  i128 d = (a.den_ / g2) * (b.den_ / g1);
  return Rational::from_i128(n, d);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational: division by zero");
  return a * Rational::from_i128(b.den_, b.num_);
}

int64_t Rational::floor() const {
  int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

int64_t Rational::ceil() const {
  int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("rational: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    size_t p1 = 0, p2 = 0;
    long long n = std::stoll(s.substr(0, slash), &p1);
    long long d = std::stoll(s.substr(slash + 1), &p2);
    if (p1 != slash || p2 != s.size() - slash - 1) throw std::invalid_argument("rational: bad fraction '" + text + "'");
    return Rational(n, d);
  }
  // decimal with optional exponent
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  i128 mant = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mant = mant * 10 + (ch - '0');
      if (mant > static_cast<i128>(std::numeric_limits<int64_t>::max()) * 1000)
        throw std::overflow_error("rational: too many digits in '" + text + "'");
      if (dot) ++scale;
      digits = true;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw std::invalid_argument("rational: bad number '" + text + "'");
  int exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("rational: bad number '" + text + "'");
    size_t p = 0;
    exp10 = std::stoi(s.substr(i + 1), &p);
    if (p != s.size() - i - 1) throw std::invalid_argument("rational: bad exponent '" + text + "'");
  }
  exp10 -= scale;
  i128 num = neg ? -mant : mant;
  i128 den = 1;
  if (exp10 > 38 || exp10 < -38) throw std::overflow_error("rational: exponent out of range '" + text + "'");
  for (; exp10 > 0; --exp10) {
    num *= 10;
    if (!fits64(num)) throw std::overflow_error("rational: value exceeds 64-bit range '" + text + "'");
  }
  for (; exp10 < 0; ++exp10) den *= 10;
  return from_i128(num, den);
}

Rational ipow(int64_t base, int e) {
  if (e < 0) throw std::invalid_argument("ipow: negative exponent");
  i128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= base;
    if (r > std::numeric_limits<int64_t>::max() || r < std::numeric_limits<int64_t>::min())
      throw std::overflow_error("ipow: overflow");
  }
  return Rational::from_i128(r, 1);
}

}  // namespace mpg
