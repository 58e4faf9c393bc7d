#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pinchkit/errors.hpp"

namespace pinchkit {

// ==== exact rational scalars ====

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

inline int sign_of(const Rat& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

// Accepts "p", "p/q", and terminating decimals like "-0.25".
// Anything else (including q = 0) is a SchemaError.
inline Rat parse_rational(const std::string& text) {
  auto fail = [&] { throw SchemaError("not a rational literal: \"" + text + "\""); };
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = (text[pos] == '-');
    ++pos;
  }
  std::size_t digits_start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits_start) fail();
  BigInt num(text.substr(digits_start, pos - digits_start));
  BigInt den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::size_t den_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == den_start || pos != text.size()) fail();
    den = BigInt(text.substr(den_start));
    if (den == 0) fail();
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t frac_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == frac_start || pos != text.size()) fail();
    for (std::size_t i = frac_start; i < text.size(); ++i) {
      num = num * 10 + (text[i] - '0');
      den *= 10;
    }
  } else if (pos != text.size()) {
    fail();
  }
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

inline std::string format_rational(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// ==== quadratic extension field element ====
//
// Value x + y*sqrt(D) with x, y, D rational and D >= 0. Supports exact
// sign queries, which is what decides the bound trichotomy. Two values
// mix only when they live over the same radicand (or one is rational).

class QuadExt {
 public:
  QuadExt() : x_(0), y_(0), d_(0) {}
  explicit QuadExt(Rat x) : x_(std::move(x)), y_(0), d_(0) {}
  QuadExt(Rat x, Rat y, Rat d) : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
    if (d_ < 0) throw DomainError("QuadExt radicand must be nonnegative");
    if (y_ == 0 || d_ == 0) {
      // collapse exact rationals so mixed-radicand arithmetic stays legal
      if (d_ == 0) y_ = 0;
      if (y_ == 0) d_ = 0;
    } else {
      const BigInt num = boost::multiprecision::numerator(d_);
      const BigInt den = boost::multiprecision::denominator(d_);
      const BigInt rn = boost::multiprecision::sqrt(num);
      const BigInt rd = boost::multiprecision::sqrt(den);
      if (rn * rn == num && rd * rd == den) {
        // perfect square: absorb the radical into the rational part
        x_ += y_ * Rat(rn, rd);
        y_ = 0;
        d_ = 0;
      }
    }
  }

  const Rat& x() const { return x_; }
  const Rat& y() const { return y_; }
  const Rat& d() const { return d_; }
  bool is_rational() const { return y_ == 0; }

  QuadExt operator+(const QuadExt& o) const {
    const Rat d = joint_radicand(o);
    return QuadExt(x_ + o.x_, y_ + o.y_, d);
  }
  QuadExt operator-(const QuadExt& o) const {
    const Rat d = joint_radicand(o);
    return QuadExt(x_ - o.x_, y_ - o.y_, d);
  }
  QuadExt operator-() const { return QuadExt(-x_, -y_, d_); }
  QuadExt operator*(const QuadExt& o) const {
    const Rat d = joint_radicand(o);
    return QuadExt(x_ * o.x_ + y_ * o.y_ * d, x_ * o.y_ + y_ * o.x_, d);
  }

  // sign of x + y*sqrt(D), exact: when x and y disagree in sign the
  // comparison reduces to x^2 vs y^2 D
  int sign() const {
    if (y_ == 0) return sign_of(x_);
    if (x_ == 0) return sign_of(y_);
    const int sx = sign_of(x_);
    const int sy = sign_of(y_);
    if (sx == sy) return sx;
    const Rat lhs = x_ * x_;
    const Rat rhs = y_ * y_ * d_;
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? sx : sy;
  }

  int compare(const QuadExt& o) const { return (*this - o).sign(); }
  bool operator==(const QuadExt& o) const { return compare(o) == 0; }

  double to_double() const {
    return pinchkit::to_double(x_) + pinchkit::to_double(y_) * std::sqrt(pinchkit::to_double(d_));
  }

 private:
  Rat joint_radicand(const QuadExt& o) const {
    if (y_ == 0) return o.d_;
    if (o.y_ == 0) return d_;
    if (d_ != o.d_) throw DomainError("QuadExt arithmetic across different radicands");
    return d_;
  }

  Rat x_, y_, d_;
};

}  // namespace pinchkit
