#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "vnlab/error.hpp"

namespace vnlab {

/// Exact nonnegative-denominator rational with 64-bit parts. Arithmetic
/// overflow is reported as an InputError rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) { assign(num, den); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InputError("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p/q" or an integer.
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const auto n = std::stoll(text, &used);
        if (used != text.size()) throw InputError("bad rational '" + text + "'");
        return Rational(n);
      }
      const auto n = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw InputError("bad rational '" + text + "'");
      const std::string tail = text.substr(slash + 1);
      const auto d = std::stoll(tail, &used);
      if (used != tail.size()) throw InputError("bad rational '" + text + "'");
      return Rational(n, d);
    } catch (const std::logic_error&) {
      throw InputError("bad rational '" + text + "'");
    }
  }

 private:
  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InputError("rational with zero denominator");
    *this = from_wide(num, den);
  }

  static Rational from_wide(__int128 num, __int128 den) {
    if (den == 0) throw InputError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 lim = INT64_MAX;
    if (num > lim || num < -lim || den > lim) throw InputError("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

/// An atom weight: exact when every input was rational, a double otherwise.
class Weight {
 public:
  static constexpr double kTol = 1e-9;

  Weight() = default;
  Weight(Rational q) : exact_(true), q_(q), value_(q.to_double()) {}
  static Weight approximate(double v) {
    Weight w;
    w.exact_ = false;
    w.value_ = v;
    return w;
  }

  bool exact() const noexcept { return exact_; }
  const Rational& rational() const noexcept { return q_; }
  double value() const noexcept { return value_; }

  friend Weight operator*(const Weight& a, const Weight& b) {
    if (a.exact_ && b.exact_) return Weight(a.q_ * b.q_);
    return approximate(a.value_ * b.value_);
  }
  friend Weight operator+(const Weight& a, const Weight& b) {
    if (a.exact_ && b.exact_) return Weight(a.q_ + b.q_);
    return approximate(a.value_ + b.value_);
  }

  /// Exact comparison when both sides are exact, otherwise equality within kTol.
  friend std::weak_ordering compare(const Weight& a, const Weight& b) {
    if (a.exact_ && b.exact_) return a.q_ <=> b.q_;
    if (std::abs(a.value_ - b.value_) <= kTol) return std::weak_ordering::equivalent;
    return a.value_ < b.value_ ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  friend bool operator==(const Weight& a, const Weight& b) { return compare(a, b) == 0; }

  std::string str() const {
    if (exact_) return q_.str();
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

 private:
  bool exact_ = true;
  Rational q_{0};
  double value_ = 0.0;
};

inline std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.str(); }

}  // namespace vnlab
