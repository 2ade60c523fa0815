#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace costab {

/// Exact rational scalar. All homological computations are carried out with
/// exact arithmetic; doubles only enter at the central-charge level.
using Rat = boost::multiprecision::cpp_rational;

/// Prime field F_p with p = 32003, offered as a faster alternative scalar.
class Fp {
 public:
  static constexpr std::int64_t P = 32003;

  Fp() = default;
  Fp(std::int64_t x) : v_(norm(x)) {}

  std::int64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  Fp operator-() const { return Fp(-v_); }
  Fp& operator+=(Fp o) { v_ = norm(v_ + o.v_); return *this; }
  Fp& operator-=(Fp o) { v_ = norm(v_ - o.v_); return *this; }
  Fp& operator*=(Fp o) { v_ = norm(v_ * o.v_); return *this; }
  Fp& operator/=(Fp o) { return *this *= o.inv(); }

  friend Fp operator+(Fp a, Fp b) { return a += b; }
  friend Fp operator-(Fp a, Fp b) { return a -= b; }
  friend Fp operator*(Fp a, Fp b) { return a *= b; }
  friend Fp operator/(Fp a, Fp b) { return a /= b; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  Fp inv() const {
    if (v_ == 0) throw std::domain_error("Fp: division by zero");
    // extended Euclid
    std::int64_t a = v_, b = P, x0 = 1, x1 = 0;
    while (b != 0) {
      std::int64_t q = a / b;
      std::int64_t t = a - q * b; a = b; b = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    return Fp(x0);
  }

 private:
  static std::int64_t norm(std::int64_t x) {
    x %= P;
    return x < 0 ? x + P : x;
  }
  std::int64_t v_ = 0;
};

enum class FieldKind { Rationals, Fp32003 };

inline std::string field_name(FieldKind k) {
  return k == FieldKind::Rationals ? "Q" : "F32003";
}

inline FieldKind field_from_name(const std::string& s) {
  if (s == "Q" || s == "QQ" || s == "rationals") return FieldKind::Rationals;
  if (s == "F32003" || s == "Fp" || s == "fp") return FieldKind::Fp32003;
  throw std::invalid_argument("unknown field: " + s);
}

// Generic scalar helpers used by the templated linear algebra.
template <class K> struct field_traits;

template <> struct field_traits<Rat> {
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static bool is_zero(const Rat& x) { return x == 0; }
  static Rat from_rational(const Rat& x) { return x; }
  static std::string to_string(const Rat& x) { return x.str(); }
  static constexpr FieldKind kind = FieldKind::Rationals;
};

template <> struct field_traits<Fp> {
  static Fp zero() { return Fp(0); }
  static Fp one() { return Fp(1); }
  static bool is_zero(const Fp& x) { return x.is_zero(); }
  static Fp from_rational(const Rat& x) {
    using boost::multiprecision::cpp_int;
    cpp_int num = numerator(x) % Fp::P;
    cpp_int den = denominator(x) % Fp::P;
    Fp n(static_cast<std::int64_t>(num));
    Fp d(static_cast<std::int64_t>(den));
    return n / d;
  }
  static std::string to_string(const Fp& x) { return std::to_string(x.value()); }
  static constexpr FieldKind kind = FieldKind::Fp32003;
};

/// Parses "a/b", "a", or a plain decimal like "0.25" into an exact rational.
Rat parse_rational(const std::string& s);
std::string rational_to_string(const Rat& r);

}  // namespace costab
