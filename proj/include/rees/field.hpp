#pragma once

// Coefficient fields: the rationals and prime fields F_p.
//
// Every scalar is carried as an mpq_class. Over F_p the value is kept
// canonical as an integer in [0, p), so equality of scalars is equality
// of the underlying rationals in both cases.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rees/error.hpp"

namespace rees {

using Scalar = mpq_class;

class Field {
public:
  Field() = default;

  static Field rationals() { return Field{}; }

  static Field prime(unsigned long p) {
    if (p < 2 || !is_prime(p)) {
      throw Error("field characteristic " + std::to_string(p) + " is not prime");
    }
    Field f;
    f.p_ = p;
    return f;
  }

  unsigned long characteristic() const { return p_; }
  bool is_prime_field() const { return p_ != 0; }

  /// Maps an arbitrary rational into the field. Fails over F_p when the
  /// denominator is divisible by p.
  Scalar reduce(const Scalar& a) const {
    if (p_ == 0) {
      Scalar r = a;
      r.canonicalize();
      return r;
    }
    mpz_class mod = p_;
    mpz_class num = a.get_num() % mod;
    if (num < 0) num += mod;
    mpz_class den = a.get_den() % mod;
    if (den < 0) den += mod;
    if (den == 0) {
      throw Error("denominator vanishes in characteristic " + std::to_string(p_));
    }
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class v = (num * inv) % mod;
    return Scalar(v);
  }

  Scalar from_int(long v) const { return reduce(Scalar(v)); }
  Scalar zero() const { return Scalar(0); }
  Scalar one() const { return Scalar(1); }

  Scalar add(const Scalar& a, const Scalar& b) const { return p_ ? reduce(a + b) : Scalar(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return p_ ? reduce(a - b) : Scalar(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return p_ ? reduce(a * b) : Scalar(a * b); }
  Scalar neg(const Scalar& a) const { return p_ ? reduce(-a) : Scalar(-a); }

  Scalar inv(const Scalar& a) const {
    if (a == 0) throw Error("division by zero");
    if (p_ == 0) return Scalar(1) / a;
    return reduce(Scalar(1) / a);
  }

  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  Scalar pow(const Scalar& a, unsigned long e) const {
    Scalar result = one();
    Scalar base = a;
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  /// binomial(n, k) mapped into the field.
  Scalar binomial(unsigned long n, unsigned long k) const {
    if (k > n) return zero();
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return reduce(Scalar(b));
  }

  /// p-th root of a constant. Over F_p Frobenius is the identity, so the
  /// root of c is c itself; over Q the only p to ask about is none.
  Scalar frobenius_root(const Scalar& a) const {
    if (p_ == 0) throw Error("p-th roots requested in characteristic 0");
    return a;
  }

  std::string name() const { return p_ ? "F" + std::to_string(p_) : "Q"; }

  friend bool operator==(const Field&, const Field&) = default;

private:
  static bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  unsigned long p_ = 0;
};

/// Parses "Q", "QQ", "F7", "GF(7)", "Fp7". Throws on anything else.
inline Field parse_field(const std::string& text) {
  if (text == "Q" || text == "QQ") return Field::rationals();
  std::string digits;
  if (text.rfind("GF(", 0) == 0 && text.back() == ')') {
    digits = text.substr(3, text.size() - 4);
  } else if (text.rfind("Fp", 0) == 0) {
    digits = text.substr(2);
  } else if (!text.empty() && text[0] == 'F') {
    digits = text.substr(1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error("unknown field '" + text + "'");
  }
  return Field::prime(std::stoul(digits));
}

inline std::string scalar_to_string(const Scalar& a) { return a.get_str(); }

/// Parses an integer or a/b literal.
inline Scalar parse_scalar(const std::string& text) {
  Scalar q;
  if (q.set_str(text, 10) != 0) throw Error("bad rational literal '" + text + "'");
  q.canonicalize();
  return q;
}

/// Nonnegative rational or +infinity; the value type of every order function.
class ExtRational {
public:
  ExtRational() = default;
  ExtRational(const Scalar& v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  ExtRational(long v) : value_(v) {}           // NOLINT(google-explicit-constructor)

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  const Scalar& value() const {
    if (infinite_) throw Error("value() of infinity");
    return value_;
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const { return infinite_ ? "inf" : value_.get_str(); }

  friend std::ostream& operator<<(std::ostream& os, const ExtRational& r) { return os << r.str(); }

private:
  Scalar value_{0};
  bool infinite_ = false;
};

inline ExtRational parse_ext_rational(const std::string& text) {
  if (text == "inf" || text == "oo" || text == "∞" || text == "infinity") {
    return ExtRational::infinity();
  }
  return ExtRational(parse_scalar(text));
}

}  // namespace rees
