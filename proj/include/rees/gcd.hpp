#pragma once

// Multivariate gcd (recursive primitive remainder sequences), exact
// division by powers, and radicals.

#include <utility>

#include "rees/polynomial.hpp"

namespace rees {

namespace detail {

/// First variable (in ring order) that f or g involves, if any.
inline std::optional<std::size_t> main_variable(const Poly& f, const Poly& g) {
  for (std::size_t i = 0; i < f.ring()->nvars(); ++i) {
    if (f.involves(i) || g.involves(i)) return i;
  }
  return std::nullopt;
}

inline Poly exact_div_or_throw(const Poly& f, const Poly& g) {
  auto q = exact_quotient(f, g);
  if (!q) throw Error("internal: inexact division in gcd");
  return *q;
}

/// Pseudo-remainder of a by b with respect to variable v.
inline Poly pseudo_remainder(Poly a, const Poly& b, std::size_t v) {
  const int db = b.degree_in(v);
  const Poly lcb = coefficients_in(b, v).back();
  while (!a.is_zero() && a.degree_in(v) >= db) {
    int da = a.degree_in(v);
    Poly lca = coefficients_in(a, v).back();
    Exponents shift(a.ring()->nvars(), 0);
    shift[v] = static_cast<unsigned>(da - db);
    a = lcb * a - lca * Poly::monomial(a.ring(), shift, Scalar(1)) * b;
  }
  return a;
}

}  // namespace detail

Poly poly_gcd(const Poly& f, const Poly& g);

/// gcd of the coefficients of f viewed as a polynomial in v.
inline Poly content_in(const Poly& f, std::size_t v) {
  Poly c(f.ring());
  for (const Poly& coeff : coefficients_in(f, v)) {
    if (coeff.is_zero()) continue;
    c = poly_gcd(c, coeff);
    if (c.is_unit()) break;
  }
  return c;
}

/// A gcd of f and g, normalized to leading coefficient 1 under grlex.
inline Poly poly_gcd(const Poly& f, const Poly& g) {
  f.check_ring(g);
  if (f.is_zero() && g.is_zero()) throw Error("gcd of two zero polynomials");
  if (f.is_zero()) return g.monic();
  if (g.is_zero()) return f.monic();
  auto v = detail::main_variable(f, g);
  if (!v) return Poly::constant(f.ring(), Scalar(1));
  if (!f.involves(*v)) return poly_gcd(f, content_in(g, *v));
  if (!g.involves(*v)) return poly_gcd(content_in(f, *v), g);

  Poly cf = content_in(f, *v);
  Poly cg = content_in(g, *v);
  Poly c = poly_gcd(cf, cg);
  Poly a = detail::exact_div_or_throw(f, cf);
  Poly b = detail::exact_div_or_throw(g, cg);
  if (a.degree_in(*v) < b.degree_in(*v)) std::swap(a, b);
  while (!b.is_zero() && b.involves(*v)) {
    Poly r = detail::pseudo_remainder(a, b, *v);
    a = std::move(b);
    if (r.is_zero()) {
      b = Poly(f.ring());
    } else if (!r.involves(*v)) {
      // Nonzero remainder free of v: the primitive parts are coprime in v.
      a = Poly::constant(f.ring(), Scalar(1));
      b = Poly(f.ring());
    } else {
      b = detail::exact_div_or_throw(r, content_in(r, *v));
    }
  }
  if (!b.is_zero()) {
    // b is v-free and nonzero while a is primitive: coprime.
    a = Poly::constant(f.ring(), Scalar(1));
  }
  a = detail::exact_div_or_throw(a, content_in(a, *v));
  return (a * c).monic();
}

/// Largest k with g^k | f, and f / g^k.
struct DivideOut {
  unsigned multiplicity;
  Poly quotient;
};

inline DivideOut divide_out(const Poly& f, const Poly& g) {
  f.check_ring(g);
  if (g.is_zero() || g.is_constant()) throw Error("divide_out: divisor must be a nonconstant polynomial");
  if (f.is_zero()) throw Error("divide_out: zero has unbounded multiplicity");
  DivideOut r{0, f};
  while (true) {
    auto q = exact_quotient(r.quotient, g);
    if (!q) return r;
    r.quotient = std::move(*q);
    ++r.multiplicity;
  }
}

/// Product of the distinct irreducible factors of f, monic; 1 for units.
inline Poly radical(const Poly& f) {
  if (f.is_zero()) throw Error("radical of zero");
  if (f.is_constant()) return Poly::constant(f.ring(), Scalar(1));
  Poly d(f.ring());
  bool any = false;
  for (std::size_t i = 0; i < f.ring()->nvars(); ++i) {
    Poly df = partial(f, i);
    if (df.is_zero()) continue;
    any = true;
    d = poly_gcd(d, df);
  }
  if (!any) {
    // Every partial vanishes: f is a p-th power.
    auto root = frobenius_root(f);
    if (!root) throw Error("internal: constant-free polynomial with zero derivatives");
    return radical(*root);
  }
  d = poly_gcd(d, f);
  if (d.is_constant()) return f.monic();
  Poly r = detail::exact_div_or_throw(f, d);
  Poly rd = radical(d);
  Poly common = poly_gcd(r, rd);
  return (detail::exact_div_or_throw(r, common) * rd).monic();
}

}  // namespace rees
