#pragma once

// Sparse multivariate polynomials over Q or F_p.
//
// Terms are kept in a map ordered by graded lexicographic order, largest
// first, so the leading term is always terms().begin(). No zero
// coefficient is ever stored.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rees/error.hpp"
#include "rees/field.hpp"

namespace rees {

/// Ordered variable list plus coefficient field.
class Ring {
public:
  Ring(Field field, std::vector<std::string> vars) : field_(field), vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (vars_[i] == vars_[j]) throw Error("duplicate variable " + vars_[i]);
      }
    }
  }

  const Field& field() const { return field_; }
  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const std::string& var(std::size_t i) const { return vars_.at(i); }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
  }

  std::size_t index_of(const std::string& name) const {
    auto i = find(name);
    if (!i) throw Error("variable " + name + " is not in the ring");
    return *i;
  }

  friend bool operator==(const Ring&, const Ring&) = default;

private:
  Field field_;
  std::vector<std::string> vars_;
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(Field field, std::vector<std::string> vars) {
  return std::make_shared<const Ring>(field, std::move(vars));
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// A rational closed point: one field element per ambient variable.
struct Point {
  std::vector<Scalar> coords;

  std::size_t size() const { return coords.size(); }
  const Scalar& operator[](std::size_t i) const { return coords[i]; }

  static Point origin(std::size_t n) { return Point{std::vector<Scalar>(n, Scalar(0))}; }

  /// Drops coordinate i (the image under a coordinate projection).
  Point without(std::size_t i) const {
    Point p = *this;
    p.coords.erase(p.coords.begin() + static_cast<std::ptrdiff_t>(i));
    return p;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) s += ",";
      s += coords[i].get_str();
    }
    return s + ")";
  }

  friend bool operator==(const Point&, const Point&) = default;
};

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

/// Graded lexicographic order, used "greater first" in term maps.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = total_degree(a);
    unsigned db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

class Poly {
public:
  using Terms = std::map<Exponents, Scalar, GrlexGreater>;

  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

  static Poly zero(const RingPtr& ring) { return Poly(ring); }

  static Poly constant(const RingPtr& ring, const Scalar& c) {
    Poly p(ring);
    p.add_term(Exponents(ring->nvars(), 0), c);
    return p;
  }

  static Poly variable(const RingPtr& ring, std::size_t i) {
    Exponents e(ring->nvars(), 0);
    e.at(i) = 1;
    Poly p(ring);
    p.add_term(e, Scalar(1));
    return p;
  }

  static Poly variable(const RingPtr& ring, const std::string& name) {
    return variable(ring, ring->index_of(name));
  }

  static Poly monomial(const RingPtr& ring, Exponents e, const Scalar& c) {
    if (e.size() != ring->nvars()) throw Error("exponent vector has wrong length");
    Poly p(ring);
    p.add_term(e, c);
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  const Field& field() const { return ring_->field(); }
  const Terms& terms() const { return terms_; }
  std::size_t nterms() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }

  /// Nonzero constant: a unit of the polynomial ring.
  bool is_unit() const { return !terms_.empty() && is_constant(); }

  Scalar constant_term() const {
    auto it = terms_.find(Exponents(ring_->nvars(), 0));
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  const Exponents& leading_exponents() const {
    if (terms_.empty()) throw Error("leading term of zero polynomial");
    return terms_.begin()->first;
  }
  const Scalar& leading_coefficient() const {
    if (terms_.empty()) throw Error("leading term of zero polynomial");
    return terms_.begin()->second;
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(total_degree(terms_.begin()->first));
  }

  /// Degree in variable i; -1 for the zero polynomial.
  int degree_in(std::size_t i) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[i]));
    return d;
  }

  bool involves(std::size_t i) const { return degree_in(i) > 0; }

  /// Adds c * x^e into this polynomial (c is reduced into the field).
  void add_term(const Exponents& e, const Scalar& c) {
    Scalar r = field().reduce(c);
    if (r == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, r);
    if (!inserted) {
      it->second = field().add(it->second, r);
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly operator-() const {
    Poly r(ring_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, field().neg(c));
    return r;
  }

  Poly& operator+=(const Poly& o) {
    check_ring(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    check_ring(o);
    for (const auto& [e, c] : o.terms_) add_term(e, field().neg(c));
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_ring(b);
    Poly r(a.ring_);
    const Field& k = a.field();
    Exponents e(a.ring_->nvars());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, k.mul(ca, cb));
      }
    }
    return r;
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const Scalar& s) const {
    Poly r(ring_);
    Scalar t = field().reduce(s);
    if (t == 0) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, field().mul(c, t));
    return r;
  }

  Poly pow(unsigned long n) const {
    Poly result = constant(ring_, Scalar(1));
    Poly base = *this;
    while (n) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return result;
  }

  /// Scalar multiple with leading coefficient 1; zero stays zero.
  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(field().inv(leading_coefficient()));
  }

  Scalar evaluate(const Point& x) const {
    check_point(x);
    const Field& k = field();
    Scalar sum = 0;
    for (const auto& [e, c] : terms_) {
      Scalar t = c;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i]) t = k.mul(t, k.pow(k.reduce(x[i]), e[i]));
      }
      sum = k.add(sum, t);
    }
    return sum;
  }

  void check_point(const Point& x) const {
    if (x.size() != ring_->nvars()) {
      throw Error("point " + x.str() + " has " + std::to_string(x.size()) +
                  " coordinates, ring has " + std::to_string(ring_->nvars()));
    }
  }

  void check_ring(const Poly& o) const {
    if (!same_ring(ring_, o.ring_)) throw ContextMismatch();
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return same_ring(a.ring_, b.ring_) && a.terms_ == b.terms_;
  }

  /// Canonical text, terms in decreasing grlex order.
  std::string str() const;

private:
  RingPtr ring_;
  Terms terms_;
};

inline std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Scalar coeff = c;
    // Over F_p print the symmetric representative so -1 reads as -1.
    if (field().is_prime_field()) {
      Scalar half = Scalar(field().characteristic()) / 2;
      if (coeff > half) coeff -= field().characteristic();
    }
    bool negative = coeff < 0;
    Scalar mag = negative ? Scalar(-coeff) : coeff;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? "-" : "+";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->var(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

inline Poly poly_add(const Poly& f, const Poly& g) { return f + g; }
inline Poly poly_sub(const Poly& f, const Poly& g) { return f - g; }
inline Poly poly_mul(const Poly& f, const Poly& g) { return f * g; }

/// Taylor shift: returns f(X + a). The result's variables are the local
/// coordinates centred at the point a.
inline Poly translate(const Poly& f, const Point& a) {
  f.check_point(a);
  const Field& k = f.field();
  Poly cur = f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Scalar ai = k.reduce(a[i]);
    if (ai == 0) continue;
    Poly next(f.ring());
    for (const auto& [e, c] : cur.terms()) {
      Exponents ej = e;
      unsigned n = e[i];
      for (unsigned j = 0; j <= n; ++j) {
        ej[i] = j;
        next.add_term(ej, k.mul(c, k.mul(k.binomial(n, j), k.pow(ai, n - j))));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

/// nu_x(f): order of f at the rational point x; infinity for f = 0.
inline ExtRational order_at(const Poly& f, const Point& x) {
  if (f.is_zero()) return ExtRational::infinity();
  Poly g = translate(f, x);
  unsigned m = ~0u;
  for (const auto& [e, c] : g.terms()) m = std::min(m, total_degree(e));
  return ExtRational(static_cast<long>(m));
}

/// Order at the origin as an integer; f must be nonzero.
inline unsigned order_at_origin(const Poly& f) {
  if (f.is_zero()) throw Error("order of the zero polynomial");
  // Lowest degree terms sit at the end of the grlex map.
  return total_degree(f.terms().rbegin()->first);
}

/// Lowest-degree homogeneous part of f translated to x, in the local
/// coordinates (same variable names) centred at x.
inline Poly initial_form(const Poly& f, const Point& x) {
  if (f.is_zero()) throw Error("initial form of the zero polynomial");
  Poly g = translate(f, x);
  unsigned m = order_at_origin(g);
  Poly r(f.ring());
  for (const auto& [e, c] : g.terms()) {
    if (total_degree(e) == m) r.add_term(e, c);
  }
  return r;
}

/// Hasse (divided-power) derivative: the coefficient of T^alpha in f(X+T).
inline Poly hasse_derivative(const Poly& f, const Exponents& alpha) {
  if (alpha.size() != f.ring()->nvars()) throw Error("multi-index has wrong length");
  const Field& k = f.field();
  Poly r(f.ring());
  Exponents d(alpha.size());
  for (const auto& [e, c] : f.terms()) {
    Scalar coeff = c;
    bool ok = true;
    for (std::size_t i = 0; i < e.size() && ok; ++i) {
      if (e[i] < alpha[i]) {
        ok = false;
      } else {
        d[i] = e[i] - alpha[i];
        if (alpha[i]) coeff = k.mul(coeff, k.binomial(e[i], alpha[i]));
      }
    }
    if (ok) r.add_term(d, coeff);
  }
  return r;
}

/// Hasse derivative of order k in a single variable.
inline Poly hasse_derivative(const Poly& f, std::size_t var, unsigned k) {
  Exponents alpha(f.ring()->nvars(), 0);
  alpha.at(var) = k;
  return hasse_derivative(f, alpha);
}

/// Every multi-index of total degree between lo and hi inclusive.
inline std::vector<Exponents> multi_indices(std::size_t nvars, unsigned lo, unsigned hi) {
  std::vector<Exponents> out;
  Exponents cur(nvars, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned remaining) -> void {
    if (i + 1 == nvars) {
      for (unsigned v = 0; v <= remaining; ++v) {
        cur[i] = v;
        unsigned d = total_degree(cur);
        if (d >= lo && d <= hi) out.push_back(cur);
      }
      cur[i] = 0;
      return;
    }
    for (unsigned v = 0; v <= remaining; ++v) {
      cur[i] = v;
      self(self, i + 1, remaining - v);
    }
    cur[i] = 0;
  };
  if (nvars == 0) {
    if (lo == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, hi);
  std::sort(out.begin(), out.end(), [](const Exponents& a, const Exponents& b) {
    unsigned da = total_degree(a), db = total_degree(b);
    return da != db ? da < db : a > b;
  });
  return out;
}

/// Coefficients of f viewed as a polynomial in variable i: result[j] is the
/// (i-free) coefficient of x_i^j.
inline std::vector<Poly> coefficients_in(const Poly& f, std::size_t i) {
  int d = f.degree_in(i);
  std::vector<Poly> out(static_cast<std::size_t>(std::max(d, 0) + (d >= 0 ? 1 : 0)), Poly(f.ring()));
  for (const auto& [e, c] : f.terms()) {
    Exponents r = e;
    r[i] = 0;
    out[e[i]].add_term(r, c);
  }
  return out;
}

/// Inverse of coefficients_in.
inline Poly from_coefficients_in(const RingPtr& ring, std::span<const Poly> coeffs, std::size_t i) {
  Poly r(ring);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    for (const auto& [e, c] : coeffs[j].terms()) {
      Exponents s = e;
      s[i] += static_cast<unsigned>(j);
      r.add_term(s, c);
    }
  }
  return r;
}

/// Substitutes every variable x_i by images[i] (a polynomial in the target
/// ring). The target ring may differ from f's ring.
inline Poly compose(const Poly& f, std::span<const Poly> images, const RingPtr& target) {
  if (images.size() != f.ring()->nvars()) throw Error("compose: wrong number of images");
  const Field& k = target->field();
  if (!(f.field() == k)) throw ContextMismatch();
  std::vector<std::vector<Poly>> powers(images.size());
  auto power = [&](std::size_t i, unsigned n) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Poly::constant(target, Scalar(1)));
    while (cache.size() <= n) cache.push_back(cache.back() * images[i]);
    return cache[n];
  };
  Poly r(target);
  for (const auto& [e, c] : f.terms()) {
    Poly t = Poly::constant(target, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) t *= power(i, e[i]);
    }
    r += t;
  }
  return r;
}

/// Substitutes variable i by g (same ring).
inline Poly substitute(const Poly& f, std::size_t i, const Poly& g) {
  std::vector<Poly> images;
  for (std::size_t j = 0; j < f.ring()->nvars(); ++j) {
    images.push_back(j == i ? g : Poly::variable(f.ring(), j));
  }
  return compose(f, images, f.ring());
}

/// Moves f into another ring that contains all of f's variables by name.
inline Poly change_ring(const Poly& f, const RingPtr& target) {
  if (!(f.field() == target->field())) throw ContextMismatch();
  std::vector<std::size_t> map(f.ring()->nvars());
  for (std::size_t i = 0; i < map.size(); ++i) {
    auto j = target->find(f.ring()->var(i));
    if (!j) {
      if (f.degree_in(i) > 0) {
        throw Error("variable " + f.ring()->var(i) + " missing from target ring");
      }
      map[i] = ~std::size_t{0};
    } else {
      map[i] = *j;
    }
  }
  Poly r(target);
  for (const auto& [e, c] : f.terms()) {
    Exponents t(target->nvars(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) t[map[i]] += e[i];
    }
    r.add_term(t, c);
  }
  return r;
}

/// The ring with variable i removed.
inline RingPtr drop_variable(const RingPtr& ring, std::size_t i) {
  std::vector<std::string> vars = ring->vars();
  vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(i));
  return make_ring(ring->field(), std::move(vars));
}

/// f^(1/p) for an f all of whose exponents are divisible by p (char p).
/// Over F_p the Frobenius fixes constants, so only exponents change.
inline std::optional<Poly> frobenius_root(const Poly& f) {
  unsigned long p = f.field().characteristic();
  if (p == 0) return std::nullopt;
  Poly r(f.ring());
  for (const auto& [e, c] : f.terms()) {
    Exponents d = e;
    for (auto& v : d) {
      if (v % p) return std::nullopt;
      v /= static_cast<unsigned>(p);
    }
    r.add_term(d, f.field().frobenius_root(c));
  }
  return r;
}

/// Ordinary partial derivative in variable i.
inline Poly partial(const Poly& f, std::size_t i) { return hasse_derivative(f, i, 1); }

/// Multivariate division by a list of divisors in grlex order.
/// Returns quotients and remainder with f = sum q_i g_i + r.
struct DivisionResult {
  std::vector<Poly> quotients;
  Poly remainder;
};

inline bool divides_monomial(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

inline DivisionResult divide(const Poly& f, std::span<const Poly> divisors) {
  const Field& k = f.field();
  DivisionResult res;
  for (const auto& g : divisors) {
    f.check_ring(g);
    if (g.is_zero()) throw Error("division by zero polynomial");
    res.quotients.emplace_back(f.ring());
  }
  res.remainder = Poly(f.ring());
  Poly p = f;
  while (!p.is_zero()) {
    const Exponents lt = p.leading_exponents();
    const Scalar lc = p.leading_coefficient();
    bool reduced = false;
    for (std::size_t i = 0; i < divisors.size(); ++i) {
      const Poly& g = divisors[i];
      if (!divides_monomial(g.leading_exponents(), lt)) continue;
      Exponents q = lt;
      for (std::size_t j = 0; j < q.size(); ++j) q[j] -= g.leading_exponents()[j];
      Poly mono = Poly::monomial(f.ring(), q, k.div(lc, g.leading_coefficient()));
      res.quotients[i] += mono;
      p -= mono * g;
      reduced = true;
      break;
    }
    if (!reduced) {
      res.remainder.add_term(lt, lc);
      Poly lead = Poly::monomial(f.ring(), lt, lc);
      p -= lead;
    }
  }
  return res;
}

/// f / g when g divides f exactly, otherwise nullopt.
inline std::optional<Poly> exact_quotient(const Poly& f, const Poly& g) {
  const Poly divisors[] = {g};
  auto r = divide(f, divisors);
  if (!r.remainder.is_zero()) return std::nullopt;
  return r.quotients[0];
}

/// Minimal exponent of x_i over the terms of f (the power of x_i that
/// divides f); infinity is reported as ~0u for f = 0.
inline unsigned min_exponent(const Poly& f, std::size_t i) {
  unsigned m = ~0u;
  for (const auto& [e, c] : f.terms()) m = std::min(m, e[i]);
  return m;
}

}  // namespace rees
