#pragma once

// Rees algebras presented by weighted generators (f, w): the algebra
// O_V[f_1 W^w_1, ..., f_s W^w_s]. Weights are positive rationals; a
// weight a/b stands for f^b in degree a.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rees/gcd.hpp"
#include "rees/parse.hpp"
#include "rees/polynomial.hpp"

namespace rees {

struct Generator {
  Poly poly;
  Scalar weight;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Side channel for facts a computation drops on the floor (unit
/// generators pruned, units discarded by elimination).
struct Diagnostics {
  std::vector<std::string> notes;
  void add(std::string note) { notes.push_back(std::move(note)); }
};

class ReesAlg {
public:
  ReesAlg() = default;
  explicit ReesAlg(RingPtr ring) : ring_(std::move(ring)) {}

  ReesAlg(RingPtr ring, std::vector<Generator> gens) : ring_(std::move(ring)) {
    for (auto& g : gens) add(std::move(g.poly), g.weight);
  }

  void add(Poly f, const Scalar& weight) {
    if (!same_ring(f.ring(), ring_)) throw ContextMismatch();
    if (f.is_zero()) throw Error("Rees algebra generator must be nonzero");
    if (weight <= 0) throw Error("Rees algebra weight must be positive");
    Scalar w = weight;
    w.canonicalize();
    gens_.push_back(Generator{std::move(f), w});
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Generator>& gens() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const Generator& operator[](std::size_t i) const { return gens_.at(i); }

  bool integer_weights() const {
    return std::all_of(gens_.begin(), gens_.end(),
                       [](const Generator& g) { return g.weight.get_den() == 1; });
  }

  /// Index of a generator equal to c*f (c a nonzero scalar) with weight at
  /// least w, if any.
  std::optional<std::size_t> find_dominating(const Poly& f, const Scalar& w) const {
    Poly mf = f.monic();
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (gens_[i].weight >= w && gens_[i].poly.nterms() == f.nterms() && gens_[i].poly.monic() == mf) {
        return i;
      }
    }
    return std::nullopt;
  }

  /// Generator (c*f, w) present for some nonzero scalar c.
  bool contains(const Poly& f, const Scalar& w) const {
    Poly mf = f.monic();
    return std::any_of(gens_.begin(), gens_.end(), [&](const Generator& g) {
      return g.weight == w && g.poly.monic() == mf;
    });
  }

  friend bool operator==(const ReesAlg& a, const ReesAlg& b) {
    return same_ring(a.ring_, b.ring_) && a.gens_ == b.gens_;
  }

private:
  RingPtr ring_;
  std::vector<Generator> gens_;
};

inline unsigned integer_weight(const Generator& g) {
  if (g.weight.get_den() != 1 || !g.weight.get_num().fits_uint_p()) {
    throw Error("operation needs integer weights; got " + g.weight.get_str() +
                " (apply normalize_weights first)");
  }
  return static_cast<unsigned>(g.weight.get_num().get_ui());
}

/// ord_x G = min over generators of nu_x(f)/w; infinity for the empty algebra.
inline ExtRational ord_at(const ReesAlg& G, const Point& x) {
  ExtRational best = ExtRational::infinity();
  for (const auto& g : G.gens()) {
    ExtRational nu = order_at(g.poly, x);
    if (nu.is_infinite()) continue;
    ExtRational r(Scalar(nu.value() / g.weight));
    if (r < best) best = r;
  }
  return best;
}

inline bool is_singular_at(const ReesAlg& G, const Point& x) {
  return ord_at(G, x) >= ExtRational(1);
}

inline bool is_simple_at(const ReesAlg& G, const Point& x) {
  ExtRational o = ord_at(G, x);
  if (o < ExtRational(1)) throw NotSingular("point " + x.str() + " is not in Sing G");
  return o == ExtRational(1);
}

namespace detail {

inline void push_unique(std::vector<Poly>& out, const Poly& h) {
  Poly mh = h.monic();
  for (const Poly& q : out) {
    if (q.nterms() == h.nterms() && q.monic() == mh) return;
  }
  out.push_back(h);
}

}  // namespace detail

/// Polynomials whose common zero set is Sing G: every Hasse derivative of
/// order < n of each generator (f, n).
inline std::vector<Poly> sing_presentation(const ReesAlg& G) {
  std::vector<Poly> out;
  const std::size_t d = G.ring()->nvars();
  for (const auto& g : G.gens()) {
    unsigned n = integer_weight(g);
    for (const auto& alpha : multi_indices(d, 0, n - 1)) {
      Poly h = hasse_derivative(g.poly, alpha);
      if (!h.is_zero()) detail::push_unique(out, h);
    }
  }
  return out;
}

inline bool presentation_vanishes_at(std::span<const Poly> pres, const Point& x) {
  return std::all_of(pres.begin(), pres.end(), [&](const Poly& p) { return p.evaluate(x) == 0; });
}

namespace detail {

/// Closes G under the given derivative multi-indices generator by
/// generator. Derivatives of derivatives are scalar multiples of
/// derivatives of the originals, so the worklist drains.
template <class IndexFn>
ReesAlg close_under(const ReesAlg& G, IndexFn indices_for, Diagnostics* diag) {
  ReesAlg out = G;
  std::size_t next = 0;
  while (next < out.size()) {
    const Generator g = out[next++];
    const unsigned n = integer_weight(g);
    for (const auto& alpha : indices_for(n)) {
      Poly h = hasse_derivative(g.poly, alpha);
      if (h.is_zero()) continue;
      const Scalar w = n - total_degree(alpha);
      if (h.is_unit()) {
        if (diag) {
          diag->add("pruned unit derivative of " + g.poly.str() + " in weight " + w.get_str() +
                    "; Sing is empty");
        }
        continue;
      }
      if (out.find_dominating(h, w)) continue;
      out.add(std::move(h), w);
    }
  }
  return out;
}

}  // namespace detail

/// Differential closure: adjoins (Delta^alpha f, n - |alpha|) for
/// 0 < |alpha| < n, iterated to a fixed point up to scalar multiples.
inline ReesAlg diff_closure(const ReesAlg& G, Diagnostics* diag = nullptr) {
  const std::size_t d = G.ring()->nvars();
  return detail::close_under(
      G, [d](unsigned n) { return n > 1 ? multi_indices(d, 1, n - 1) : std::vector<Exponents>{}; },
      diag);
}

/// Relative differential closure along the fibres of the projection that
/// forgets var: only derivatives in var.
inline ReesAlg rel_diff_closure(const ReesAlg& G, std::size_t var, Diagnostics* diag = nullptr) {
  const std::size_t d = G.ring()->nvars();
  if (var >= d) throw Error("rel_diff_closure: variable index out of range");
  return detail::close_under(
      G,
      [d, var](unsigned n) {
        std::vector<Exponents> out;
        for (unsigned k = 1; k < n; ++k) {
          Exponents a(d, 0);
          a[var] = k;
          out.push_back(a);
        }
        return out;
      },
      diag);
}

inline ReesAlg rel_diff_closure(const ReesAlg& G, const std::string& var, Diagnostics* diag = nullptr) {
  return rel_diff_closure(G, G.ring()->index_of(var), diag);
}

/// True when every Delta_var^k g (0 < k < weight) that is neither zero nor
/// a unit is already a generator (up to scalar) of weight >= weight - k.
inline bool is_rel_diff_closed(const ReesAlg& G, std::size_t var) {
  for (const auto& g : G.gens()) {
    unsigned n = integer_weight(g);
    for (unsigned k = 1; k < n; ++k) {
      Poly h = hasse_derivative(g.poly, var, k);
      if (h.is_zero() || h.is_unit()) continue;
      if (!G.find_dominating(h, Scalar(n - k))) return false;
    }
  }
  return true;
}

/// Twisted algebra G(omega): each (f, w) becomes (f, omega*w).
inline ReesAlg twist(const ReesAlg& G, const Scalar& omega) {
  if (omega <= 0) throw Error("twist: omega must be positive");
  ReesAlg out(G.ring());
  for (const auto& g : G.gens()) out.add(g.poly, g.weight * omega);
  return out;
}

/// Replaces (f, a/b) by (f^b, a); ord_at is unchanged everywhere.
inline ReesAlg normalize_weights(const ReesAlg& G) {
  ReesAlg out(G.ring());
  for (const auto& g : G.gens()) {
    const mpz_class& den = g.weight.get_den();
    if (den == 1) {
      out.add(g.poly, g.weight);
    } else {
      out.add(g.poly.pow(den.get_ui()), Scalar(g.weight.get_num()));
    }
  }
  return out;
}

/// G1 (.) G2: the smallest algebra containing both.
inline ReesAlg odot(const ReesAlg& G1, const ReesAlg& G2) {
  if (!same_ring(G1.ring(), G2.ring())) throw ContextMismatch();
  ReesAlg out = G1;
  for (const auto& g : G2.gens()) out.add(g.poly, g.weight);
  return out;
}

/// Reduced equation of the codimension-one part of Sing G through x, when
/// there is one. At a simple point the returned hypersurface is smooth.
inline std::optional<Poly> codim1_component_through(const ReesAlg& G, const Point& x) {
  auto pres = sing_presentation(G);
  if (pres.empty()) return std::nullopt;
  Poly g(G.ring());
  for (const Poly& p : pres) {
    g = poly_gcd(g, p);
    if (g.is_unit()) return std::nullopt;
  }
  if (g.is_constant()) return std::nullopt;
  Poly r = radical(g);
  if (r.evaluate(x) != 0) return std::nullopt;
  if (is_singular_at(G, x) && ord_at(G, x) == ExtRational(1) && order_at(r, x) != ExtRational(1)) {
    throw Error("internal: codimension-one component through the simple point " + x.str() +
                " is not smooth");
  }
  return r;
}

/// Pulls generators back along a coordinate projection: same polynomials
/// read in a ring that contains all the variables.
inline ReesAlg pull_back(const ReesAlg& G, const RingPtr& target) {
  ReesAlg out(target);
  for (const auto& g : G.gens()) out.add(change_ring(g.poly, target), g.weight);
  return out;
}

// Text form:
//   field F2
//   vars X Y Z
//   gen 2 Z^2+Y^7+X^4*Y
inline std::string serialize(const ReesAlg& G) {
  std::ostringstream os;
  os << "field " << G.ring()->field().name() << "\n";
  os << "vars";
  for (const auto& v : G.ring()->vars()) os << " " << v;
  os << "\n";
  for (const auto& g : G.gens()) os << "gen " << g.weight.get_str() << " " << g.poly.str() << "\n";
  return os.str();
}

inline ReesAlg parse_rees(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::optional<Field> field;
  std::optional<std::vector<std::string>> vars;
  RingPtr ring;
  ReesAlg G;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    if (key == "field") {
      std::string f;
      ls >> f;
      field = parse_field(f);
    } else if (key == "vars") {
      vars.emplace();
      std::string v;
      while (ls >> v) vars->push_back(v);
    } else if (key == "gen") {
      if (!field || !vars) throw ParseError("gen before field/vars header", lineno);
      if (!ring) {
        ring = make_ring(*field, *vars);
        G = ReesAlg(ring);
      }
      std::string w;
      ls >> w;
      std::string rest;
      std::getline(ls, rest);
      G.add(parse_poly(rest, ring), parse_scalar(w));
    } else {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
  }
  if (!ring) {
    if (!field || !vars) throw ParseError("missing field/vars header");
    G = ReesAlg(make_ring(*field, *vars));
  }
  return G;
}

}  // namespace rees
