#pragma once

// Elimination algebras along coordinate projections.
//
// A transversal generator (F, n) is monic of degree n in the eliminated
// variable Z. Multiplication by a generator g on the free module
// S[Z]/(F) (basis 1, Z, ..., Z^(n-1)) has a characteristic polynomial
// T^n + g_1 T^(n-1) + ... + g_n; the coefficients g_j, in weight j*m,
// generate the elimination algebra on the base.

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rees/groebner.hpp"
#include "rees/matrix.hpp"
#include "rees/rees_algebra.hpp"

namespace rees {

struct Transversal {
  std::size_t var = 0;
  std::size_t gen_index = 0;
  unsigned degree = 0;
  Poly monic_form;
  std::optional<Point> anchor;
};

enum class EliminationMode { passthrough, charpoly_all };

inline std::string to_string(EliminationMode m) {
  return m == EliminationMode::passthrough ? "passthrough" : "charpoly-all";
}

namespace detail {

/// Leading coefficient of f in variable v when it is a nonzero constant.
inline std::optional<Scalar> constant_leading_coefficient(const Poly& f, std::size_t v) {
  auto coeffs = coefficients_in(f, v);
  if (coeffs.empty()) return std::nullopt;
  const Poly& lc = coeffs.back();
  if (!lc.is_unit()) return std::nullopt;
  return lc.constant_term();
}

/// Remainder of g modulo a polynomial F that is monic in v.
inline Poly reduce_mod_monic(Poly g, const Poly& F, std::size_t v) {
  const int n = F.degree_in(v);
  while (!g.is_zero() && g.degree_in(v) >= n) {
    const int d = g.degree_in(v);
    Poly lc = coefficients_in(g, v).back();
    Exponents shift(g.ring()->nvars(), 0);
    shift[v] = static_cast<unsigned>(d - n);
    g -= lc * Poly::monomial(g.ring(), shift, Scalar(1)) * F;
  }
  return g;
}

}  // namespace detail

/// Builds a transversal from generator gen_index without a point check.
inline Transversal make_transversal(const ReesAlg& G, std::size_t gen_index, std::size_t var) {
  const Generator& g = G[gen_index];
  const unsigned n = integer_weight(g);
  if (g.poly.degree_in(var) != static_cast<int>(n)) {
    throw Error("transversal: generator " + std::to_string(gen_index) + " has degree " +
                std::to_string(g.poly.degree_in(var)) + " in " + G.ring()->var(var) +
                ", weight " + std::to_string(n));
  }
  auto lc = detail::constant_leading_coefficient(g.poly, var);
  if (!lc) {
    throw Error("transversal: leading coefficient in " + G.ring()->var(var) +
                " is not a nonzero constant");
  }
  return Transversal{var, gen_index, n, g.poly.scaled(G.ring()->field().inv(*lc)), std::nullopt};
}

/// Generators (f, n) with nu_x(f) = n, deg_var f = n and constant leading
/// coefficient, normalized to monic. Empty means no admissible
/// elimination in var without a coordinate change.
inline std::vector<Transversal> transversal_candidates(const ReesAlg& G, const Point& x,
                                                       std::size_t var) {
  if (var >= G.ring()->nvars()) throw Error("transversal_candidates: bad variable index");
  if (!is_simple_at(G, x)) throw NotSimple("point " + x.str() + " is not simple");
  std::vector<Transversal> out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Generator& g = G[i];
    if (g.weight.get_den() != 1) continue;
    const long n = g.weight.get_num().get_si();
    if (g.poly.degree_in(var) != n) continue;
    if (!detail::constant_leading_coefficient(g.poly, var)) continue;
    if (order_at(g.poly, x) != ExtRational(n)) continue;
    Transversal t = make_transversal(G, i, var);
    t.anchor = x;
    out.push_back(std::move(t));
  }
  return out;
}

/// Matrix of multiplication by g on S[Z]/(F) in the basis 1, Z, ..., Z^(n-1);
/// entries live in the ring without Z.
inline PolyMatrix multiplication_matrix(const Poly& g, const Poly& F, std::size_t var,
                                        const RingPtr& base) {
  const auto n = static_cast<std::size_t>(F.degree_in(var));
  PolyMatrix m(n, std::vector<Poly>(n, Poly(base)));
  Poly zpow = Poly::constant(g.ring(), Scalar(1));
  const Poly z = Poly::variable(g.ring(), var);
  Poly cur = detail::reduce_mod_monic(g, F, var);
  for (std::size_t j = 0; j < n; ++j) {
    auto coeffs = coefficients_in(cur, var);
    for (std::size_t i = 0; i < coeffs.size() && i < n; ++i) {
      m[i][j] = change_ring(coeffs[i], base);
    }
    cur = detail::reduce_mod_monic(cur * z, F, var);
  }
  return m;
}

/// Characteristic-polynomial coefficients g_1..g_n of multiplication by g.
inline std::vector<Poly> charpoly_coefficients(const Poly& g, const Transversal& t,
                                               const RingPtr& base) {
  auto c = charpoly(multiplication_matrix(g, t.monic_form, t.var, base), base);
  c.erase(c.begin());
  return c;
}

inline ReesAlg eliminate(const ReesAlg& G, const Transversal& t,
                         EliminationMode mode = EliminationMode::passthrough,
                         Diagnostics* diag = nullptr) {
  const Poly& F = t.monic_form;
  if (!same_ring(F.ring(), G.ring())) throw ContextMismatch();
  if (F.degree_in(t.var) != static_cast<int>(t.degree) || t.degree == 0) {
    throw Error("eliminate: transversal has wrong degree");
  }
  auto lc = detail::constant_leading_coefficient(F, t.var);
  if (!lc || *lc != 1) throw Error("eliminate: transversal is not monic");
  if (!is_rel_diff_closed(G, t.var)) {
    throw Error("eliminate: algebra is not closed under derivatives in " + G.ring()->var(t.var) +
                " (apply reldiffclose first)");
  }
  RingPtr base = drop_variable(G.ring(), t.var);
  ReesAlg out(base);
  auto emit = [&](Poly h, const Scalar& w) {
    if (h.is_zero()) return;
    if (h.is_unit()) {
      if (diag) diag->add("discarded unit coefficient in weight " + w.get_str());
      return;
    }
    if (out.find_dominating(h, w)) return;
    out.add(std::move(h), w);
  };
  for (const auto& g : G.gens()) {
    if (mode == EliminationMode::passthrough && !g.poly.involves(t.var)) {
      emit(change_ring(g.poly, base), g.weight);
      continue;
    }
    auto coeffs = charpoly_coefficients(g.poly, t, base);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      emit(std::move(coeffs[j]), g.weight * static_cast<long>(j + 1));
    }
  }
  return out;
}

struct ElimStage {
  std::string var;
  Transversal transversal;
  ReesAlg algebra;  // downstairs algebra produced by this stage
  Point point;      // image point on the smaller ring
};

struct ElimChain {
  ReesAlg source;
  Point source_point;
  std::vector<ElimStage> stages;

  const ReesAlg& final_algebra() const { return stages.empty() ? source : stages.back().algebra; }
  const Point& final_point() const { return stages.empty() ? source_point : stages.back().point; }
};

struct ChainOptions {
  EliminationMode mode = EliminationMode::passthrough;
  /// Picks one transversal out of the candidates at a stage; defaults to the
  /// first candidate of least degree.
  std::function<std::size_t(std::size_t stage, const std::vector<Transversal>&)> choose;
};

inline std::size_t default_transversal_choice(const std::vector<Transversal>& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].degree < c[best].degree) best = i;
  }
  return best;
}

/// Iterated elimination: at each stage close the current algebra under
/// derivatives, pick a transversal in the next variable at the image
/// point, and eliminate.
inline ElimChain eliminate_chain(const ReesAlg& G, const Point& x,
                                 const std::vector<std::string>& vars,
                                 const ChainOptions& opts = {}, Diagnostics* diag = nullptr) {
  ElimChain chain{G, x, {}};
  ReesAlg cur = G;
  Point pt = x;
  for (std::size_t s = 0; s < vars.size(); ++s) {
    ReesAlg closed = diff_closure(normalize_weights(cur), diag);
    auto var = closed.ring()->find(vars[s]);
    if (!var) throw Error("eliminate_chain: variable " + vars[s] + " not in the current ring");
    if (!is_singular_at(closed, pt)) {
      throw NotSingular("image point " + pt.str() + " is not singular at stage " + std::to_string(s + 1));
    }
    if (!is_simple_at(closed, pt)) {
      throw NotSimple("image point " + pt.str() + " is not simple at stage " + std::to_string(s + 1));
    }
    auto cands = transversal_candidates(closed, pt, *var);
    if (cands.empty()) throw NoTransversal(s + 1, vars[s]);
    std::size_t pick = opts.choose ? opts.choose(s, cands) : default_transversal_choice(cands);
    const Transversal& t = cands.at(pick);
    ReesAlg down = eliminate(closed, t, opts.mode, diag);
    pt = pt.without(*var);
    chain.stages.push_back(ElimStage{vars[s], t, down, pt});
    cur = std::move(down);
  }
  return chain;
}

inline std::string serialize(const ElimChain& chain) {
  std::ostringstream os;
  os << "chain stages " << chain.stages.size() << " point " << chain.source_point.str() << "\n";
  for (std::size_t s = 0; s < chain.stages.size(); ++s) {
    const auto& st = chain.stages[s];
    os << "stage " << (s + 1) << " var " << st.var << " degree " << st.transversal.degree << "\n";
    os << "transversal " << st.transversal.monic_form.str() << "\n";
    os << "image " << st.point.str() << "\n";
    os << serialize(st.algebra);
  }
  return os.str();
}

/// tau_{G,x} with a certificate of independent linear forms and their
/// p-power levels.
struct TauResult {
  unsigned tau = 0;
  std::vector<std::pair<Poly, unsigned>> certificate;
};

namespace detail {

/// Rank of linear forms (coefficient vectors) over the field.
inline std::size_t linear_rank(const std::vector<Poly>& forms, const Field& k, std::size_t d) {
  std::vector<std::vector<Scalar>> rows;
  for (const Poly& f : forms) {
    std::vector<Scalar> row(d, Scalar(0));
    for (const auto& [e, c] : f.terms()) {
      for (std::size_t i = 0; i < d; ++i) {
        if (e[i] == 1) row[i] = c;
      }
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Scalar f = k.div(rows[r][col], rows[rank][col]);
      for (std::size_t c = col; c < d; ++c) rows[r][c] = k.sub(rows[r][c], k.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  return rank;
}

inline std::optional<unsigned> p_power_level(unsigned degree, unsigned long p) {
  unsigned e = 0;
  unsigned long v = 1;
  while (v < degree) {
    v *= p;
    ++e;
  }
  if (v != degree) return std::nullopt;
  return e;
}

}  // namespace detail

/// The tau invariant at x: the number of independent linear forms needed
/// to write the tangent ideal. Zero at non-simple points.
inline TauResult tau_at(const ReesAlg& G, const Point& x) {
  ExtRational o = ord_at(G, x);
  if (o < ExtRational(1)) throw NotSingular("tau: point " + x.str() + " is not in Sing G");
  TauResult res;
  if (o != ExtRational(1)) return res;

  const RingPtr& ring = G.ring();
  const Field& k = ring->field();
  const std::size_t d = ring->nvars();
  const unsigned long p = k.characteristic();

  struct Candidate {
    std::size_t gen;
    Poly form;
    unsigned degree;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Generator& g = G[i];
    if (g.weight.get_den() != 1) continue;
    if (order_at(g.poly, x) != ExtRational(g.weight)) continue;
    Poly in = initial_form(g.poly, x);
    cands.push_back({i, in, static_cast<unsigned>(in.degree())});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.degree < b.degree; });

  std::vector<Poly> linear;
  std::vector<Poly> ideal;  // generators l^(p^e) of the tangent ideal found so far
  for (const auto& c : cands) {
    if (p == 0) {
      if (c.degree != 1) continue;
      std::vector<Poly> trial = linear;
      trial.push_back(c.form);
      if (detail::linear_rank(trial, k, d) > linear.size()) {
        linear.push_back(c.form);
        res.certificate.emplace_back(c.form, 0);
      }
      continue;
    }
    auto level = detail::p_power_level(c.degree, p);
    if (!level) continue;
    Poly h = c.form;
    if (!ideal.empty()) h = normal_form(h, groebner_basis(ideal));
    if (h.is_zero()) continue;
    const unsigned q = c.degree;
    Poly lin(ring);
    for (const auto& [e, coeff] : h.terms()) {
      std::size_t nz = 0, which = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (e[i]) {
          ++nz;
          which = i;
        }
      }
      if (nz != 1 || e[which] != q) throw NonAdditiveInitialForm(c.gen, h.str());
      Exponents one(d, 0);
      one[which] = 1;
      lin.add_term(one, k.frobenius_root(coeff));
    }
    std::vector<Poly> trial = linear;
    trial.push_back(lin);
    if (detail::linear_rank(trial, k, d) > linear.size()) {
      linear.push_back(lin);
      res.certificate.emplace_back(lin, *level);
      ideal.push_back(lin.pow(q));
    }
  }
  res.tau = static_cast<unsigned>(linear.size());
  return res;
}

/// Determinant of multiplication by g on S[Z]/(F), its order at the image
/// point, and the least e' <= bound with det^(p^e') in <F, g>.
struct NestedDeterminant {
  Poly det;
  unsigned long weight = 0;
  ExtRational det_order;
  bool order_ok = false;
  bool membership_ok = false;
  unsigned membership_exponent = 0;
};

inline NestedDeterminant nested_determinant(const Transversal& t, const Poly& g, const Scalar& m,
                                            const Point& x, unsigned membership_bound = 4) {
  const Field& k = g.field();
  const unsigned long p = k.characteristic();
  if (p == 0) throw Error("nested_determinant needs positive characteristic");
  auto e = detail::p_power_level(t.degree, p);
  if (!e) throw Error("nested_determinant: transversal degree is not a power of p");
  if (m != Scalar(static_cast<long>(t.degree)) || order_at(g, x) != ExtRational(m)) {
    throw Error("nested_determinant: g must have order p^e = weight at the point");
  }
  RingPtr base = drop_variable(g.ring(), t.var);
  NestedDeterminant res;
  res.det = determinant(multiplication_matrix(g, t.monic_form, t.var, base), base);
  res.weight = static_cast<unsigned long>(t.degree) * t.degree;
  Point x1 = x.without(t.var);
  res.det_order = order_at(res.det, x1);
  res.order_ok = res.det_order == ExtRational(static_cast<long>(res.weight));

  const Poly up = change_ring(res.det, g.ring());
  const std::vector<Poly> gens = {t.monic_form, g};
  auto gb = groebner_basis(gens);
  Poly power = up;
  for (unsigned ep = 0; ep <= membership_bound; ++ep) {
    if (normal_form(power, gb).is_zero()) {
      res.membership_ok = true;
      res.membership_exponent = ep;
      return res;
    }
    power = power.pow(p);
  }
  throw ResourceLimit("nested_determinant: det^(p^e') not in <F, g> for e' <= " +
                      std::to_string(membership_bound));
}

}  // namespace rees
