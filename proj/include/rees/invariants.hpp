#pragma once

// Pointwise invariants: orders after m eliminations, the t-function, the
// twisted algebra attached to a level, and the stratifying tuple gamma.

#include <nlohmann/json.hpp>

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "rees/transform.hpp"

namespace rees {

/// Which variable to eliminate next: the first name in `preference`
/// that lives in the ring and offers a transversal; otherwise ring
/// variables from last to first.
struct ChainPolicy {
  std::vector<std::string> preference;
  EliminationMode mode = EliminationMode::passthrough;
  /// Restrict to exactly the preference list (no fallback).
  bool strict = false;
};

namespace detail {

inline std::vector<std::string> variable_order(const RingPtr& ring, const ChainPolicy& policy) {
  std::vector<std::string> order;
  for (const auto& v : policy.preference) {
    if (ring->find(v)) order.push_back(v);
  }
  if (policy.strict) return order;
  for (std::size_t i = ring->nvars(); i-- > 0;) {
    const auto& v = ring->var(i);
    if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
  }
  return order;
}

/// One elimination from the diff closure of G at x along the first
/// admissible variable of the policy.
inline ElimStage eliminate_one(const ReesAlg& G, const Point& x, std::size_t stage,
                               const ChainPolicy& policy) {
  ReesAlg closed = diff_closure(normalize_weights(G));
  if (!is_simple_at(closed, x)) throw NotSimple("point " + x.str() + " is not simple at stage " + std::to_string(stage));
  auto order = variable_order(G.ring(), policy);
  for (const auto& v : order) {
    const std::size_t vi = closed.ring()->index_of(v);
    auto cands = transversal_candidates(closed, x, vi);
    if (cands.empty()) continue;
    const Transversal& t = cands[default_transversal_choice(cands)];
    return ElimStage{v, t, eliminate(closed, t, policy.mode), x.without(vi)};
  }
  std::string tried;
  for (const auto& v : order) tried += (tried.empty() ? "" : "|") + v;
  throw NoTransversal(stage, tried.empty() ? std::string("-") : tried);
}

}  // namespace detail

/// Elimination chain of length m picking variables by policy.
inline ElimChain auto_chain(const ReesAlg& G, const Point& x, unsigned m, const ChainPolicy& policy = {}) {
  ElimChain chain{G, x, {}};
  for (unsigned s = 0; s < m; ++s) {
    chain.stages.push_back(detail::eliminate_one(chain.final_algebra(), chain.final_point(), s + 1, policy));
  }
  return chain;
}

/// ord^(d-m) at x: ord of the algebra obtained after m eliminations.
inline ExtRational ord_dm(const ReesAlg& G, const Point& x, unsigned m, const ChainPolicy& policy = {}) {
  if (m == 0) return ord_at(G, x);
  ElimChain c = auto_chain(G, x, m, policy);
  return ord_at(c.final_algebra(), c.final_point());
}

/// ord^(d-m) through an explicit variable list.
inline ExtRational ord_dm(const ReesAlg& G, const Point& x, const std::vector<std::string>& vars,
                          EliminationMode mode = EliminationMode::passthrough) {
  ChainOptions opts;
  opts.mode = mode;
  ElimChain c = eliminate_chain(G, x, vars, opts);
  return ord_at(c.final_algebra(), c.final_point());
}

struct TValue {
  ExtRational word;
  unsigned old_count = 0;

  friend bool operator==(const TValue&, const TValue&) = default;
  friend auto operator<=>(const TValue& a, const TValue& b) {
    if (auto c = a.word <=> b.word; c != 0) return c;
    return a.old_count <=> b.old_count;
  }
  std::string str() const { return "(" + word.str() + "," + std::to_string(old_count) + ")"; }
};

/// t = (w-ord, number of old divisors through x). Old divisors are those
/// already present at the stage s0 where the max w-ord reached its current value.
inline TValue t_fn(const BasicObject& B, const Point& x) {
  TValue t{w_ord(B, x), 0};
  const unsigned s0 = stable_stage(B);
  for (const Divisor& d : B.divisors) {
    if (d.birth_stage <= s0 && x[B.ring()->index_of(d.var)] == 0) ++t.old_count;
  }
  return t;
}

struct TildeResult {
  ReesAlg algebra;
  ExtRational omega;
  ElimChain chain;
  bool singular_at_x = false;
  unsigned tau = 0;
  bool tau_determined = true;
};

/// G~ = Diff(G (.) beta*(R(omega))) with omega = ord^(d-m) at x.
inline TildeResult tilde(const ReesAlg& G, const Point& x, unsigned m, const ChainPolicy& policy = {},
                         Diagnostics* diag = nullptr) {
  TildeResult res;
  ReesAlg base = diff_closure(normalize_weights(G), diag);
  if (m == 0) {
    res.chain = ElimChain{base, x, {}};
    res.omega = ord_at(base, x);
  } else {
    res.chain = auto_chain(base, x, m, policy);
    res.omega = ord_at(res.chain.final_algebra(), res.chain.final_point());
  }
  if (res.omega.is_infinite()) {
    throw Error("tilde: ord after " + std::to_string(m) + " eliminations is infinite at " + x.str());
  }
  if (res.omega <= ExtRational(1)) {
    res.algebra = base;
  } else {
    ReesAlg down = twist(res.chain.final_algebra(), res.omega.value());
    res.algebra = diff_closure(normalize_weights(odot(base, pull_back(down, base.ring()))), diag);
  }
  res.singular_at_x = is_singular_at(res.algebra, x);
  if (res.singular_at_x) {
    try {
      res.tau = tau_at(res.algebra, x).tau;
    } catch (const NonAdditiveInitialForm&) {
      res.tau_determined = false;
    }
  }
  return res;
}

struct GammaValue {
  std::vector<ExtRational> coords;

  friend bool operator==(const GammaValue&, const GammaValue&) = default;
  friend auto operator<=>(const GammaValue& a, const GammaValue& b) {
    return std::lexicographical_compare_three_way(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                                  b.coords.end());
  }
  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? ", " : "") + coords[i].str();
    return s + ")";
  }
};

namespace detail {

inline std::vector<ExtRational> gamma_rec(const ReesAlg& G, const Point& x, const ChainPolicy& policy,
                                          std::vector<ExtRational>& prefix, Diagnostics* diag) {
  const std::size_t d = G.ring()->nvars();
  if (d == 0) return {};
  ReesAlg D = diff_closure(normalize_weights(G), diag);
  if (D.empty()) return std::vector<ExtRational>(d, ExtRational::infinity());
  const ExtRational o = ord_at(D, x);
  if (o < ExtRational(1)) throw NotSingular("gamma: point " + x.str() + " is not in Sing");
  if (o > ExtRational(1)) {
    // Make x simple by twisting with its own order; the twist's gamma
    // starts with 1, which the order replaces.
    ReesAlg T = diff_closure(normalize_weights(odot(D, twist(D, o.value()))), diag);
    prefix.push_back(o);
    auto tail = gamma_rec(T, x, policy, prefix, diag);
    prefix.pop_back();
    tail.front() = o;
    return tail;
  }
  std::vector<ExtRational> out = {ExtRational(1)};
  if (d == 1) return out;
  if (codim1_component_through(D, x)) {
    out.resize(d, ExtRational::infinity());
    return out;
  }
  prefix.push_back(ExtRational(1));
  ElimStage st = [&] {
    try {
      return eliminate_one(D, x, 1, policy);
    } catch (const NoTransversal& e) {
      std::string partial = "(";
      for (std::size_t i = 0; i < prefix.size(); ++i) partial += (i ? ", " : "") + prefix[i].str();
      throw NoTransversal(e.stage(), e.var(), "partial gamma " + partial + ")");
    }
  }();
  auto tail = gamma_rec(st.algebra, st.point, policy, prefix, diag);
  prefix.pop_back();
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace detail

inline GammaValue gamma(const ReesAlg& G, const Point& x, const ChainPolicy& policy = {},
                        Diagnostics* diag = nullptr) {
  std::vector<ExtRational> prefix;
  return GammaValue{detail::gamma_rec(G, x, policy, prefix, diag)};
}

struct MonomialCase {
  bool monomial = false;
  /// Per generator, the exponent of each divisor equation.
  std::vector<std::vector<unsigned>> exponents;
  std::vector<std::string> divisor_vars;
  std::string witness;
};

/// Monomial case: every generator is a divisor monomial times a unit, or
/// at least the max w-ord over singular probes is 0.
inline MonomialCase monomial_case(const BasicObject& B) {
  MonomialCase r;
  for (const Divisor& d : B.divisors) r.divisor_vars.push_back(d.var);
  if (B.algebra.empty()) {
    r.monomial = true;
    r.witness = "empty algebra";
    return r;
  }
  bool all_units = true;
  for (const auto& g : B.algebra.gens()) {
    auto f = factor_exceptional(g.poly, B.divisors);
    r.exponents.push_back(f.exponents);
    all_units = all_units && f.residual.is_constant();
  }
  if (all_units) {
    r.monomial = true;
    r.witness = "every residual is a nonzero constant";
    return r;
  }
  bool any_singular = false;
  ExtRational best(0);
  for (const Point& p : probe_points(B)) {
    if (!is_singular_at(B.algebra, p)) continue;
    any_singular = true;
    best = std::max(best, w_ord(B, p));
  }
  if (!B.divisors.empty() && any_singular && best == ExtRational(0)) {
    r.monomial = true;
    r.witness = "max w-ord over singular probes is 0";
  } else {
    r.witness = any_singular ? "max w-ord over singular probes is " + best.str() : "no singular probe";
  }
  return r;
}

/// One row of a stratification table.
struct StrataRow {
  Point point;
  bool singular = false;
  ExtRational ord;
  ExtRational word;
  TValue t;
  std::optional<GammaValue> gamma;
  std::optional<unsigned> tau;
  std::string note;
};

inline std::vector<StrataRow> stratify(const BasicObject& B, const ChainPolicy& policy = {}) {
  std::vector<StrataRow> rows;
  for (const Point& p : probe_points(B)) {
    StrataRow r;
    r.point = p;
    r.ord = ord_at(B.algebra, p);
    r.singular = r.ord >= ExtRational(1);
    if (r.singular) {
      r.word = w_ord(B, p);
      r.t = t_fn(B, p);
      try {
        r.gamma = gamma(B.algebra, p, policy);
      } catch (const Error& e) {
        r.note = e.what();
      }
      try {
        r.tau = tau_at(diff_closure(normalize_weights(B.algebra)), p).tau;
      } catch (const Error& e) {
        if (r.note.empty()) r.note = e.what();
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string format_table(const std::vector<StrataRow>& rows) {
  std::vector<std::vector<std::string>> cells = {{"point", "ord", "w-ord", "t", "gamma", "tau"}};
  for (const auto& r : rows) {
    if (!r.singular) {
      cells.push_back({r.point.str(), r.ord.str(), "-", "-", "-", "-"});
      continue;
    }
    cells.push_back({r.point.str(), r.ord.str(), r.word.str(), r.t.str(),
                     r.gamma ? r.gamma->str() : "?", r.tau ? std::to_string(*r.tau) : "?"});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string c = row[i];
      if (i + 1 < row.size()) c.resize(width[i] + 2, ' ');
      line += c;
    }
    os << line << "\n";
  }
  return os.str();
}

inline nlohmann::json to_json(const StrataRow& r) {
  nlohmann::json j;
  j["point"] = r.point.str();
  j["singular"] = r.singular;
  j["ord"] = r.ord.str();
  if (r.singular) {
    j["w_ord"] = r.word.str();
    j["t"] = {r.t.word.str(), r.t.old_count};
    if (r.gamma) {
      nlohmann::json g = nlohmann::json::array();
      for (const auto& c : r.gamma->coords) g.push_back(c.str());
      j["gamma"] = g;
    }
    if (r.tau) j["tau"] = *r.tau;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace rees
