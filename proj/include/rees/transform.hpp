#pragma once

// Monoidal transformations with coordinate centers, read in one affine
// chart at a time. Blowing up the center {v = 0 : v in C} in the chart
// of c in C substitutes v -> v*c for the other center variables; c then
// cuts out the new exceptional divisor.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "rees/elimination.hpp"

namespace rees {

struct Divisor {
  std::string var;
  unsigned birth_stage = 0;
  bool old = false;  // refreshed by refresh_divisor_ages

  friend bool operator==(const Divisor&, const Divisor&) = default;
};

struct CenterSpec {
  std::vector<std::string> vars;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? "," : "") + vars[i];
    return s + ")";
  }
};

/// (V, G, E) in one chart, with the max w-ord of every stage so far and
/// the probe points at which maxima are taken (the chart origin is always
/// a probe).
struct BasicObject {
  ReesAlg algebra;
  std::vector<Divisor> divisors;
  std::vector<ExtRational> word_history;
  unsigned stage = 0;
  std::vector<Point> probes;

  const RingPtr& ring() const { return algebra.ring(); }
};

/// Chart origin followed by the listed probes, without repeats.
inline std::vector<Point> probe_points(const BasicObject& B) {
  std::vector<Point> out = {Point::origin(B.ring()->nvars())};
  for (const Point& p : B.probes) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

/// Factor of f by the divisor variables: exponents and the residual.
struct ExceptionalFactorization {
  std::vector<unsigned> exponents;
  Poly residual;
};

inline ExceptionalFactorization factor_exceptional(const Poly& f, const std::vector<Divisor>& divs) {
  ExceptionalFactorization r{{}, f};
  for (const Divisor& d : divs) {
    auto res = divide_out(r.residual, Poly::variable(f.ring(), d.var));
    r.exponents.push_back(res.multiplicity);
    r.residual = std::move(res.quotient);
  }
  return r;
}

/// w-ord at x: min over generators of nu_x(f with divisor factors stripped)/weight.
inline ExtRational w_ord(const BasicObject& B, const Point& x) {
  if (!is_singular_at(B.algebra, x)) throw NotSingular("w_ord: point " + x.str() + " is not in Sing");
  ExtRational best = ExtRational::infinity();
  for (const auto& g : B.algebra.gens()) {
    Poly res = factor_exceptional(g.poly, B.divisors).residual;
    ExtRational nu = order_at(res, x);
    if (nu.is_infinite()) continue;
    ExtRational r(Scalar(nu.value() / g.weight));
    if (r < best) best = r;
  }
  return best;
}

/// Max w-ord over the singular probe points; 0 when none is singular.
inline ExtRational max_w_ord(const BasicObject& B) {
  ExtRational best(0);
  for (const Point& p : probe_points(B)) {
    if (!is_singular_at(B.algebra, p)) continue;
    ExtRational w = w_ord(B, p);
    if (w > best) best = w;
  }
  return best;
}

/// Smallest stage s0 from which the recorded max w-ord stays at its current value.
inline unsigned stable_stage(const BasicObject& B) {
  if (B.word_history.empty()) return 0;
  const ExtRational cur = B.word_history.back();
  unsigned s0 = static_cast<unsigned>(B.word_history.size() - 1);
  while (s0 > 0 && B.word_history[s0 - 1] == cur) --s0;
  return s0;
}

inline void refresh_divisor_ages(BasicObject& B) {
  const unsigned s0 = stable_stage(B);
  for (Divisor& d : B.divisors) d.old = d.birth_stage <= s0;
}

inline BasicObject make_basic_object(ReesAlg G, std::vector<Divisor> divisors = {},
                                     std::vector<Point> probes = {}) {
  BasicObject B{std::move(G), std::move(divisors), {}, 0, std::move(probes)};
  for (const Divisor& d : B.divisors) {
    if (!B.ring()->find(d.var)) throw Error("divisor variable " + d.var + " not in the ring");
  }
  B.word_history.push_back(max_w_ord(B));
  refresh_divisor_ages(B);
  return B;
}

struct PermissibilityReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Order of f along the coordinate subspace {v = 0 : v in vars}.
inline unsigned order_along(const Poly& f, const std::vector<std::size_t>& vars) {
  unsigned best = ~0u;
  for (const auto& [e, c] : f.terms()) {
    unsigned s = 0;
    for (std::size_t v : vars) s += e[v];
    best = std::min(best, s);
  }
  return best;
}

namespace detail {

inline std::vector<std::size_t> center_indices(const RingPtr& ring, const CenterSpec& c) {
  if (c.vars.empty()) throw Error("center must name at least one variable");
  std::vector<std::size_t> idx;
  for (const auto& v : c.vars) {
    auto i = ring->find(v);
    if (!i) throw Error("center variable " + v + " not in the ring");
    if (std::find(idx.begin(), idx.end(), *i) != idx.end()) throw Error("center variable " + v + " repeated");
    idx.push_back(*i);
  }
  return idx;
}

}  // namespace detail

inline PermissibilityReport check_permissible(const ReesAlg& G, const CenterSpec& c) {
  PermissibilityReport rep;
  auto idx = detail::center_indices(G.ring(), c);
  if (G.empty()) {
    rep.ok = false;
    rep.failures.push_back("empty algebra: Sing is the whole space, no center is permissible");
    return rep;
  }
  for (std::size_t i = 0; i < G.size(); ++i) {
    const unsigned n = integer_weight(G[i]);
    const unsigned o = order_along(G[i].poly, idx);
    if (o < n) {
      rep.ok = false;
      rep.failures.push_back("generator " + std::to_string(i) + " (" + G[i].poly.str() + ", " +
                             std::to_string(n) + ") has order " + std::to_string(o) +
                             " along the center");
    }
  }
  return rep;
}

inline PermissibilityReport check_permissible(const BasicObject& B, const CenterSpec& c) {
  return check_permissible(B.algebra, c);
}

/// Total transform pi*f in the chart of chart_var.
inline Poly chart_pullback(const Poly& f, const CenterSpec& c, const std::string& chart_var) {
  auto idx = detail::center_indices(f.ring(), c);
  const std::size_t cv = f.ring()->index_of(chart_var);
  if (std::find(idx.begin(), idx.end(), cv) == idx.end()) {
    throw Error("chart variable " + chart_var + " is not a center variable");
  }
  const Poly e = Poly::variable(f.ring(), cv);
  std::vector<Poly> images;
  for (std::size_t j = 0; j < f.ring()->nvars(); ++j) {
    Poly v = Poly::variable(f.ring(), j);
    bool in_center = std::find(idx.begin(), idx.end(), j) != idx.end();
    images.push_back(in_center && j != cv ? v * e : v);
  }
  return compose(f, images, f.ring());
}

/// pi*J / E^b; NotDivisible when the center is not permissible for (J, b).
inline Poly pair_transform(const Poly& J, unsigned b, const CenterSpec& c, const std::string& chart_var,
                           std::size_t gen_index = 0) {
  Poly total = chart_pullback(J, c, chart_var);
  Poly eb = Poly::variable(J.ring(), chart_var).pow(b);
  auto q = exact_quotient(total, eb);
  if (!q) {
    throw NotDivisible(gen_index, "pullback " + total.str() + " is not divisible by " + chart_var +
                                      "^" + std::to_string(b));
  }
  return *q;
}

/// pi*f with every factor of the exceptional equation removed.
inline Poly strict_transform(const Poly& f, const CenterSpec& c, const std::string& chart_var) {
  if (f.is_zero()) throw Error("strict transform of zero");
  Poly total = chart_pullback(f, c, chart_var);
  return divide_out(total, Poly::variable(f.ring(), chart_var)).quotient;
}

/// Weak transform of every generator, exactly by its weight.
inline ReesAlg weak_transform(const ReesAlg& G, const CenterSpec& c, const std::string& chart_var) {
  ReesAlg out(G.ring());
  for (std::size_t i = 0; i < G.size(); ++i) {
    out.add(pair_transform(G[i].poly, integer_weight(G[i]), c, chart_var, i), G[i].weight);
  }
  return out;
}

/// One chart of the blow-up. Divisors cut by variables other than the
/// chart variable keep their equations; the divisor cut by the chart
/// variable (if any) does not meet this chart and is dropped.
inline BasicObject blowup_chart(const BasicObject& B, const CenterSpec& c, const std::string& chart_var,
                                std::vector<Point> probes = {}) {
  auto rep = check_permissible(B, c);
  if (!rep.ok) {
    std::string msg = "center " + c.str() + " is not permissible:";
    for (const auto& f : rep.failures) msg += " " + f + ";";
    throw Error(msg);
  }
  BasicObject out;
  out.algebra = weak_transform(B.algebra, c, chart_var);
  for (const Divisor& d : B.divisors) {
    if (d.var != chart_var) out.divisors.push_back(d);
  }
  out.stage = B.stage + 1;
  out.divisors.push_back(Divisor{chart_var, out.stage, false});
  out.probes = std::move(probes);
  out.word_history = B.word_history;
  out.word_history.push_back(max_w_ord(out));
  refresh_divisor_ages(out);
  return out;
}

/// The upstairs and downstairs charts of one blow-up, and the ord
/// comparison at each singular probe of the upstairs chart.
struct CommuteCheck {
  Point upstairs_point;
  Point image_point;
  ExtRational eliminated_after;  // eliminate(transform G)
  ExtRational transformed_after; // transform(eliminate G)
  bool equal = false;
};

struct CommuteResult {
  BasicObject upstairs;
  BasicObject downstairs;
  ReesAlg eliminated_upstairs;  // elimination algebra of the transformed algebra
  std::vector<CommuteCheck> checks;
  bool ok = true;
};

inline CommuteResult commute_elimination(const BasicObject& B, const ElimChain& chain, const CenterSpec& c,
                                         const std::string& chart_var, std::vector<Point> probes = {},
                                         EliminationMode mode = EliminationMode::passthrough) {
  if (!same_ring(B.ring(), chain.source.ring())) throw ContextMismatch();
  std::vector<std::string> eliminated;
  for (const auto& st : chain.stages) eliminated.push_back(st.var);
  for (const auto& v : eliminated) {
    if (std::find(c.vars.begin(), c.vars.end(), v) == c.vars.end()) {
      throw Error("commute: eliminated variable " + v + " is not a center variable");
    }
    if (v == chart_var) {
      throw Error("commute: chart variable " + chart_var + " is eliminated; no downstairs chart matches");
    }
  }
  CenterSpec down_center;
  for (const auto& v : c.vars) {
    if (std::find(eliminated.begin(), eliminated.end(), v) == eliminated.end()) down_center.vars.push_back(v);
  }
  if (down_center.vars.empty()) throw Error("commute: the downstairs center would be empty");

  CommuteResult res;
  res.upstairs = blowup_chart(B, c, chart_var, probes);

  // Downstairs: divisors that survive the projection, probes projected.
  const ReesAlg& R = chain.final_algebra();
  std::vector<Divisor> down_divs;
  for (const Divisor& d : B.divisors) {
    if (R.ring()->find(d.var)) down_divs.push_back(d);
  }
  auto project = [&](const Point& p) {
    std::vector<Scalar> coords;
    for (std::size_t i = 0; i < B.ring()->nvars(); ++i) {
      if (R.ring()->find(B.ring()->var(i))) coords.push_back(p[i]);
    }
    return Point{coords};
  };
  std::vector<Point> down_probes;
  for (const Point& p : B.probes) down_probes.push_back(project(p));
  BasicObject Bd{R, down_divs, {}, B.stage, down_probes};
  // Earlier downstairs maxima are not tracked by the chain; only the
  // current one is known.
  Bd.word_history.assign(B.stage + 1, max_w_ord(Bd));
  refresh_divisor_ages(Bd);
  std::vector<Point> chart_down;
  for (const Point& p : probes) chart_down.push_back(project(p));
  res.downstairs = blowup_chart(Bd, down_center, chart_var, chart_down);

  // Upstairs elimination with the transformed transversals.
  ReesAlg U = res.upstairs.algebra;
  for (const auto& st : chain.stages) {
    const std::size_t v = U.ring()->index_of(st.var);
    U = rel_diff_closure(U, v);
    Poly F = pair_transform(change_ring(st.transversal.monic_form, B.ring()), st.transversal.degree, c,
                            chart_var);
    F = change_ring(F, U.ring());
    Transversal t{v, 0, st.transversal.degree, F, std::nullopt};
    U = eliminate(U, t, mode);
  }
  res.eliminated_upstairs = U;

  for (const Point& p : probe_points(res.upstairs)) {
    if (!is_singular_at(res.upstairs.algebra, p)) continue;
    CommuteCheck chk{p, project(p), ord_at(U, project(p)), ord_at(res.downstairs.algebra, project(p)), false};
    chk.equal = chk.eliminated_after == chk.transformed_after;
    res.ok = res.ok && chk.equal;
    res.checks.push_back(std::move(chk));
  }
  return res;
}

/// Tree of charts: each node records the center and chart that produced it.
struct LineageNode {
  int parent = -1;
  std::string label;
  CenterSpec center;
  std::string chart_var;
  BasicObject object;
};

class Lineage {
public:
  std::size_t add_root(std::string label, BasicObject B) {
    nodes_.push_back(LineageNode{-1, std::move(label), {}, {}, std::move(B)});
    return nodes_.size() - 1;
  }

  std::size_t add_chart(std::size_t parent, std::string label, const CenterSpec& c, const std::string& chart,
                        BasicObject B) {
    if (parent >= nodes_.size()) throw Error("lineage: unknown parent");
    nodes_.push_back(LineageNode{static_cast<int>(parent), std::move(label), c, chart, std::move(B)});
    return nodes_.size() - 1;
  }

  const std::vector<LineageNode>& nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }

  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      if (nodes_[i].label == label) return i;
    }
    return std::nullopt;
  }

  std::string serialize() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].parent < 0) write(os, i, 0);
    }
    return os.str();
  }

private:
  void write(std::ostringstream& os, std::size_t i, int depth) const {
    const LineageNode& n = nodes_[i];
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << "node " << n.label << " stage " << n.object.stage;
    if (n.parent >= 0) os << " center " << n.center.str() << " chart " << n.chart_var;
    os << "\n" << pad << "  divisors";
    for (const Divisor& d : n.object.divisors) os << " " << d.var << "@" << d.birth_stage;
    os << "\n" << pad << "  max-w-ord";
    for (const auto& w : n.object.word_history) os << " " << w.str();
    os << "\n";
    for (const auto& g : n.object.algebra.gens()) {
      os << pad << "  gen " << g.weight.get_str() << " " << g.poly.str() << "\n";
    }
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (nodes_[j].parent == static_cast<int>(i)) write(os, j, depth + 1);
    }
  }

  std::vector<LineageNode> nodes_;
};

}  // namespace rees
