// Acceptance run: one PASS/FAIL line per criterion, exact comparisons only.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "suite.hpp"

using namespace rees;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated] " << what << "; ";
    }
  }
};

Poly P(const char* s, const RingPtr& r) { return parse_poly(s, r); }

ExtRational Q(long a, long b = 1) { return ExtRational(Scalar(a, b)); }

bool has_exact(const ReesAlg& G, const Poly& f, const Scalar& w) {
  return std::any_of(G.gens().begin(), G.gens().end(),
                     [&](const Generator& g) { return g.poly == f && g.weight == w; });
}

std::vector<Point> capped(std::vector<Point> v, std::size_t n) {
  if (v.size() > n) v.resize(n);
  return v;
}

// 1 -----------------------------------------------------------------------

void kangaroo_replay(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  ReesAlg D = diff_closure(suite::kangaroo());
  auto r = D.ring();
  o.require(D.contains(P("(Y^3+X^2)^2", r), 1), "closure contains ((Y^3+X^2)^2, 1)");
  ExtRational odm = ord_dm(D, Point::origin(3), 1);
  o.require(odm == Q(4), "ord_dm(1) at origin = 4, got " + odm.str());

  BasicObject B = make_basic_object(D);
  CenterSpec origin{{"X", "Y", "Z"}};
  BasicObject B1 = blowup_chart(B, origin, "Y");
  o.require(has_exact(B1.algebra, P("Z^2+Y^3*(Y+X^2)^2", r), 2), "Y-chart transform (Z^2+Y^3(Y+X^2)^2, 2)");
  o.require(has_exact(B1.algebra, P("Y^3*(Y+X^2)^2", r), 1), "Y-chart transform (Y^3(Y+X^2)^2, 1)");

  // w-ord of the elimination algebra after the blow-up, as in the worked example
  ElimChain chain = eliminate_chain(D, Point::origin(3), {"Z"});
  CommuteResult cr = commute_elimination(B, chain, origin, "Y");
  ExtRational w = w_ord(cr.downstairs, Point::origin(2));
  o.require(w == Q(2), "w_ord at chart origin = 2, got " + w.str());
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  o.require(ms < 1000, "runtime < 1 s");
  o.detail << "ord_dm=" << odm.str() << " w_ord(downstairs)=" << w.str()
           << " w_ord(upstairs)=" << w_ord(B1, Point::origin(3)).str() << " time=" << ms << "ms";
}

// 2 -----------------------------------------------------------------------

void discriminant(Outcome& o) {
  auto r = make_ring(Field::rationals(), {"a1", "a2", "Z"});
  ReesAlg G(r);
  G.add(P("Z^2+a1*Z+a2", r), 2);
  ReesAlg R = rel_diff_closure(G, "Z");
  ReesAlg E = eliminate(R, make_transversal(R, 0, 2));
  Poly d = P("a1^2-4*a2", E.ring());
  bool ok = E.size() == 1 && E[0].weight == 2 && (E[0].poly == d || E[0].poly == -d);
  o.require(ok, "single generator +-(a1^2-4a2) of weight 2");
  if (!E.empty()) o.detail << "got (" << E[0].poly.str() << ", " << E[0].weight.get_str() << ")";
}

// 3 -----------------------------------------------------------------------

void char0_example(Outcome& o) {
  ReesAlg G = suite::cusp_cylinder();
  auto r = G.ring();
  GammaValue g0 = gamma(G, Point::origin(3));
  o.require(g0.coords == std::vector<ExtRational>{Q(1), Q(2), Q(3, 2)}, "gamma(origin) = (1, 2, 3/2)");
  for (const Point& p : suite::cusp_curve_points({2, 3, Scalar(1, 2)})) {
    GammaValue g = gamma(G, p);
    o.require(g.coords == std::vector<ExtRational>{Q(1), Q(1), ExtRational::infinity()},
              "gamma" + p.str() + " = (1, 1, inf), got " + g.str());
  }
  o.detail << "gamma(0)=" << g0.str() << "; ";

  CenterSpec c{{"x", "y", "z"}};
  Poly f1 = pair_transform(P("z^2+(x^2-y^3)^2", r), 2, c, "y");
  o.require(f1 == P("z^2+y^2*(x^2-y)^2", r), "first transform z1^2+y1^2(x1^2-y1)^2");
  const Poly target = P("z^2+y^2*x^2*(1-y)^2", r);
  bool matched = false;
  for (const auto& chart : c.vars) {
    Poly f2 = pair_transform(f1, 2, c, chart);
    matched = matched || f2 == target;
    o.detail << chart << "-chart second transform " << f2.str() << "; ";
  }
  o.require(matched, "second transform equals z2^2+y2^2x2^2(1-y2)^2 in some chart of the origin");

  auto r2 = make_ring(Field::rationals(), {"x", "y"});
  ReesAlg H(r2);
  H.add(P("(x^2-y^3)^2", r2), 2);
  CenterSpec c2{{"x", "y"}};
  BasicObject B2 = blowup_chart(blowup_chart(make_basic_object(H), c2, "y"), c2, "y");
  MonomialCase mc = monomial_case(B2);
  o.require(mc.monomial, "monomial_case of the plane object after two blow-ups");
  o.detail << "plane object " << B2.algebra[0].poly.str() << " monomial=" << (mc.monomial ? "true" : "false");
}

// 4 -----------------------------------------------------------------------

void projection_independence(Outcome& o, const std::vector<suite::Member>& members) {
  o.require(members.size() >= 5, "suite has >= 5 algebras");
  for (const auto& m : members) {
    const auto& vars = m.G.ring()->vars();
    std::size_t probes_ok = 0, comparisons = 0;
    for (const Point& x : m.probes) {
      if (!is_simple_at(m.G, x)) continue;
      const unsigned tau = tau_at(m.G, x).tau;
      bool two_transversal = false;
      for (unsigned len = 1; len <= std::min(2u, tau); ++len) {
        std::set<std::string> values;
        std::size_t admissible = 0;
        for (const auto& order : suite::orders(vars, len)) {
          try {
            values.insert(ord_dm(m.G, x, order).str());
            ++admissible;
          } catch (const NoTransversal&) {
          }
        }
        comparisons += admissible;
        o.require(values.size() <= 1, m.name + " at " + x.str() + ": orders disagree");
        if (len == 1 && admissible >= 2) two_transversal = true;
      }
      probes_ok += two_transversal;
    }
    o.require(probes_ok >= 20, m.name + ": >= 20 probes with two transversal variables, got " +
                                   std::to_string(probes_ok));
    o.detail << m.name << ":" << probes_ok << "/" << comparisons << " ";
  }
}

// 5 -----------------------------------------------------------------------

void tau_drop(Outcome& o, const std::vector<suite::Member>& members) {
  std::size_t checked = 0, undetermined = 0;
  for (const auto& m : members) {
    for (const Point& x : m.probes) {
      if (!is_simple_at(m.G, x)) continue;
      unsigned before = 0;
      try {
        before = tau_at(m.G, x).tau;
      } catch (const NonAdditiveInitialForm&) {
        ++undetermined;
        continue;
      }
      if (before == 0) continue;
      for (std::size_t v = 0; v < m.G.ring()->nvars(); ++v) {
        for (const Transversal& t : transversal_candidates(m.G, x, v)) {
          ReesAlg down = diff_closure(normalize_weights(eliminate(rel_diff_closure(m.G, v), t)));
          try {
            unsigned after = tau_at(down, x.without(v)).tau;
            o.require(after + 1 == before, m.name + " at " + x.str() + " eliminating " + m.G.ring()->var(v));
            ++checked;
          } catch (const NonAdditiveInitialForm&) {
            ++undetermined;
          }
        }
      }
    }
  }
  o.require(checked > 0, "some eliminations checked");
  o.detail << checked << " eliminations checked, " << undetermined << " undetermined";
}

// 6 -----------------------------------------------------------------------

void resultant_oracle(Outcome& o) {
  std::size_t total = 0;
  for (const Field& k : {Field::rationals(), Field::prime(2), Field::prime(3), Field::prime(5)}) {
    std::mt19937 rng(4242 + k.characteristic());
    auto r = make_ring(k, {"a", "b", "Z"});
    std::uniform_int_distribution<unsigned> deg(1, 3);
    int done = 0;
    while (done < 100) {
      const unsigned n = deg(rng);
      Poly F = Poly::variable(r, 2).pow(n) + oracle::random_poly(r, rng, n - 1, {0, 1, 2}, 3) +
               oracle::random_poly(r, rng, 2, {0, 1}, 2);
      Poly g = oracle::random_poly(r, rng, 3, {0, 1, 2}, 4);
      if (g.is_zero() || F.degree_in(2) != static_cast<int>(n)) continue;
      ReesAlg G(r);
      G.add(F, n);
      Transversal t = make_transversal(G, 0, 2);
      auto c = charpoly_coefficients(g, t, drop_variable(r, 2));
      oracle::OPoly res = oracle::resultant_poly(oracle::from(F), oracle::from(g), 2);
      Poly cn = change_ring(c.back(), r);
      bool ok = oracle::equal(cn, res) || oracle::equal(-cn, res);
      o.require(ok, "char " + std::to_string(k.characteristic()) + ": F=" + F.str() + " g=" + g.str());
      ++done;
      ++total;
    }
  }
  o.detail << total << " instances over Q, F2, F3, F5";
}

// 7 -----------------------------------------------------------------------

/// Singular points among a small box of chart coordinates.
std::vector<Point> chart_probes(const ReesAlg& A, std::size_t cap) {
  const Field& k = A.ring()->field();
  long hi = k.characteristic() == 0 ? 1 : static_cast<long>(std::min<unsigned long>(k.characteristic() - 1, 2));
  long lo = k.characteristic() == 0 ? -1 : 0;
  std::vector<Point> out;
  for (const Point& p : oracle::box(A.ring(), lo, hi)) {
    if (is_singular_at(A, p)) out.push_back(p);
    if (out.size() >= cap) break;
  }
  return out;
}

void commutation(Outcome& o, const std::vector<suite::Member>& members) {
  std::vector<std::pair<std::string, ReesAlg>> cases;
  for (const auto& m : members) cases.emplace_back(m.name, m.G);
  cases.emplace_back("kangaroo", diff_closure(suite::kangaroo()));
  cases.emplace_back("cusp", diff_closure(suite::cusp_cylinder()));
  std::size_t charts = 0, checks = 0;
  for (const auto& [name, G] : cases) {
    const std::size_t d = G.ring()->nvars();
    const Point origin = Point::origin(d);
    CenterSpec all{G.ring()->vars()};
    BasicObject B = make_basic_object(G, {}, capped(chart_probes(G, 400), 12));
    o.require(check_permissible(B, all).ok, name + ": origin is a permissible center");
    const unsigned tau = tau_at(G, origin).tau;
    for (unsigned len = 1; len <= std::min(2u, tau); ++len) {
      ElimChain chain;
      try {
        chain = auto_chain(G, origin, len);
      } catch (const NoTransversal&) {
        continue;
      }
      std::set<std::string> eliminated;
      for (const auto& st : chain.stages) eliminated.insert(st.var);
      for (const auto& chart : all.vars) {
        BasicObject up = blowup_chart(B, all, chart);
        if (eliminated.count(chart)) {
          // no downstairs chart matches; the transversal becomes a unit at the chart origin
          o.require(!is_singular_at(up.algebra, origin), name + ": eliminated chart " + chart + " origin singular");
          continue;
        }
        auto probes = chart_probes(up.algebra, 400);
        CommuteResult res = commute_elimination(B, chain, all, chart, capped(probes, 25));
        ++charts;
        checks += res.checks.size();
        o.require(res.ok, name + " chart " + chart + " chain length " + std::to_string(len));
        for (const auto& ck : res.checks) {
          if (!ck.equal) {
            o.detail << name << "/" << chart << " at " << ck.upstairs_point.str() << ": "
                     << ck.eliminated_after.str() << " vs " << ck.transformed_after.str() << "; ";
          }
        }
      }
    }
  }
  o.detail << charts << " charts, " << checks << " singular probe comparisons";
}

// 8 -----------------------------------------------------------------------

void algebra_identities(Outcome& o, const std::vector<suite::Member>& members) {
  struct Case {
    std::string name;
    ReesAlg G;
    std::vector<Point> grid;
  };
  std::vector<Case> cases;
  for (const auto& m : members) {
    std::vector<long> lo(m.G.ring()->nvars(), m.G.ring()->field().characteristic() ? 0 : -2);
    std::vector<long> hi(m.G.ring()->nvars(), m.G.ring()->field().characteristic() ? 1 : 2);
    cases.push_back({m.name, m.G, suite::ranged_box(m.G.ring(), lo, hi)});
  }
  cases.push_back({"kangaroo", suite::kangaroo(), oracle::box(suite::kangaroo().ring(), 0, 1)});
  cases.push_back({"cusp", suite::cusp_cylinder(), oracle::box(suite::cusp_cylinder().ring(), -3, 3)});
  std::size_t points = 0;
  for (const auto& c : cases) {
    ReesAlg first(c.G.ring(), {c.G[0]});
    ReesAlg rest(c.G.ring());
    for (std::size_t i = 1; i < c.G.size(); ++i) rest.add(c.G[i].poly, c.G[i].weight);
    if (rest.empty()) rest = diff_closure(first);
    ReesAlg joined = odot(first, rest);
    ReesAlg closed = diff_closure(first);
    for (const Point& p : c.grid) {
      ++points;
      const ExtRational base = ord_at(c.G, p);
      for (Scalar w : {Scalar(1, 2), Scalar(1), Scalar(2), Scalar(3)}) {
        ExtRational t = ord_at(twist(c.G, w), p);
        bool ok = base.is_infinite() ? t.is_infinite() : (!t.is_infinite() && Scalar(t.value() * w) == base.value());
        o.require(ok, c.name + " twist by " + w.get_str() + " at " + p.str());
      }
      o.require(is_singular_at(joined, p) == (is_singular_at(first, p) && is_singular_at(rest, p)),
                c.name + " Sing(odot) at " + p.str());
      o.require(is_singular_at(closed, p) == is_singular_at(first, p), c.name + " Sing(closure) at " + p.str());
    }
  }
  o.detail << points << " grid points over " << cases.size() << " algebras";
}

// 9 -----------------------------------------------------------------------

void tilde_contract(Outcome& o) {
  struct Case {
    std::string name;
    ReesAlg G;
    std::vector<Point> probes;
  };
  std::vector<Case> cases;
  {
    ReesAlg G = suite::kangaroo();
    cases.push_back({"kangaroo", G, oracle::box(G.ring(), 0, 1)});
  }
  {
    ReesAlg G = suite::cusp_cylinder();
    auto probes = oracle::box(G.ring(), -2, 2);
    for (const Point& p : suite::cusp_curve_points({2, 3, -2, Scalar(1, 2)})) probes.push_back(p);
    cases.push_back({"cusp", G, probes});
  }
  const unsigned m = 1;
  for (const auto& c : cases) {
    ReesAlg D = diff_closure(c.G);
    std::vector<std::pair<Point, ExtRational>> values;
    for (const Point& p : c.probes) {
      if (!is_singular_at(D, p)) continue;
      values.emplace_back(p, ord_dm(D, p, m));
    }
    auto best = std::max_element(values.begin(), values.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    TildeResult t = tilde(c.G, best->first, m);
    std::size_t max_points = 0;
    for (const auto& [p, v] : values) {
      const bool in_max = v == best->second;
      max_points += in_max;
      o.require(is_singular_at(t.algebra, p) == in_max, c.name + ": Sing(tilde) vs max locus at " + p.str());
    }
    for (const Point& p : c.probes) {
      if (!is_singular_at(D, p)) o.require(!is_singular_at(t.algebra, p), c.name + ": Sing(tilde) outside Sing");
    }
    o.require(t.tau_determined && t.tau >= m + 1, c.name + ": tau(tilde) >= m+1");
    o.detail << c.name << ": omega=" << t.omega.str() << " tau=" << t.tau << " max-locus " << max_points << "/"
             << values.size() << " singular probes; ";
  }
}

// 10 ----------------------------------------------------------------------

void transform_fuzz(Outcome& o) {
  std::mt19937 rng(20261018);
  const std::vector<Field> fields = {Field::rationals(), Field::prime(2), Field::prime(3), Field::prime(5)};
  std::size_t instances = 0, violations = 0;
  auto violate = [&](bool ok) {
    if (!ok) ++violations;
  };
  while (instances < 500) {
    const Field& k = fields[instances % fields.size()];
    auto r = make_ring(k, {"a", "b", "c", "d"});
    // random center of 1..3 variables, chart among them
    std::vector<std::size_t> idx = {0, 1, 2, 3};
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(1 + instances % 3);
    std::sort(idx.begin(), idx.end());
    CenterSpec c;
    for (auto i : idx) c.vars.push_back(r->var(i));
    const std::size_t chart = idx[rng() % idx.size()];

    ReesAlg G(r);
    for (int i = 0; i < 3; ++i) {
      Poly f = oracle::random_poly(r, rng, 4, {0, 1, 2, 3}, 3);
      if (f.is_zero()) continue;
      const unsigned w = 1 + static_cast<unsigned>(rng() % 3);
      Poly ideal(r);
      for (auto j : idx) ideal = ideal + Poly::variable(r, j) * oracle::random_poly(r, rng, 1, {0, 1, 2, 3}, 2);
      if (ideal.is_zero()) ideal = Poly::variable(r, idx[0]);
      f = f * ideal.pow(w);
      if (!f.is_zero()) G.add(f, w);
    }
    if (G.empty()) continue;
    ++instances;
    violate(check_permissible(G, c).ok);
    ReesAlg T = weak_transform(G, c, r->var(chart));
    for (std::size_t i = 0; i < G.size(); ++i) {
      const Poly& f = G[i].poly;
      const unsigned w = integer_weight(G[i]);
      // reconstruction by an independent expansion of the chart substitution
      std::vector<oracle::OPoly> img;
      for (std::size_t j = 0; j < 4; ++j) {
        oracle::OPoly v = oracle::var(k.characteristic(), 4, j);
        bool in = std::find(idx.begin(), idx.end(), j) != idx.end();
        img.push_back(in && j != chart ? v * oracle::var(k.characteristic(), 4, chart) : v);
      }
      oracle::OPoly pulled = oracle::compose(oracle::from(f), img);
      violate(oracle::equal(T[i].poly * Poly::variable(r, chart).pow(w), pulled));
      // exact divisibility: the pullback is divisible by E^(order along the center) and no more
      const unsigned nu = order_along(f, idx);
      violate(nu >= w);
      bool more = true;
      try {
        pair_transform(f, nu + 1, c, r->var(chart));
      } catch (const NotDivisible&) {
        more = false;
      }
      violate(!more);
      // divide_out reconstruction and maximality
      auto dv = divide_out(f, Poly::variable(r, idx[0]));
      violate(dv.quotient * Poly::variable(r, idx[0]).pow(dv.multiplicity) == f);
      violate(!exact_quotient(dv.quotient, Poly::variable(r, idx[0])).has_value());
      Poly st = strict_transform(f, c, r->var(chart));
      violate(!exact_quotient(st, Poly::variable(r, chart)).has_value());
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.detail << instances << " instances, " << violations << " violations";
}

}  // namespace

int main() {
  const auto members = suite::projection_suite();
  std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria = {
      {1, kangaroo_replay},
      {2, discriminant},
      {3, char0_example},
      {4, [&](Outcome& o) { projection_independence(o, members); }},
      {5, [&](Outcome& o) { tau_drop(o, members); }},
      {6, resultant_oracle},
      {7, [&](Outcome& o) { commutation(o, members); }},
      {8, [&](Outcome& o) { algebra_identities(o, members); }},
      {9, tilde_contract},
      {10, transform_fuzz},
  };
  int failed = 0;
  for (auto& [n, run] : criteria) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  (" << ms << " ms) "
              << o.detail.str() << std::endl;
  }
  std::cout << (10 - failed) << "/10 criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
