#include <gtest/gtest.h>

#include "suite.hpp"

using namespace rees;

namespace {

Poly P(const char* s, const RingPtr& r) { return parse_poly(s, r); }

std::size_t V(const ReesAlg& G, const char* name) { return *G.ring()->find(name); }

ReesAlg closed_kangaroo() { return diff_closure(suite::kangaroo()); }

}  // namespace

TEST(Transversal, KangarooInZ) {
  ReesAlg D = closed_kangaroo();
  auto c = transversal_candidates(D, Point::origin(3), V(D, "Z"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].degree, 2u);
  EXPECT_EQ(c[0].monic_form, P("Z^2+Y^7+Y*X^4", D.ring()));
  EXPECT_EQ(c[0].anchor, Point::origin(3));
}

TEST(Transversal, KangarooInXIsEmpty) {
  ReesAlg D = closed_kangaroo();
  EXPECT_TRUE(transversal_candidates(D, Point::origin(3), V(D, "X")).empty());
}

TEST(Transversal, DegreeOne) {
  ReesAlg D = diff_closure(suite::cusp_cylinder());
  auto c = transversal_candidates(D, Point::origin(3), V(D, "z"));
  auto lin = std::find_if(c.begin(), c.end(), [](const Transversal& t) { return t.degree == 1; });
  ASSERT_NE(lin, c.end());
  EXPECT_EQ(lin->monic_form, P("z", D.ring()));
}

TEST(Transversal, NotSimpleThrows) {
  auto r = make_ring(Field::rationals(), {"x", "z"});
  ReesAlg G(r);
  G.add(P("z^2", r), 1);
  EXPECT_THROW(transversal_candidates(G, Point::origin(2), 1), NotSimple);
}

TEST(Transversal, MonicNormalization) {
  auto r = make_ring(Field::prime(5), {"x", "z"});
  ReesAlg G(r);
  G.add(P("3*z^2+x^3", r), 2);
  G = diff_closure(G);
  auto c = transversal_candidates(G, Point::origin(2), 1);
  ASSERT_EQ(c.size(), 2u);  // the quadric and its derivative 6z = z
  EXPECT_EQ(c[0].monic_form, P("z^2+2*x^3", r));
  EXPECT_EQ(c[1].monic_form, P("z", r));
}

TEST(Eliminate, Discriminant) {
  auto r = make_ring(Field::rationals(), {"a1", "a2", "Z"});
  ReesAlg G(r);
  G.add(P("Z^2+a1*Z+a2", r), 2);
  ReesAlg R = rel_diff_closure(G, "Z");
  ReesAlg E = eliminate(R, make_transversal(R, 0, 2));
  ASSERT_EQ(E.size(), 1u);
  EXPECT_EQ(E[0].weight, 2);
  EXPECT_EQ(E[0].poly, P("-(a1^2-4*a2)", E.ring()));
}

TEST(Eliminate, RejectsUnclosedAlgebra) {
  auto r = make_ring(Field::rationals(), {"a", "Z"});
  ReesAlg G(r);
  G.add(P("Z^2+a", r), 2);
  EXPECT_THROW(eliminate(G, make_transversal(G, 0, 1)), Error);
}

TEST(Eliminate, RejectsNonMonicTransversal) {
  auto r = make_ring(Field::rationals(), {"a", "Z"});
  ReesAlg G(r);
  G.add(P("Z+a", r), 1);
  Transversal t = make_transversal(G, 0, 1);
  t.monic_form = P("2*Z+a", r);
  EXPECT_THROW(eliminate(G, t), Error);
}

TEST(Eliminate, KangarooPassthrough) {
  ReesAlg D = closed_kangaroo();
  auto t = transversal_candidates(D, Point::origin(3), V(D, "Z")).at(0);
  ReesAlg E = eliminate(rel_diff_closure(D, "Z"), t);
  EXPECT_TRUE(E.contains(P("(Y^3+X^2)^2", E.ring()), 1));
  EXPECT_EQ(ord_at(E, Point::origin(2)), ExtRational(4));
}

TEST(Eliminate, KangarooCharpolyAll) {
  ReesAlg D = closed_kangaroo();
  auto t = transversal_candidates(D, Point::origin(3), V(D, "Z")).at(0);
  ReesAlg E = eliminate(rel_diff_closure(D, "Z"), t, EliminationMode::charpoly_all);
  EXPECT_TRUE(E.contains(P("(Y^3+X^2)^4", E.ring()), 2));
  EXPECT_FALSE(E.contains(P("(Y^3+X^2)^2", E.ring()), 1));
  EXPECT_EQ(ord_at(E, Point::origin(2)), ExtRational(4));
}

TEST(Eliminate, DegreeOneIsSubstitution) {
  std::mt19937 rng(11);
  auto r = make_ring(Field::rationals(), {"x", "y", "z"});
  for (int trial = 0; trial < 25; ++trial) {
    Poly h = oracle::random_poly(r, rng, 3, {0, 1}, 3);
    Poly g = oracle::random_poly(r, rng, 3, {0, 1, 2}, 4);
    if (g.is_zero() || g.is_constant()) continue;
    ReesAlg G(r);
    G.add(P("z", r) - h, 1);
    G.add(g, 2);
    G = rel_diff_closure(G, 2);
    ReesAlg E = eliminate(G, make_transversal(G, 0, 2), EliminationMode::charpoly_all);
    // root z = h; the 1x1 char poly of g is T - g(h)
    oracle::OPoly root = oracle::from(h);
    std::vector<oracle::OPoly> img = {oracle::var(0, 3, 0), oracle::var(0, 3, 1), root};
    std::size_t expected = 0;
    for (std::size_t i = 1; i < G.size(); ++i) {
      oracle::OPoly s = oracle::compose(oracle::from(G[i].poly), img);
      if (s.zero() || (s.t.size() == 1 && s.t.begin()->first == oracle::Mono(3, 0))) continue;
      ++expected;
      bool found = false;
      for (const auto& e : E.gens()) {
        found = found || (e.weight == G[i].weight &&
                          oracle::equal(change_ring(e.poly, r), oracle::constant(0, 3, -1) * s));
      }
      EXPECT_TRUE(found) << G[i].poly.str();
    }
    EXPECT_LE(E.size(), expected);
  }
}

TEST(Eliminate, DeterminantIsSignedResultant) {
  for (const Field& k : {Field::rationals(), Field::prime(2), Field::prime(3), Field::prime(5)}) {
    std::mt19937 rng(100 + k.characteristic());
    auto r = make_ring(k, {"a", "b", "Z"});
    int checked = 0;
    while (checked < 100) {
      std::uniform_int_distribution<unsigned> deg(1, 3);
      const unsigned n = deg(rng);
      Poly F = P("Z", r).pow(n) + oracle::random_poly(r, rng, n - 1, {0, 1, 2}, 3);
      if (F.degree_in(2) != static_cast<int>(n)) continue;
      Poly g = oracle::random_poly(r, rng, 3, {0, 1, 2}, 4);
      if (g.is_zero()) continue;
      ReesAlg G(r);
      G.add(F, n);
      Transversal t = make_transversal(G, 0, 2);
      RingPtr base = drop_variable(r, 2);
      auto c = charpoly_coefficients(g, t, base);
      ASSERT_EQ(c.size(), n);
      std::uniform_int_distribution<int> pt(-4, 4);
      for (int s = 0; s < 3; ++s) {
        std::vector<mpq_class> x = {k.reduce(pt(rng)), k.reduce(pt(rng)), 0};
        mpq_class res = oracle::resultant_at(oracle::from(t.monic_form), oracle::from(g), 2, x);
        mpq_class det = c.back().evaluate(Point{{x[0], x[1]}});
        mpq_class want = k.reduce(n % 2 ? mpq_class(-res) : res);
        EXPECT_EQ(det, want) << F.str() << " | " << g.str();
      }
      ++checked;
    }
  }
}

TEST(Eliminate, ModesAgreeOnOrder) {
  for (const auto& m : suite::projection_suite()) {
    const ReesAlg& G = m.G;
    const std::size_t z = G.ring()->nvars() - 2;
    for (const Point& x : m.probes) {
      if (!is_simple_at(G, x)) continue;
      auto c = transversal_candidates(G, x, z);
      if (c.empty()) continue;
      ReesAlg R = rel_diff_closure(G, z);
      Point x1 = x.without(z);
      EXPECT_EQ(ord_at(eliminate(R, c[0], EliminationMode::passthrough), x1),
                ord_at(eliminate(R, c[0], EliminationMode::charpoly_all), x1))
          << m.name << " " << x.str();
    }
  }
}

TEST(Eliminate, SingMapsIntoSingAndIsEqualForClosedAlgebras) {
  ReesAlg D = diff_closure(suite::cusp_cylinder());
  auto t = transversal_candidates(D, Point::origin(3), 2).at(0);
  ReesAlg E = eliminate(rel_diff_closure(D, 2), t);
  for (long a = -8; a <= 8; ++a) {
    for (long b = -4; b <= 4; ++b) {
      Point down{{a, b}};
      EXPECT_EQ(is_singular_at(E, down), is_singular_at(D, Point{{a, b, 0}})) << down.str();
    }
  }
  for (const auto& m : suite::projection_suite()) {
    const std::size_t z = m.G.ring()->nvars() - 2;
    ReesAlg R = rel_diff_closure(m.G, z);
    for (const Point& x : m.probes) {
      if (!is_simple_at(m.G, x)) continue;
      auto c = transversal_candidates(m.G, x, z);
      if (c.empty()) continue;
      ReesAlg Em = eliminate(R, c[0]);
      for (const Point& y : m.probes) EXPECT_TRUE(is_singular_at(Em, y.without(z))) << m.name;
    }
  }
}

TEST(Chain, CuspExample) {
  ReesAlg D = diff_closure(suite::cusp_cylinder());
  ElimChain c = eliminate_chain(D, Point::origin(3), {"z"});
  ASSERT_EQ(c.stages.size(), 1u);
  EXPECT_EQ(ord_at(c.final_algebra(), c.final_point()), ExtRational(2));
  EXPECT_TRUE(c.final_algebra().contains(P("(x^2-y^3)^2", c.final_algebra().ring()), 2));
}

TEST(Chain, KangarooSingleStage) {
  ElimChain c = eliminate_chain(closed_kangaroo(), Point::origin(3), {"Z"});
  ASSERT_EQ(c.stages.size(), 1u);
  EXPECT_EQ(c.final_point(), Point::origin(2));
  EXPECT_EQ(ord_at(c.final_algebra(), c.final_point()), ExtRational(4));
}

TEST(Chain, EmptyChainReturnsSource) {
  ReesAlg D = closed_kangaroo();
  ElimChain c = eliminate_chain(D, Point::origin(3), {});
  EXPECT_TRUE(c.stages.empty());
  EXPECT_EQ(c.final_algebra(), D);
}

TEST(Chain, NoTransversalNamesTheStage) {
  try {
    eliminate_chain(closed_kangaroo(), Point::origin(3), {"X"});
    FAIL() << "expected NoTransversal";
  } catch (const NoTransversal& e) {
    EXPECT_EQ(e.stage(), 1u);
    EXPECT_EQ(e.var(), "X");
  }
}

TEST(Chain, SerializationListsStages) {
  std::string s = serialize(eliminate_chain(closed_kangaroo(), Point::origin(3), {"Z"}));
  EXPECT_NE(s.find("stage 1 var Z degree 2"), std::string::npos);
  EXPECT_NE(s.find("transversal "), std::string::npos);
}

TEST(Tau, Examples) {
  EXPECT_EQ(tau_at(closed_kangaroo(), Point::origin(3)).tau, 1u);
  auto cusp = tau_at(diff_closure(suite::cusp_cylinder()), Point::origin(3));
  EXPECT_EQ(cusp.tau, 1u);
  ASSERT_EQ(cusp.certificate.size(), 1u);
  EXPECT_EQ(cusp.certificate[0].first.monic(), P("z", cusp.certificate[0].first.ring()));

  auto r = make_ring(Field::rationals(), {"x", "z", "w"});
  ReesAlg A(r), B(r);
  A.add(P("z", r), 1);
  B.add(P("w", r), 1);
  EXPECT_EQ(tau_at(odot(A, B), Point::origin(3)).tau, 2u);
}

TEST(Tau, KangarooCertificateLevel) {
  auto t = tau_at(closed_kangaroo(), Point::origin(3));
  ASSERT_EQ(t.certificate.size(), 1u);
  EXPECT_EQ(t.certificate[0].second, 1u);
}

TEST(Tau, NonAdditiveInitialFormIsReported) {
  auto r = make_ring(Field::prime(2), {"x", "y"});
  ReesAlg G(r);
  // not closed: the closure would add x and y and make the form reducible
  G.add(P("x*y", r), 2);
  EXPECT_THROW(tau_at(G, Point::origin(2)), NonAdditiveInitialForm);
}

TEST(Tau, DropsByOneUnderElimination) {
  for (const auto& m : suite::projection_suite()) {
    const std::size_t z = m.G.ring()->nvars() - 2;
    ReesAlg R = rel_diff_closure(m.G, z);
    for (const Point& x : m.probes) {
      if (!is_simple_at(m.G, x)) continue;
      unsigned before = tau_at(m.G, x).tau;
      if (before == 0) continue;
      auto c = transversal_candidates(m.G, x, z);
      if (c.empty()) continue;
      ReesAlg down = diff_closure(normalize_weights(eliminate(R, c[0])));
      EXPECT_EQ(tau_at(down, x.without(z)).tau, before - 1) << m.name << " " << x.str();
    }
  }
}

TEST(NestedDeterminant, OrderFourDownstairs) {
  auto r = make_ring(Field::prime(2), {"x", "y", "Z"});
  ReesAlg G(r);
  G.add(P("Z^2+y^3", r), 2);
  Transversal t = make_transversal(G, 0, 2);
  auto nd = nested_determinant(t, P("Z^2+x^2", r), 2, Point::origin(3));
  EXPECT_EQ(nd.det, P("(x^2+y^3)^2", nd.det.ring()));
  EXPECT_EQ(nd.weight, 4u);
  EXPECT_TRUE(nd.order_ok);
  EXPECT_TRUE(nd.membership_ok);
}

TEST(NestedDeterminant, GEqualToFGivesZero) {
  auto r = make_ring(Field::prime(2), {"x", "y", "Z"});
  ReesAlg G(r);
  G.add(P("Z^2+x^3+y^5", r), 2);
  Transversal t = make_transversal(G, 0, 2);
  auto nd = nested_determinant(t, t.monic_form, 2, Point::origin(3));
  EXPECT_TRUE(nd.det.is_zero());
  EXPECT_TRUE(nd.membership_ok);
}

TEST(NestedDeterminant, ZFreeGIsAPower) {
  for (unsigned long p : {2ul, 3ul}) {
    auto r = make_ring(Field::prime(p), {"x", "y", "Z"});
    ReesAlg G(r);
    std::string f = "Z^" + std::to_string(p) + "+x^" + std::to_string(p + 1);
    G.add(P(f.c_str(), r), p);
    Transversal t = make_transversal(G, 0, 2);
    Poly g = (P("x", r) + P("y", r)).pow(p);
    auto nd = nested_determinant(t, g, p, Point::origin(3));
    EXPECT_EQ(nd.det, change_ring(g.pow(p), nd.det.ring()));
    EXPECT_EQ(nd.det_order, ExtRational(static_cast<long>(p * p)));
    EXPECT_TRUE(nd.order_ok);
  }
}

TEST(NestedDeterminant, CharacteristicZeroRejected) {
  auto r = make_ring(Field::rationals(), {"x", "Z"});
  ReesAlg G(r);
  G.add(P("Z^2+x^3", r), 2);
  EXPECT_THROW(nested_determinant(make_transversal(G, 0, 1), P("x^2", r), 2, Point::origin(2)), Error);
}
