#pragma once

// Buchberger's algorithm in graded lexicographic order, and ideal
// membership by normal form.

#include <deque>
#include <utility>
#include <vector>

#include "rees/polynomial.hpp"

namespace rees {

namespace detail {

inline Exponents lcm_exponents(const Exponents& a, const Exponents& b) {
  Exponents l(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) l[i] = std::max(a[i], b[i]);
  return l;
}

inline bool coprime_monomials(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) return false;
  }
  return true;
}

inline Poly s_polynomial(const Poly& f, const Poly& g) {
  const Field& k = f.field();
  Exponents l = lcm_exponents(f.leading_exponents(), g.leading_exponents());
  Exponents mf = l, mg = l;
  for (std::size_t i = 0; i < l.size(); ++i) {
    mf[i] -= f.leading_exponents()[i];
    mg[i] -= g.leading_exponents()[i];
  }
  Poly a = Poly::monomial(f.ring(), mf, k.inv(f.leading_coefficient())) * f;
  Poly b = Poly::monomial(g.ring(), mg, k.inv(g.leading_coefficient())) * g;
  return a - b;
}

}  // namespace detail

/// Remainder of f on division by the list (full reduction).
inline Poly normal_form(const Poly& f, std::span<const Poly> basis) {
  if (basis.empty()) return f;
  return divide(f, basis).remainder;
}

/// Reduced Groebner basis of the ideal generated by gens.
inline std::vector<Poly> groebner_basis(std::span<const Poly> gens) {
  std::vector<Poly> basis;
  for (const Poly& g : gens) {
    if (!g.is_zero()) basis.push_back(g.monic());
  }
  if (basis.empty()) return basis;
  for (const Poly& b : basis) {
    if (b.is_unit()) return {Poly::constant(b.ring(), Scalar(1))};
  }

  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 1; j < basis.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  }
  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.pop_front();
    const Exponents& li = basis[i].leading_exponents();
    const Exponents& lj = basis[j].leading_exponents();
    if (detail::coprime_monomials(li, lj)) continue;
    Poly r = normal_form(detail::s_polynomial(basis[i], basis[j]), basis);
    if (r.is_zero()) continue;
    r = r.monic();
    if (r.is_unit()) return {Poly::constant(r.ring(), Scalar(1))};
    basis.push_back(std::move(r));
    std::size_t n = basis.size() - 1;
    for (std::size_t k = 0; k < n; ++k) pairs.emplace_back(k, n);
  }

  // Minimalize, then inter-reduce.
  std::vector<Poly> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      const auto& lj = basis[j].leading_exponents();
      const auto& li = basis[i].leading_exponents();
      if (divides_monomial(lj, li) && (lj != li || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j) {
      if (j != i) others.push_back(minimal[j]);
    }
    Poly lead = Poly::monomial(minimal[i].ring(), minimal[i].leading_exponents(), Scalar(1));
    Poly tail = minimal[i] - lead;
    minimal[i] = lead + normal_form(tail, others);
  }
  std::sort(minimal.begin(), minimal.end(), [](const Poly& a, const Poly& b) {
    return GrlexGreater{}(b.leading_exponents(), a.leading_exponents());
  });
  return minimal;
}

/// Decides f in <gens>.
inline bool ideal_member(const Poly& f, std::span<const Poly> gens) {
  if (gens.empty()) throw Error("ideal_member: empty generator list");
  for (const Poly& g : gens) f.check_ring(g);
  if (f.is_zero()) return true;
  auto gb = groebner_basis(gens);
  if (gb.empty()) return false;
  return normal_form(f, gb).is_zero();
}

}  // namespace rees
