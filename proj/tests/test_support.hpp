#pragma once

#include <random>
#include <vector>

#include "heisfock/polynomial.hpp"
#include "heisfock/structure.hpp"

namespace heisfock::testing {

inline cplx random_unit_cplx(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return cplx(g(rng), g(rng));
}

inline GroupElement random_element(const StructurePtr& s, std::mt19937_64& rng,
                                   double scale = 1.0) {
  Eigen::VectorXcd w(s->n()), c(s->N());
  for (int i = 0; i < s->n(); ++i) w[i] = scale * random_unit_cplx(rng);
  for (int l = 0; l < s->N(); ++l) c[l] = scale * random_unit_cplx(rng);
  return {w, c};
}

/// Random holomorphic polynomial of weighted degree <= max_wdeg with a
/// handful of monomials; deterministic given the generator state.
inline HoloPoly random_poly(const StructurePtr& s, std::mt19937_64& rng,
                            int max_wdeg = 4, int monomials = 5) {
  std::uniform_int_distribution<int> pick_var(0, s->dim() - 1);
  std::map<HoloPoly::Monomial, cplx> terms;
  for (int m = 0; m < monomials; ++m) {
    HoloPoly::Monomial mono(s->dim(), 0);
    int budget = static_cast<int>(rng() % (max_wdeg + 1));
    while (budget > 0) {
      const int v = pick_var(rng);
      const int cost = v < s->n() ? 1 : 2;
      if (cost > budget) {
        if (s->n() == 0) break;
        mono[static_cast<int>(rng() % s->n())] += 1;
        budget -= 1;
        continue;
      }
      mono[v] += 1;
      budget -= cost;
    }
    terms[mono] += random_unit_cplx(rng);
  }
  return HoloPoly::from_terms(s, std::move(terms));
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = random_unit_cplx(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  Eigen::MatrixXcd Q = qr.householderQ();
  return Q;
}

}  // namespace heisfock::testing
