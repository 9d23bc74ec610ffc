#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heisfock/fock.hpp"
#include "heisfock/polynomial.hpp"
#include "test_support.hpp"

using namespace heisfock;
using heisfock::testing::random_poly;
using heisfock::testing::random_unitary;

namespace {

GradedTensor taylor_of(const HoloPoly& f) {
  return taylor_tensor(f, std::max(0, f.weighted_degree()));
}

double tensor_max_abs(const GradedTensor& a) {
  double m = 0.0;
  for (int k = 0; k <= a.max_rank(); ++k)
    for (const cplx& v : a.rank(k)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("fock norm of basic tensors") {
  auto ab = make_abelian(1);
  // rank-0 only
  GradedTensor a0(ab, 0);
  a0.set(std::vector<int>{}, cplx(3.0, -4.0));
  CHECK(fock_norm_sq(a0, 1.0) == doctest::Approx(25.0).epsilon(1e-14));

  // abelian w^k -> t^k k!
  for (int k = 0; k <= 5; ++k) {
    HoloPoly f = HoloPoly::constant(ab, 1.0);
    for (int i = 0; i < k; ++i) f = f * HoloPoly::coordinate(ab, 0);
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    for (double t : {0.5, 1.0, 2.0}) {
      CHECK(fock_norm_sq(taylor_of(f), t) ==
            doctest::Approx(std::pow(t, k) * kfact).epsilon(1e-12));
    }
  }

  // standard Heisenberg center coordinate at t = 1: exactly 1/4, the value
  // of the Ito-isometry oracle E|M_1/2|^2 = t^2/4.
  auto s = make_standard_heisenberg(1);
  const GradedTensor ac = taylor_of(HoloPoly::coordinate(s, 2));
  CHECK(fock_norm_sq(ac, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(fock_norm_sq(ac, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fock inner product") {
  auto s = make_standard_heisenberg(1);
  std::mt19937_64 rng(3);

  GradedTensor a(s, 2), b(s, 2);
  a.set(std::vector<int>{0, 1}, cplx(1.0));
  b.set(std::vector<int>{1, 1}, cplx(2.0));
  CHECK(fock_inner(a, b, 1.0) == cplx(0.0));  // disjoint word support

  for (int rep = 0; rep < 10; ++rep) {
    const HoloPoly f = random_poly(s, rng, 3, 4);
    const HoloPoly g = random_poly(s, rng, 3, 4);
    const int R = std::max({0, f.weighted_degree(), g.weighted_degree()});
    const GradedTensor af = taylor_tensor(f, R);
    const GradedTensor ag = taylor_tensor(g, R);
    const cplx fg = fock_inner(af, ag, 0.7);
    const cplx gf = fock_inner(ag, af, 0.7);
    CHECK(std::abs(fg - std::conj(gf)) <= 1e-12 * (1.0 + std::abs(fg)));
    CHECK(std::abs(fock_inner(af, af, 0.7) - fock_norm_sq(af, 0.7)) <=
          1e-12 * (1.0 + fock_norm_sq(af, 0.7)));
    // Cauchy-Schwarz
    CHECK(std::norm(fg) <=
          fock_norm_sq(af, 0.7) * fock_norm_sq(ag, 0.7) * (1.0 + 1e-12));
  }
}

TEST_CASE("restricted norms are monotone in the basis size") {
  auto s = make_weighted_family(4, 2, {1.0, 0.8, 0.6, 0.4}, 77);
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const GradedTensor a = taylor_of(random_poly(s, rng, 4, 6));
    CHECK(restrict_basis_norm_sq(a, 1.0, 0) ==
          doctest::Approx(std::norm(a.at(std::vector<int>{}))));
    double prev = 0.0;
    for (int m = 0; m <= s->n(); ++m) {
      const double cur = restrict_basis_norm_sq(a, 1.0, m);
      CHECK(cur >= prev - 1e-15);
      prev = cur;
    }
    CHECK(prev == doctest::Approx(fock_norm_sq(a, 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("J0 residual") {
  auto s = make_standard_heisenberg(1);
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const GradedTensor a = taylor_of(random_poly(s, rng, 4, 6));
    CHECK(j0_residual(a) <= 1e-12);
  }

  // a raw pure tensor eta_1 (x) eta_2 is not in J0
  GradedTensor raw(s, 2);
  raw.set(std::vector<int>{0, 1}, cplx(1.0));
  CHECK(j0_residual(raw) == doctest::Approx(1.0));

  GradedTensor a0(s, 0);
  a0.set(std::vector<int>{}, cplx(4.0));
  CHECK(j0_residual(a0) == 0.0);

  GradedTensor deep(s, 1);
  CHECK_THROWS_AS(j0_residual(deep, 3), std::invalid_argument);
}

TEST_CASE("psi pullback") {
  auto s = make_standard_heisenberg(1);
  std::mt19937_64 rng(11);

  // tensors supported on horizontal words are fixed there
  GradedTensor hor(s, 2);
  hor.set(std::vector<int>{0}, cplx(1.5));
  hor.set(std::vector<int>{0, 1}, cplx(-2.0, 1.0));
  const GradedTensor hp = psi_pullback(hor);
  CHECK(hp.at(std::vector<int>{0}) == cplx(1.5));
  CHECK(hp.at(std::vector<int>{0, 1}) == cplx(-2.0, 1.0));

  // the wedge expansion recovers the center entry of a Taylor tensor
  const GradedTensor ac = taylor_of(HoloPoly::coordinate(s, 2));
  const GradedTensor acp = psi_pullback(ac);
  CHECK(std::abs(acp.at(std::vector<int>{2}) - ac.at(std::vector<int>{2})) <= 1e-14);
  CHECK(std::abs(acp.at(std::vector<int>{2}) - cplx(1.0)) <= 1e-14);

  // alpha in J0: alpha o Psi reproduces alpha on every word
  for (int rep = 0; rep < 8; ++rep) {
    const GradedTensor a = taylor_of(random_poly(s, rng, 4, 5));
    const GradedTensor ap = psi_pullback(a);
    GradedTensor diff = ap;
    diff -= a;
    CHECK(tensor_max_abs(diff) <= 1e-10 * (1.0 + tensor_max_abs(a)));
  }

  // norm nondegeneracy: nonzero Taylor tensors have positive Fock norm
  for (int rep = 0; rep < 10; ++rep) {
    const HoloPoly f = random_poly(s, rng, 4, 5);
    if (f.is_zero()) continue;
    CHECK(fock_norm_sq(taylor_of(f), 1.0) > 0.0);
  }

  HeisenbergStructure flat(3, 1, {Eigen::MatrixXcd::Zero(3, 3)}, "flat", false);
  GradedTensor bad(std::make_shared<HeisenbergStructure>(flat), 1);
  CHECK_THROWS_AS(psi_pullback(bad), structural_error);
}

TEST_CASE("phase pullback") {
  auto s = make_standard_heisenberg(2);
  std::mt19937_64 rng(13);

  const GradedTensor a = taylor_of(random_poly(s, rng, 4, 6));
  GradedTensor same = phase_pullback(a, 0.0);
  same -= a;
  CHECK(tensor_max_abs(same) == 0.0);

  for (int rep = 0; rep < 100; ++rep) {
    const GradedTensor b = taylor_of(random_poly(s, rng, 4, 4));
    const double theta = std::uniform_real_distribution<double>(-3.14, 3.14)(rng);
    const GradedTensor bp = phase_pullback(b, theta);
    CHECK(fock_norm_sq(bp, 1.0) ==
          doctest::Approx(fock_norm_sq(b, 1.0)).epsilon(1e-12));
    if (rep < 5) CHECK(j0_residual(bp) <= 1e-12);
  }

  // phase composition
  const GradedTensor two = phase_pullback(phase_pullback(a, 0.7), 0.5);
  GradedTensor direct = phase_pullback(a, 1.2);
  direct -= two;
  CHECK(tensor_max_abs(direct) <= 1e-12);
}

TEST_CASE("Fejer truncation") {
  auto s = make_standard_heisenberg(1);
  std::mt19937_64 rng(17);
  const HoloPoly f = random_poly(s, rng, 4, 6) +
                     HoloPoly::coordinate(s, 0) + HoloPoly::constant(s, 2.0);
  const GradedTensor a = taylor_of(f);
  const int L = std::max(1, f.weighted_degree());

  CHECK_THROWS_AS(fejer_truncate(a, 0), std::invalid_argument);

  const int nf = 2 * L;
  const GradedTensor t = fejer_truncate(a, nf);
  // rank 0 part is untouched, rank-1 horizontal entries scale by (n-1)/n
  CHECK(t.at(std::vector<int>{}) == a.at(std::vector<int>{}));
  for (int j = 0; j < s->n(); ++j) {
    const cplx expect = a.at(std::vector<int>{j}) * ((nf - 1.0) / nf);
    CHECK(std::abs(t.at(std::vector<int>{j}) - expect) <= 1e-14);
  }
  // weighted degree >= n_fejer is annihilated
  const GradedTensor small = fejer_truncate(a, 2);
  for (int k = 2; k <= small.max_rank(); ++k)
    for (const cplx& v : small.rank(k)) CHECK(v == cplx(0.0));

  // multiplier path vs quadrature path
  for (int n : {2, 3, L, 2 * L}) {
    GradedTensor diff = fejer_truncate(a, n);
    diff -= fejer_truncate_quadrature(a, n);
    CHECK(tensor_max_abs(diff) <= 1e-8);
  }

  // |alpha - alpha(n)| is nonincreasing in n and the hard cutoff stops
  // biting at n > max weighted degree (support preserved from then on)
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 3 * L; ++n) {
    GradedTensor diff = fejer_truncate(a, n);
    diff -= a;
    const double d = std::sqrt(fock_norm_sq(diff, 1.0));
    CHECK(d <= prev + 1e-14);
    prev = d;
    if (n >= 2 * L) {
      const GradedTensor tn = fejer_truncate(a, n);
      for (int k = 0; k <= a.max_rank(); ++k) {
        const auto orig = a.rank(k);
        const auto trunc = tn.rank(k);
        for (std::size_t i = 0; i < orig.size(); ++i)
          if (orig[i] != cplx(0.0)) CHECK(trunc[i] != cplx(0.0));
      }
    }
  }
}

TEST_CASE("unitary frame invariance of the Fock norm") {
  auto s = make_weighted_family(3, 1, {1.0, 0.7, 0.5}, 23);
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const GradedTensor a = taylor_of(random_poly(s, rng, 4, 5));
    const Eigen::MatrixXcd U = random_unitary(s->n(), rng);
    const GradedTensor rotated = rotate_horizontal_frame(a, U);
    CHECK(fock_norm_sq(rotated, 1.0) ==
          doctest::Approx(fock_norm_sq(a, 1.0)).epsilon(1e-10));
  }
}
