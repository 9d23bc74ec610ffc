#pragma once

#include <map>
#include <string>
#include <vector>

#include "heisfock/fock.hpp"
#include "heisfock/structure.hpp"

namespace heisfock {

/// Sparse holomorphic polynomial in the n+N complex coordinates
/// (w_1..w_n, c_1..c_N) of a group instance.  Purely holomorphic by
/// construction (no conjugate coordinates); zero coefficients are not
/// stored.  Values are immutable; operations return new polynomials.
class HoloPoly {
 public:
  using Monomial = std::vector<int>;  // exponents, length n+N

  static HoloPoly zero(StructurePtr s);
  static HoloPoly constant(StructurePtr s, cplx value);
  static HoloPoly coordinate(StructurePtr s, int index);  // 0-based over n+N
  static HoloPoly from_terms(StructurePtr s, std::map<Monomial, cplx> terms);

  const StructurePtr& structure() const { return s_; }
  const std::map<Monomial, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// w-exponents count 1, c-exponents count 2; -1 for the zero polynomial.
  int weighted_degree() const { return wdeg_; }

  HoloPoly operator+(const HoloPoly& o) const;
  HoloPoly operator-(const HoloPoly& o) const;
  HoloPoly operator*(const HoloPoly& o) const;
  HoloPoly operator*(cplx z) const;

  /// d/d(coordinate index), a plain partial derivative.
  HoloPoly partial(int index) const;

  cplx evaluate(const GroupElement& g) const;

  /// Canonical literal: terms joined by " + ", each
  /// "re+imi * w1^a * c1^b"; parse_poly round-trips this exactly.
  std::string to_string() const;

 private:
  HoloPoly(StructurePtr s, std::map<Monomial, cplx> terms);
  int recompute_weighted_degree() const;

  StructurePtr s_;
  std::map<Monomial, cplx> terms_;
  int wdeg_ = -1;
};

HoloPoly parse_poly(StructurePtr s, const std::string& literal);

inline cplx evaluate(const HoloPoly& f, const GroupElement& g) {
  return f.evaluate(g);
}

/// Left-invariant derivative (h~ f)(g) = f'(g)(A, a + omega(w,A)/2),
/// returned symbolically.  For horizontal h the weighted degree drops by at
/// least one.
HoloPoly lie_derive(const HoloPoly& f, const LieVector& h);

/// Linear directional derivative f'(.)v along a constant vector.
HoloPoly dir_derive(const HoloPoly& f, const LieVector& v);

/// Basis Lie vector for coordinate direction `index` (0-based over n+N).
LieVector basis_vector(const HeisenbergStructure& s, int index);

/// f composed with pi_m, i.e. w_j := 0 for j >= m inside f.
HoloPoly substitute_cut(const HoloPoly& f, int m);

/// Taylor coefficients at the identity: the rank-k entry at word
/// (j_1,...,j_k) is (op_{j_1} ... op_{j_k} f)(e) with the rightmost letter
/// differentiated first (leftmost tensor slot = outermost derivative).
/// Ranks above the weighted degree vanish identically; max_rank below the
/// weighted degree is a truncation error.
GradedTensor taylor_tensor(const HoloPoly& f, int max_rank);

/// Closed-form partition evaluation of the iterated derivative
/// (op_{h_k} ... op_{h_1} f)(g) for word = (h_1,...,h_k): derivatives are
/// applied in word order, h_1 first.  Equals repeated lie_derive; word
/// length is guarded at 8.
cplx partition_derivative(const HoloPoly& f, const std::vector<LieVector>& word,
                          const GroupElement& g);

/// Gamma_P(w,w') = (0, omega(w,w') - omega(Pw,Pw'))/2, the defect making
/// pi(g1 g2) = pi(g1) pi(g2) + Gamma exact.
LieVector gamma_defect(const HeisenbergStructure& s, int m,
                       const GroupElement& g1, const GroupElement& g2);

/// Taylor tensor of f o pi_m at e, by symbolic composition.
GradedTensor cylinder_taylor_tensor(const HoloPoly& f, int m, int max_rank);

/// Independent cross-check path for the same object via the kappa partition
/// formula: entries of (f o pi)^ are contractions of the plain Taylor tensor
/// with projected letters and Gamma_P correction pairs.
GradedTensor cylinder_taylor_tensor_kappa(const HoloPoly& f, int m,
                                          int max_rank);

/// f(g) = sum_k (1/k!) <alpha_k, g^{(x)k}> for finite-rank alpha.
cplx reconstruct(const GradedTensor& alpha, const GroupElement& g);

/// The same sum assembled symbolically as a polynomial.
HoloPoly reconstruct_poly(const GradedTensor& alpha);

}  // namespace heisfock
