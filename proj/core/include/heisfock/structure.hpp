#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heisfock {

using cplx = std::complex<double>;

/// Raised when group/algebra data violates a structural invariant
/// (dimension mismatch, broken skew-symmetry, failed Hormander check).
struct structural_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A complex Heisenberg-like group instance: W = C^n horizontal, center C^N,
/// with bracket [(w,.),(z,.)] = (0, omega(w,z)) for a skew bilinear omega.
///
/// omega is stored as N dense n-by-n matrices, Omega[l](i,j) = l-th center
/// component of omega(xi_i, xi_j) in the fixed orthonormal frame.
/// Instances are immutable after construction.
class HeisenbergStructure {
 public:
  HeisenbergStructure(int n, int N, std::vector<Eigen::MatrixXcd> omega,
                      std::string label, bool require_hormander = true);

  int n() const { return n_; }
  int N() const { return N_; }
  int dim() const { return n_ + N_; }  // coordinate count n + N
  const std::string& label() const { return label_; }
  bool hormander_required() const { return require_hormander_; }

  const Eigen::MatrixXcd& omega_matrix(int l) const { return omega_[l]; }

  /// omega(x, y) in C^N; complex bilinear (no conjugation).
  Eigen::VectorXcd omega(const Eigen::VectorXcd& x,
                         const Eigen::VectorXcd& y) const;

  /// omega(xi_i, xi_j) for basis vectors, 0-based indices.
  Eigen::VectorXcd omega_entry(int i, int j) const;

  double hs_norm_sq() const { return hs_norm_sq_; }     // cached |omega|_HS^2
  double recompute_hs_norm_sq() const;

 private:
  int n_;
  int N_;
  std::vector<Eigen::MatrixXcd> omega_;
  std::string label_;
  bool require_hormander_;
  double hs_norm_sq_;
};

using StructurePtr = std::shared_ptr<const HeisenbergStructure>;

/// A point of G (or a Lie algebra element; the identification is linear).
/// w is the horizontal part in C^n, c the center part in C^N.
struct GroupElement {
  Eigen::VectorXcd w;
  Eigen::VectorXcd c;
};

/// Same data viewed as an element of the Lie algebra; on a step-2 group
/// the exponential coordinates make the two interchangeable.
using LieVector = GroupElement;

GroupElement identity_element(const HeisenbergStructure& s);
GroupElement make_element(const HeisenbergStructure& s,
                          Eigen::VectorXcd w, Eigen::VectorXcd c);

void check_element(const HeisenbergStructure& s, const GroupElement& g);

/// Group product (w1,c1)(w2,c2) = (w1+w2, c1+c2+omega(w1,w2)/2).
GroupElement multiply(const HeisenbergStructure& s, const GroupElement& g1,
                      const GroupElement& g2);

/// g^{-1} = -g.
GroupElement inverse(const HeisenbergStructure& s, const GroupElement& g);

/// [(A1,a1),(A2,a2)] = (0, omega(A1,A2)).
LieVector bracket(const HeisenbergStructure& s, const LieVector& h1,
                  const LieVector& h2);

/// Homogeneous norm sqrt(|w|^2 + |c|); the center norm enters to the
/// first power under the root.
double homogeneous_norm(const HeisenbergStructure& s, const GroupElement& g);

/// Parabolic dilation (w,c) -> (lambda w, lambda^2 c); a group homomorphism.
GroupElement dilate_scale(const HeisenbergStructure& s, double lambda,
                          const GroupElement& g);

/// Phase dilation (A,a) -> (e^{i theta} A, e^{2 i theta} a); an automorphism
/// of both the group and the Lie algebra.
GroupElement dilate_phase(const HeisenbergStructure& s, double theta,
                          const GroupElement& g);

/// Rank of the N-column matrix whose rows are omega(xi_i, xi_j), i < j.
/// Equals N exactly when the bracket-generating (Hormander) condition holds.
int hormander_rank(const HeisenbergStructure& s);

/// pi_m(w,c) = (Pw, c): zeroes horizontal coordinates with index > m
/// (m counts retained coordinates, 0 <= m <= n). Not a group homomorphism;
/// the defect is Gamma_P (see holo-calculus).
GroupElement project(const HeisenbergStructure& s, int m,
                     const GroupElement& g);

/// The standard complex Heisenberg group: n = 2*n_pairs horizontal
/// coordinates, one center coordinate, omega((w1,w2),(z1,z2)) = w1.z2 - w2.z1
/// pairwise.
StructurePtr make_standard_heisenberg(int n_pairs);

/// Abelian baseline: N = 0, omega absent, Hormander check disabled.
StructurePtr make_abelian(int n);

/// Seeded random skew tensor with entry magnitudes scaled by
/// sqrt(q_i q_j); emulates an infinite-dimensional structure with decaying
/// interaction. Fails if the generated omega misses full center rank.
StructurePtr make_weighted_family(int n, int N,
                                  const std::vector<double>& weights,
                                  std::uint64_t seed);

/// Deterministic choice of horizontal basis pairs {(i_l, j_l)} whose omega
/// values form a basis of C^N (lexicographically first such pairs), plus the
/// dual-basis matrix: eps(a) = dual * a has eps^l dual to omega(xi_{i_l},
/// xi_{j_l}). Shared by the Psi homomorphism and the center-loop distance
/// constructions.
struct CenterPairBasis {
  std::vector<std::pair<int, int>> pairs;
  Eigen::MatrixXcd basis;  // N x N, column l = omega(xi_{i_l}, xi_{j_l})
  Eigen::MatrixXcd dual;   // basis^{-1}
};

CenterPairBasis center_pair_basis(const HeisenbergStructure& s);

}  // namespace heisfock
