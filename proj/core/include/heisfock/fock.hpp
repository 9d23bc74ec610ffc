#pragma once

#include <span>
#include <vector>

#include "heisfock/structure.hpp"

namespace heisfock {

/// A finite-rank functional on the tensor algebra over the n+N basis
/// directions: one dense coefficient array per rank, indexed row-major by
/// words (j_1,...,j_k) with letters 0..n+N-1.  Letters < n are horizontal,
/// letters >= n are center directions.  Immutable in normal use; entries at
/// ranks above max_rank are implicitly zero.
class GradedTensor {
 public:
  GradedTensor(StructurePtr s, int max_rank);

  const StructurePtr& structure() const { return s_; }
  int max_rank() const { return max_rank_; }
  int dim() const { return s_->dim(); }

  std::span<const cplx> rank(int k) const { return ranks_[k]; }
  std::span<cplx> rank_mutable(int k) { return ranks_[k]; }

  /// Row-major index of a word within its rank block.
  std::size_t word_index(std::span<const int> word) const;

  cplx at(std::span<const int> word) const;     // 0 beyond max_rank
  void set(std::span<const int> word, cplx v);

  /// Horizontal-slot count + 2 * center-slot count of a word.
  int weighted_degree_of_word(std::span<const int> word) const;

  GradedTensor& operator+=(const GradedTensor& other);
  GradedTensor& operator-=(const GradedTensor& other);
  GradedTensor& operator*=(cplx z);

 private:
  StructurePtr s_;
  int max_rank_;
  std::vector<std::vector<cplx>> ranks_;
};

/// |alpha|_t^2 = sum_k (t^k/k!) sum over purely horizontal words |entry|^2.
/// Words containing any center letter contribute nothing.
double fock_norm_sq(const GradedTensor& alpha, double t);

/// <alpha,beta>_t, sesquilinear over horizontal words (conjugate on beta).
cplx fock_inner(const GradedTensor& alpha, const GradedTensor& beta, double t);

/// Same sum restricted to horizontal letters < m; nondecreasing in m and
/// equal to fock_norm_sq at m = n.
double restrict_basis_norm_sq(const GradedTensor& alpha, double t, int m);

/// |alpha_k|_k^2: the squared entries of one rank over horizontal words,
/// without the t^k/k! weight.
double horizontal_rank_norm_sq(const GradedTensor& alpha, int k);

/// max over words u, v and basis pairs (h,k) of
/// |<alpha, u (x) (h(x)k - k(x)h - [h,k]) (x) v>|.  Zero (up to the tested
/// rank) characterises membership in the annihilator J0.
double j0_residual(const GradedTensor& alpha, int max_word_len);
double j0_residual(const GradedTensor& alpha);  // tests up to max_rank

/// alpha o Psi for the tensor-algebra homomorphism Psi that fixes horizontal
/// letters and replaces each center letter by its wedge expansion over the
/// deterministic pair basis.  Values on every word are then determined by
/// alpha's horizontal entries; for alpha in J0 the result agrees with alpha.
GradedTensor psi_pullback(const GradedTensor& alpha);

/// alpha o Phi_theta: the entry at a word of weighted degree l picks up
/// e^{i l theta}.  Unitary for the Fock norm.
GradedTensor phase_pullback(const GradedTensor& alpha, double theta);

/// Fejer smoothing alpha(n): the weighted-degree-l part is multiplied by the
/// Fejer Fourier coefficient (1 - l/n)_+, so every component of weighted
/// degree >= n vanishes (and with it every rank-m part, m > n).
GradedTensor fejer_truncate(const GradedTensor& alpha, int n_fejer);

/// Same operator evaluated by periodic-trapezoid quadrature of
/// int F_n(theta) alpha o Phi_theta dtheta on 4*n_fejer nodes; cross-check
/// path only.
GradedTensor fejer_truncate_quadrature(const GradedTensor& alpha, int n_fejer);

/// Fejer kernel value (2 pi n)^{-1} (sin(n theta/2)/sin(theta/2))^2.
double fejer_kernel(int n, double theta);

/// Re-expresses alpha in the rotated horizontal frame xi'_j = sum_i U(i,j)
/// xi_i (center letters untouched).  The Fock norm is invariant when U is
/// unitary.
GradedTensor rotate_horizontal_frame(const GradedTensor& alpha,
                                     const Eigen::MatrixXcd& U);

}  // namespace heisfock
