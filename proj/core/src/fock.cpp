#include "heisfock/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heisfock {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// Lexicographic odometer over words of fixed length from alphabet size
/// `base`; returns false when the enumeration wraps.
bool advance_word(std::vector<int>& word, int base) {
  for (int p = static_cast<int>(word.size()) - 1; p >= 0; --p) {
    if (++word[p] < base) return true;
    word[p] = 0;
  }
  return false;
}

void check_compatible(const GradedTensor& a, const GradedTensor& b) {
  if (a.dim() != b.dim() || a.max_rank() != b.max_rank())
    throw structural_error("tensor shapes do not match");
}

}  // namespace

GradedTensor::GradedTensor(StructurePtr s, int max_rank)
    : s_(std::move(s)), max_rank_(max_rank) {
  if (max_rank_ < 0) throw std::invalid_argument("max rank must be nonnegative");
  ranks_.resize(max_rank_ + 1);
  for (int k = 0; k <= max_rank_; ++k)
    ranks_[k].assign(ipow(static_cast<std::size_t>(dim()), k), cplx(0.0));
}

std::size_t GradedTensor::word_index(std::span<const int> word) const {
  std::size_t idx = 0;
  for (int j : word) idx = idx * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(j);
  return idx;
}

cplx GradedTensor::at(std::span<const int> word) const {
  const int k = static_cast<int>(word.size());
  if (k > max_rank_) return cplx(0.0);
  return ranks_[k][word_index(word)];
}

void GradedTensor::set(std::span<const int> word, cplx v) {
  const int k = static_cast<int>(word.size());
  if (k > max_rank_) throw std::invalid_argument("word rank exceeds tensor max rank");
  ranks_[k][word_index(word)] = v;
}

int GradedTensor::weighted_degree_of_word(std::span<const int> word) const {
  int d = 0;
  for (int j : word) d += (j < s_->n()) ? 1 : 2;
  return d;
}

GradedTensor& GradedTensor::operator+=(const GradedTensor& other) {
  check_compatible(*this, other);
  for (int k = 0; k <= max_rank_; ++k)
    for (std::size_t i = 0; i < ranks_[k].size(); ++i) ranks_[k][i] += other.ranks_[k][i];
  return *this;
}

GradedTensor& GradedTensor::operator-=(const GradedTensor& other) {
  check_compatible(*this, other);
  for (int k = 0; k <= max_rank_; ++k)
    for (std::size_t i = 0; i < ranks_[k].size(); ++i) ranks_[k][i] -= other.ranks_[k][i];
  return *this;
}

GradedTensor& GradedTensor::operator*=(cplx z) {
  for (auto& block : ranks_)
    for (auto& v : block) v *= z;
  return *this;
}

double restrict_basis_norm_sq(const GradedTensor& alpha, double t, int m) {
  if (m < 0 || m > alpha.structure()->n())
    throw std::invalid_argument("basis restriction out of range");
  // Rank-ascending accumulation; the reduction order is part of the
  // reproducibility contract.
  double total = 0.0;
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    if (k > 0 && m == 0) break;
    double block = 0.0;
    std::vector<int> word(k, 0);
    do {
      block += std::norm(alpha.at(word));
    } while (k > 0 && advance_word(word, m));
    total += std::pow(t, k) / factorial(k) * block;
  }
  return total;
}

double fock_norm_sq(const GradedTensor& alpha, double t) {
  return restrict_basis_norm_sq(alpha, t, alpha.structure()->n());
}

double horizontal_rank_norm_sq(const GradedTensor& alpha, int k) {
  if (k < 0 || k > alpha.max_rank()) throw std::invalid_argument("rank out of range");
  const int n = alpha.structure()->n();
  if (k > 0 && n == 0) return 0.0;
  double block = 0.0;
  std::vector<int> word(k, 0);
  do {
    block += std::norm(alpha.at(word));
  } while (k > 0 && advance_word(word, n));
  return block;
}

cplx fock_inner(const GradedTensor& alpha, const GradedTensor& beta, double t) {
  check_compatible(alpha, beta);
  const int n = alpha.structure()->n();
  cplx total = 0.0;
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    if (k > 0 && n == 0) break;
    cplx block = 0.0;
    std::vector<int> word(k, 0);
    do {
      block += alpha.at(word) * std::conj(beta.at(word));
    } while (k > 0 && advance_word(word, n));
    total += std::pow(t, k) / factorial(k) * block;
  }
  return total;
}

double j0_residual(const GradedTensor& alpha, int max_word_len) {
  if (max_word_len > alpha.max_rank())
    throw std::invalid_argument("tested word length exceeds stored rank");
  const auto& s = *alpha.structure();
  const int D = s.dim();
  double worst = 0.0;
  std::vector<int> word;
  for (int a = 0; a + 2 <= max_word_len; ++a) {
    for (int b = 0; a + b + 2 <= max_word_len; ++b) {
      std::vector<int> u(a, 0);
      do {
        std::vector<int> v(b, 0);
        do {
          for (int h = 0; h < D; ++h) {
            for (int k = 0; k < D; ++k) {
              word.assign(u.begin(), u.end());
              word.push_back(h);
              word.push_back(k);
              word.insert(word.end(), v.begin(), v.end());
              cplx r = alpha.at(word);
              std::swap(word[a], word[a + 1]);
              r -= alpha.at(word);
              if (h < s.n() && k < s.n()) {
                const Eigen::VectorXcd br = s.omega_entry(h, k);
                word.erase(word.begin() + a);
                for (int l = 0; l < s.N(); ++l) {
                  word[a] = s.n() + l;
                  r -= br[l] * alpha.at(word);
                }
              }
              worst = std::max(worst, std::abs(r));
            }
          }
        } while (b > 0 && advance_word(v, D));
      } while (a > 0 && advance_word(u, D));
    }
  }
  return worst;
}

double j0_residual(const GradedTensor& alpha) {
  return j0_residual(alpha, alpha.max_rank());
}

GradedTensor psi_pullback(const GradedTensor& alpha) {
  const auto& s = *alpha.structure();
  const CenterPairBasis pb = center_pair_basis(s);
  GradedTensor out(alpha.structure(), alpha.max_rank());
  // psi fixes horizontal letters and sends the center letter e_m to
  // sum_l dual(l,m) (xi_{i_l} wedge xi_{j_l}); expand the slot product and
  // read alpha on the resulting horizontal words.
  std::vector<int> expanded;
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    std::vector<int> word(k, 0);
    do {
      cplx acc = 0.0;
      // Branch over the 2-way wedge choice at each center slot.
      std::vector<int> centers;
      for (int p = 0; p < k; ++p)
        if (word[p] >= s.n()) centers.push_back(p);
      const int nc = static_cast<int>(centers.size());
      std::vector<int> pick(nc, 0);  // which pair l feeds each center slot
      bool more_l = true;
      while (more_l) {
        for (int mask = 0; mask < (1 << nc); ++mask) {
          cplx coeff = 1.0;
          expanded.clear();
          int ci = 0;
          for (int p = 0; p < k; ++p) {
            if (word[p] < s.n()) {
              expanded.push_back(word[p]);
            } else {
              const int m = word[p] - s.n();
              const int l = pick[ci];
              coeff *= pb.dual(l, m);
              auto [il, jl] = pb.pairs[l];
              if (mask & (1 << ci)) {
                coeff *= -1.0;
                expanded.push_back(jl);
                expanded.push_back(il);
              } else {
                expanded.push_back(il);
                expanded.push_back(jl);
              }
              ++ci;
            }
          }
          acc += coeff * alpha.at(expanded);
        }
        more_l = nc > 0 && advance_word(pick, s.N());
        if (nc == 0) break;
      }
      out.set(word, acc);
    } while (k > 0 && advance_word(word, s.dim()));
  }
  return out;
}

namespace {

/// Applies a per-weighted-degree multiplier to every entry.
GradedTensor apply_degree_multiplier(const GradedTensor& alpha,
                                     const std::vector<cplx>& mult) {
  GradedTensor out(alpha.structure(), alpha.max_rank());
  const int D = alpha.dim();
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    std::vector<int> word(k, 0);
    do {
      const int l = alpha.weighted_degree_of_word(word);
      out.set(word, mult[l] * alpha.at(word));
    } while (k > 0 && advance_word(word, D));
  }
  return out;
}

}  // namespace

GradedTensor phase_pullback(const GradedTensor& alpha, double theta) {
  std::vector<cplx> mult(2 * alpha.max_rank() + 1);
  for (std::size_t l = 0; l < mult.size(); ++l)
    mult[l] = std::polar(1.0, theta * static_cast<double>(l));
  return apply_degree_multiplier(alpha, mult);
}

GradedTensor fejer_truncate(const GradedTensor& alpha, int n_fejer) {
  if (n_fejer <= 0) throw std::invalid_argument("Fejer order must be positive");
  std::vector<cplx> mult(2 * alpha.max_rank() + 1);
  for (std::size_t l = 0; l < mult.size(); ++l)
    mult[l] = std::max(0.0, 1.0 - static_cast<double>(l) / n_fejer);
  return apply_degree_multiplier(alpha, mult);
}

double fejer_kernel(int n, double theta) {
  const double half = std::sin(theta / 2.0);
  if (std::abs(half) < 1e-12) return n / (2.0 * std::numbers::pi);
  const double q = std::sin(n * theta / 2.0) / half;
  return q * q / (2.0 * std::numbers::pi * n);
}

GradedTensor fejer_truncate_quadrature(const GradedTensor& alpha, int n_fejer) {
  if (n_fejer <= 0) throw std::invalid_argument("Fejer order must be positive");
  // Periodic trapezoid with 4n nodes, raised when the tensor's weighted
  // degrees reach the alias band K - (n-1): the kernel has frequencies up
  // to n-1 and the tensor up to 2 max_rank.
  const int K = std::max(4 * n_fejer, n_fejer + 2 * alpha.max_rank() + 1);
  std::vector<cplx> mult(2 * alpha.max_rank() + 1, cplx(0.0));
  for (int k = 0; k < K; ++k) {
    const double theta = -std::numbers::pi + 2.0 * std::numbers::pi * k / K;
    const double wt = fejer_kernel(n_fejer, theta) * 2.0 * std::numbers::pi / K;
    for (std::size_t l = 0; l < mult.size(); ++l)
      mult[l] += wt * std::polar(1.0, theta * static_cast<double>(l));
  }
  return apply_degree_multiplier(alpha, mult);
}

GradedTensor rotate_horizontal_frame(const GradedTensor& alpha,
                                     const Eigen::MatrixXcd& U) {
  const auto& s = *alpha.structure();
  if (U.rows() != s.n() || U.cols() != s.n())
    throw std::invalid_argument("frame rotation has wrong shape");
  const int D = s.dim();
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(D, D);
  V.topLeftCorner(s.n(), s.n()) = U;
  GradedTensor out(alpha.structure(), alpha.max_rank());
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    std::vector<cplx> cur(alpha.rank(k).begin(), alpha.rank(k).end());
    std::vector<cplx> next(cur.size());
    // Contract V into one slot at a time.
    std::size_t inner = cur.size() / std::max<std::size_t>(1, D);
    for (int mode = 0; mode < k; ++mode) {
      const std::size_t outer = cur.size() / (inner * D);
      for (std::size_t o = 0; o < outer; ++o)
        for (int jp = 0; jp < D; ++jp)
          for (std::size_t in = 0; in < inner; ++in) {
            cplx acc = 0.0;
            for (int j = 0; j < D; ++j)
              acc += V(j, jp) * cur[(o * D + j) * inner + in];
            next[(o * D + jp) * inner + in] = acc;
          }
      cur.swap(next);
      inner /= D;
    }
    std::copy(cur.begin(), cur.end(), out.rank_mutable(k).begin());
  }
  return out;
}

}  // namespace heisfock
