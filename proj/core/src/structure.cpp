#include "heisfock/structure.hpp"

#include <cmath>
#include <random>

namespace heisfock {

namespace {

constexpr double kSkewTol = 1e-12;

double tensor_scale(const std::vector<Eigen::MatrixXcd>& omega) {
  double m = 0.0;
  for (const auto& O : omega) m = std::max(m, O.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

HeisenbergStructure::HeisenbergStructure(int n, int N,
                                         std::vector<Eigen::MatrixXcd> omega,
                                         std::string label,
                                         bool require_hormander)
    : n_(n),
      N_(N),
      omega_(std::move(omega)),
      label_(std::move(label)),
      require_hormander_(require_hormander) {
  if (n_ < 0 || N_ < 0) throw structural_error("negative dimension");
  if (static_cast<int>(omega_.size()) != N_)
    throw structural_error("omega must supply one n-by-n matrix per center coordinate");
  const double scale = std::max(1.0, N_ > 0 ? tensor_scale(omega_) : 0.0);
  for (const auto& O : omega_) {
    if (O.rows() != n_ || O.cols() != n_)
      throw structural_error("omega matrix has wrong shape");
    if ((O + O.transpose()).cwiseAbs().maxCoeff() > kSkewTol * scale)
      throw structural_error("omega is not skew-symmetric");
  }
  hs_norm_sq_ = recompute_hs_norm_sq();
  if (!std::isfinite(hs_norm_sq_))
    throw structural_error("omega has non-finite entries");
  if (require_hormander_ && hormander_rank(*this) < N_)
    throw structural_error("Hormander condition fails: omega values do not span the center");
}

Eigen::VectorXcd HeisenbergStructure::omega(const Eigen::VectorXcd& x,
                                            const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd out(N_);
  for (int l = 0; l < N_; ++l) out[l] = x.transpose() * omega_[l] * y;
  return out;
}

Eigen::VectorXcd HeisenbergStructure::omega_entry(int i, int j) const {
  Eigen::VectorXcd out(N_);
  for (int l = 0; l < N_; ++l) out[l] = omega_[l](i, j);
  return out;
}

double HeisenbergStructure::recompute_hs_norm_sq() const {
  double sum = 0.0;
  for (const auto& O : omega_) sum += O.squaredNorm();
  return sum;
}

GroupElement identity_element(const HeisenbergStructure& s) {
  return {Eigen::VectorXcd::Zero(s.n()), Eigen::VectorXcd::Zero(s.N())};
}

GroupElement make_element(const HeisenbergStructure& s, Eigen::VectorXcd w,
                          Eigen::VectorXcd c) {
  GroupElement g{std::move(w), std::move(c)};
  check_element(s, g);
  return g;
}

void check_element(const HeisenbergStructure& s, const GroupElement& g) {
  if (g.w.size() != s.n() || g.c.size() != s.N())
    throw structural_error("element dimensions do not match the structure");
}

GroupElement multiply(const HeisenbergStructure& s, const GroupElement& g1,
                      const GroupElement& g2) {
  check_element(s, g1);
  check_element(s, g2);
  return {g1.w + g2.w, g1.c + g2.c + 0.5 * s.omega(g1.w, g2.w)};
}

GroupElement inverse(const HeisenbergStructure& s, const GroupElement& g) {
  check_element(s, g);
  return {-g.w, -g.c};
}

LieVector bracket(const HeisenbergStructure& s, const LieVector& h1,
                  const LieVector& h2) {
  check_element(s, h1);
  check_element(s, h2);
  return {Eigen::VectorXcd::Zero(s.n()), s.omega(h1.w, h2.w)};
}

double homogeneous_norm(const HeisenbergStructure& s, const GroupElement& g) {
  check_element(s, g);
  return std::sqrt(g.w.squaredNorm() + g.c.norm());
}

GroupElement dilate_scale(const HeisenbergStructure& s, double lambda,
                          const GroupElement& g) {
  check_element(s, g);
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation scale must be positive");
  return {lambda * g.w, (lambda * lambda) * g.c};
}

GroupElement dilate_phase(const HeisenbergStructure& s, double theta,
                          const GroupElement& g) {
  check_element(s, g);
  const cplx u = std::polar(1.0, theta);
  return {u * g.w, (u * u) * g.c};
}

int hormander_rank(const HeisenbergStructure& s) {
  if (s.N() == 0 || s.n() < 2) return 0;
  const int rows = s.n() * (s.n() - 1) / 2;
  Eigen::MatrixXcd M(rows, s.N());
  int r = 0;
  for (int i = 0; i < s.n(); ++i)
    for (int j = i + 1; j < s.n(); ++j) M.row(r++) = s.omega_entry(i, j).transpose();
  if (M.cwiseAbs().maxCoeff() == 0.0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
  return static_cast<int>(qr.rank());
}

GroupElement project(const HeisenbergStructure& s, int m,
                     const GroupElement& g) {
  check_element(s, g);
  if (m < 0 || m > s.n()) throw std::invalid_argument("projection level out of range");
  GroupElement out = g;
  for (int j = m; j < s.n(); ++j) out.w[j] = 0.0;
  return out;
}

StructurePtr make_standard_heisenberg(int n_pairs) {
  if (n_pairs < 1) throw std::invalid_argument("need at least one symplectic pair");
  const int n = 2 * n_pairs;
  Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < n_pairs; ++p) {
    O(2 * p, 2 * p + 1) = 1.0;
    O(2 * p + 1, 2 * p) = -1.0;
  }
  return std::make_shared<HeisenbergStructure>(
      n, 1, std::vector<Eigen::MatrixXcd>{O},
      "heisenberg_n" + std::to_string(n), true);
}

StructurePtr make_abelian(int n) {
  if (n < 1) throw std::invalid_argument("need at least one coordinate");
  return std::make_shared<HeisenbergStructure>(
      n, 0, std::vector<Eigen::MatrixXcd>{}, "abelian_n" + std::to_string(n),
      false);
}

StructurePtr make_weighted_family(int n, int N,
                                  const std::vector<double>& weights,
                                  std::uint64_t seed) {
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("need one weight per horizontal coordinate");
  for (double q : weights)
    if (!(q > 0.0)) throw std::invalid_argument("weights must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::vector<Eigen::MatrixXcd> omega(N, Eigen::MatrixXcd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double scale = std::sqrt(weights[i] * weights[j]);
      for (int l = 0; l < N; ++l) {
        const cplx z(gauss(rng), gauss(rng));
        omega[l](i, j) = scale * z;
        omega[l](j, i) = -scale * z;
      }
    }
  return std::make_shared<HeisenbergStructure>(
      n, N, std::move(omega),
      "weighted_n" + std::to_string(n) + "_N" + std::to_string(N) + "_s" +
          std::to_string(seed),
      true);
}

CenterPairBasis center_pair_basis(const HeisenbergStructure& s) {
  const int N = s.N();
  CenterPairBasis out;
  out.basis.resize(N, N);
  if (N == 0) {
    out.dual.resize(0, 0);
    return out;
  }
  // Greedy over lexicographic (i,j), i<j: keep a pair when its omega value
  // increases the span.  Rank test via QR on the columns kept so far.
  Eigen::MatrixXcd cols(N, 0);
  for (int i = 0; i < s.n() && static_cast<int>(out.pairs.size()) < N; ++i) {
    for (int j = i + 1; j < s.n() && static_cast<int>(out.pairs.size()) < N; ++j) {
      Eigen::VectorXcd v = s.omega_entry(i, j);
      if (v.norm() == 0.0) continue;
      Eigen::MatrixXcd trial(N, cols.cols() + 1);
      trial << cols, v;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(trial);
      if (qr.rank() == trial.cols()) {
        cols = std::move(trial);
        out.pairs.emplace_back(i, j);
      }
    }
  }
  if (static_cast<int>(out.pairs.size()) < N)
    throw structural_error("no horizontal pair basis spans the center (Hormander fails)");
  out.basis = cols;
  out.dual = cols.inverse();
  return out;
}

}  // namespace heisfock
