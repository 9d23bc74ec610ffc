#include "heisfock/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heisfock/fock.hpp"

namespace heisfock {

namespace {

using std::numbers::pi;

Eigen::VectorXcd lift_increment(const HeisenbergStructure& s,
                                const Eigen::VectorXcd& A0,
                                const Eigen::VectorXcd& A1) {
  // trapezoid of omega(A, A')/2 over one segment
  const Eigen::VectorXcd dA = A1 - A0;
  return 0.25 * (s.omega(A0, dA) + s.omega(A1, dA));
}

std::vector<double> uniform_grid(int segments) {
  std::vector<double> t(segments + 1);
  for (int i = 0; i <= segments; ++i) t[i] = static_cast<double>(i) / segments;
  return t;
}

cplx csgn(cplx z) { return std::abs(z) > 0.0 ? z / std::abs(z) : cplx(1.0); }

}  // namespace

HorizontalPath lift(StructurePtr s, std::vector<Eigen::VectorXcd> A_samples,
                    std::vector<double> grid) {
  if (A_samples.size() != grid.size() || grid.size() < 2)
    throw std::invalid_argument("need matching grid and horizontal samples");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be increasing");
  for (const auto& A : A_samples)
    if (A.size() != s->n()) throw structural_error("horizontal sample has wrong dimension");
  HorizontalPath p;
  p.s = std::move(s);
  p.time = std::move(grid);
  p.A = std::move(A_samples);
  p.a.resize(p.A.size());
  p.a[0] = Eigen::VectorXcd::Zero(p.s->N());
  for (std::size_t i = 1; i < p.A.size(); ++i)
    p.a[i] = p.a[i - 1] + lift_increment(*p.s, p.A[i - 1], p.A[i]);
  return p;
}

double path_length(const HorizontalPath& p) {
  double len = 0.0;
  for (std::size_t i = 1; i < p.A.size(); ++i) len += (p.A[i] - p.A[i - 1]).norm();
  return len;
}

double lift_consistency(const HorizontalPath& p) {
  double scale = 1.0;
  for (const auto& A : p.A) scale = std::max(scale, A.norm());
  scale = scale * scale + 1.0;
  double worst = p.a[0].norm() / scale;
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(p.s->N());
  for (std::size_t i = 1; i < p.A.size(); ++i) {
    acc += lift_increment(*p.s, p.A[i - 1], p.A[i]);
    worst = std::max(worst, (p.a[i] - acc).norm() / scale);
  }
  return worst;
}

HorizontalPath straight_witness(StructurePtr s, const Eigen::VectorXcd& A,
                                int segments) {
  std::vector<double> grid = uniform_grid(segments);
  std::vector<Eigen::VectorXcd> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = grid[i] * A;
  return lift(std::move(s), std::move(samples), std::move(grid));
}

HorizontalPath center_loop_witness(StructurePtr s, const Eigen::VectorXcd& A,
                                   const Eigen::VectorXcd& B, int segments) {
  const int M = segments;
  // The discrete lift of the inscribed polygon reaches
  // (M sin(2 pi/M) / 2) omega(A,B); rescale so it ends at pi omega(A,B)
  // exactly.
  const double kappa = M * std::sin(2.0 * pi / M) / (2.0 * pi);
  const double amp = 1.0 / std::sqrt(kappa);
  std::vector<double> grid = uniform_grid(M);
  std::vector<Eigen::VectorXcd> samples(grid.size());
  for (int i = 0; i <= M; ++i) {
    const double phase = 2.0 * pi * grid[i];
    samples[i] = amp * (std::cos(phase) * A + std::sin(phase) * B - A);
  }
  samples[M] = samples[0];  // close the loop bit-exactly
  return lift(std::move(s), std::move(samples), std::move(grid));
}

HorizontalPath concat(const HorizontalPath& p, const HorizontalPath& q) {
  if (p.s->n() != q.s->n() || p.s->N() != q.s->N())
    throw structural_error("paths live on different structures");
  const Eigen::VectorXcd w0 = p.A.back();
  std::vector<double> grid;
  std::vector<Eigen::VectorXcd> samples;
  grid.reserve(p.time.size() + q.time.size() - 1);
  samples.reserve(grid.capacity());
  for (std::size_t i = 0; i < p.time.size(); ++i) {
    grid.push_back(0.5 * p.time[i]);
    samples.push_back(p.A[i]);
  }
  for (std::size_t i = 1; i < q.time.size(); ++i) {
    grid.push_back(0.5 + 0.5 * q.time[i]);
    samples.push_back(w0 + q.A[i]);
  }
  return lift(p.s, std::move(samples), std::move(grid));
}

HorizontalPath dilate_path(const HorizontalPath& p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation scale must be positive");
  std::vector<Eigen::VectorXcd> samples = p.A;
  for (auto& A : samples) A *= lambda;
  return lift(p.s, std::move(samples), p.time);
}

double distance_lower(const HeisenbergStructure& s, const GroupElement& x) {
  check_element(s, x);
  return x.w.norm();
}

namespace {

/// Center loops realizing (0, c) over the deterministic pair basis; empty
/// when c = 0.
std::vector<HorizontalPath> center_loops(const StructurePtr& s,
                                         const Eigen::VectorXcd& c,
                                         int segments) {
  std::vector<HorizontalPath> loops;
  if (c.size() == 0 || c.norm() == 0.0) return loops;
  const CenterPairBasis pb = center_pair_basis(*s);
  const Eigen::VectorXcd eps = pb.dual * (c / pi);
  for (int l = 0; l < s->N(); ++l) {
    if (std::abs(eps[l]) == 0.0) continue;
    const double root = std::sqrt(std::abs(eps[l]));
    Eigen::VectorXcd A = Eigen::VectorXcd::Zero(s->n());
    Eigen::VectorXcd B = Eigen::VectorXcd::Zero(s->n());
    A[pb.pairs[l].first] = csgn(eps[l]) * root;
    B[pb.pairs[l].second] = root;
    loops.push_back(center_loop_witness(s, A, B, segments));
  }
  return loops;
}

}  // namespace

DistanceBracket distance_upper(StructurePtr s, const GroupElement& x,
                               int segments) {
  check_element(*s, x);
  DistanceBracket out;
  out.lower = distance_lower(*s, x);
  HorizontalPath path = straight_witness(s, x.w, segments);
  for (const auto& loop : center_loops(s, x.c, segments)) path = concat(path, loop);
  out.upper = path_length(path);
  out.witness = std::move(path);
  return out;
}

namespace {

/// Augmented-Lagrangian state for the discretised length minimisation.
struct OptimizerWork {
  const HeisenbergStructure* s;
  std::vector<Eigen::VectorXcd> nodes;  // interior nodes; ends are pinned
  Eigen::VectorXcd start;
  Eigen::VectorXcd target_w;
  Eigen::VectorXcd target_c;
  double mu = 0.0;
  Eigen::VectorXcd lambda;  // complex multiplier, one per center coordinate

  const Eigen::VectorXcd& node(int i) const {
    const int M = static_cast<int>(nodes.size()) + 1;
    if (i <= 0) return start;
    if (i >= M) return target_w;
    return nodes[i - 1];
  }

  int segment_count() const { return static_cast<int>(nodes.size()) + 1; }

  Eigen::VectorXcd residual() const {
    Eigen::VectorXcd r = -target_c;
    for (int i = 0; i < segment_count(); ++i)
      r += lift_increment(*s, node(i), node(i + 1));
    return r;
  }

  double energy() const {
    double e = 0.0;
    for (int i = 0; i < segment_count(); ++i)
      e += (node(i + 1) - node(i)).squaredNorm();
    return e;
  }

  double objective() const {
    const Eigen::VectorXcd r = residual();
    return energy() + mu * r.squaredNorm() + 2.0 * lambda.dot(r).real();
  }

  /// Real gradient in complex representation, one entry per interior node.
  std::vector<Eigen::VectorXcd> gradient() const {
    const int M = segment_count();
    const Eigen::VectorXcd r = residual();
    const Eigen::VectorXcd q = 2.0 * mu * r + 2.0 * lambda;
    std::vector<Eigen::VectorXcd> g(nodes.size());
    for (int j = 1; j < M; ++j) {
      Eigen::VectorXcd gj = 2.0 * (2.0 * node(j) - node(j - 1) - node(j + 1));
      const Eigen::VectorXcd v = node(j + 1) - node(j - 1);
      Eigen::VectorXcd kap = Eigen::VectorXcd::Zero(s->n());
      for (int l = 0; l < s->N(); ++l)
        kap += 0.5 * std::conj(q[l]) * (s->omega_matrix(l) * v);
      gj += kap.conjugate();
      g[j - 1] = gj;
    }
    return g;
  }
};

double dot_real(const std::vector<Eigen::VectorXcd>& a,
                const std::vector<Eigen::VectorXcd>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d += a[i].real().dot(b[i].real()) + a[i].imag().dot(b[i].imag());
  return d;
}

}  // namespace

DistanceBracket distance_optimize(StructurePtr s, const GroupElement& x,
                                  const HorizontalPath& init, int iters,
                                  const StepRule& rule,
                                  const PenaltySchedule& schedule) {
  check_element(*s, x);
  if (init.A.size() < 3) throw std::invalid_argument("initial path needs interior nodes");

  OptimizerWork work;
  work.s = s.get();
  work.start = Eigen::VectorXcd::Zero(s->n());
  work.target_w = x.w;
  work.target_c = x.c;
  work.lambda = Eigen::VectorXcd::Zero(s->N());
  work.mu = schedule.initial;
  work.nodes.assign(init.A.begin() + 1, init.A.end() - 1);

  double path_scale = 1.0 + x.w.norm() + std::sqrt(x.c.norm());
  for (const auto& nd : work.nodes) path_scale = std::max(path_scale, nd.norm());

  bool stalled = false;
  for (int round = 0; round < schedule.rounds; ++round) {
    std::vector<Eigen::VectorXcd> grad = work.gradient();
    std::vector<Eigen::VectorXcd> prev_nodes, prev_grad;
    double value = work.objective();
    // first trial step moves nodes by ~initial * path scale; afterwards the
    // Barzilai-Borwein quotient takes over
    double step = rule.initial * path_scale /
                  std::max(1e-12, std::sqrt(dot_real(grad, grad)));
    int it = 0;
    for (; it < iters; ++it) {
      const double gnorm2 = dot_real(grad, grad);
      if (gnorm2 < 1e-24) break;
      // Armijo backtracking along the negative gradient.
      std::vector<Eigen::VectorXcd> trial = work.nodes;
      double trial_value = value;
      double st = step;
      bool accepted = false;
      for (int bt = 0; bt < 40; ++bt) {
        for (std::size_t i = 0; i < trial.size(); ++i)
          trial[i] = work.nodes[i] - st * grad[i];
        std::swap(work.nodes, trial);
        trial_value = work.objective();
        std::swap(work.nodes, trial);
        if (trial_value <= value - rule.armijo * st * gnorm2) {
          accepted = true;
          break;
        }
        st *= rule.backtrack;
      }
      if (!accepted) {
        // no descent step found; only a still-substantial gradient counts
        // as a stall, otherwise this is float-level convergence
        stalled = stalled || gnorm2 > 1e-10 * (1.0 + value * value);
        break;
      }
      prev_nodes = work.nodes;
      prev_grad = grad;
      work.nodes.swap(trial);
      value = trial_value;
      grad = work.gradient();
      // Barzilai-Borwein step for the next iteration.
      double sy = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) {
        const Eigen::VectorXcd ds = work.nodes[i] - prev_nodes[i];
        const Eigen::VectorXcd dy = grad[i] - prev_grad[i];
        sy += ds.real().dot(dy.real()) + ds.imag().dot(dy.imag());
        ss += ds.squaredNorm();
      }
      step = (sy > 1e-30) ? std::clamp(ss / sy, 1e-12, 1e6) : rule.initial;
    }
    const Eigen::VectorXcd r = work.residual();
    work.lambda += work.mu * r;
    work.mu *= schedule.growth;
  }

  // Assemble the optimized witness and repair any center residual with an
  // exact micro-loop so the endpoint matches the target to float precision.
  std::vector<Eigen::VectorXcd> samples;
  samples.reserve(work.nodes.size() + 2);
  samples.push_back(work.start);
  for (const auto& nd : work.nodes) samples.push_back(nd);
  samples.push_back(work.target_w);
  HorizontalPath opt = lift(s, std::move(samples), uniform_grid(work.segment_count()));

  const int loop_segments = static_cast<int>(init.A.size()) - 1;
  Eigen::VectorXcd residual = x.c - opt.endpoint().c;
  const double res_norm = residual.size() > 0 ? residual.norm() : 0.0;
  if (res_norm > 0.0)
    for (const auto& loop : center_loops(s, residual, loop_segments))
      opt = concat(opt, loop);

  DistanceBracket out;
  out.lower = distance_lower(*s, x);
  out.converged = !stalled && res_norm <= 1e-6 * (1.0 + x.c.norm());

  // Fall back to the construction bound when it is better.
  DistanceBracket constructed = distance_upper(s, x, loop_segments);
  const double opt_len = path_length(opt);
  if (opt_len <= constructed.upper) {
    out.upper = opt_len;
    out.witness = std::move(opt);
  } else {
    out.upper = constructed.upper;
    out.witness = std::move(constructed.witness);
  }
  return out;
}

PointwiseReport pointwise_bound_check(const HoloPoly& f, double t,
                                      const std::vector<GroupElement>& points,
                                      int segments) {
  const auto s = f.structure();
  const GradedTensor alpha = taylor_tensor(f, std::max(0, f.weighted_degree()));
  const double norm = std::sqrt(fock_norm_sq(alpha, t));
  PointwiseReport rep;
  for (const auto& g : points) {
    PointwiseRow row;
    row.pure_horizontal = g.c.size() == 0 || g.c.norm() == 0.0;
    const double D =
        row.pure_horizontal ? g.w.norm() : distance_upper(s, g, segments).upper;
    row.abs_value = std::abs(f.evaluate(g));
    row.bound = norm * std::exp(D * D / (2.0 * t));
    row.ratio = row.bound > 0.0 ? row.abs_value / row.bound : (row.abs_value > 0.0 ? 1e300 : 0.0);
    row.violation = row.abs_value > row.bound * (1.0 + 1e-10);
    if (row.violation) ++rep.violations;
    if (row.pure_horizontal) ++rep.exact_side_points;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace heisfock
