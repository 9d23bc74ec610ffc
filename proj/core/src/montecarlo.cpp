#include "heisfock/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "heisfock/fock.hpp"

namespace heisfock {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Runs work(stream_id) for every stream on a small thread pool.  Workers
/// write only into their own slot, so scheduling cannot affect results.
void parallel_streams(int streams, const std::function<void(int)>& work) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int nthreads = static_cast<int>(std::min<unsigned>(hw, streams));
  if (nthreads <= 1) {
    for (int i = 0; i < streams; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < streams; i = next.fetch_add(1)) work(i);
    });
  for (auto& th : pool) th.join();
}

/// Monomial list unpacked from the coefficient map for fast evaluation.
struct FlatPoly {
  struct Term {
    cplx coef;
    std::vector<std::pair<int, int>> factors;  // (coordinate, exponent)
  };
  int n = 0;
  std::vector<Term> terms;
};

FlatPoly flatten(const HoloPoly& f) {
  FlatPoly fp;
  fp.n = f.structure()->n();
  for (const auto& [mono, coef] : f.terms()) {
    FlatPoly::Term t;
    t.coef = coef;
    for (int i = 0; i < static_cast<int>(mono.size()); ++i)
      if (mono[i] > 0) t.factors.emplace_back(i, mono[i]);
    fp.terms.push_back(std::move(t));
  }
  return fp;
}

cplx eval_flat(const FlatPoly& fp, const GroupElement& g) {
  cplx total = 0.0;
  for (const auto& t : fp.terms) {
    cplx v = t.coef;
    for (const auto& [idx, e] : t.factors) {
      const cplx base = idx < fp.n ? g.w[idx] : g.c[idx - fp.n];
      for (int r = 0; r < e; ++r) v *= base;
    }
    total += v;
  }
  return total;
}

struct StreamSums {
  cplx sum{0.0};
  double sum_abs_sq = 0.0;
};

/// Accumulates value(endpoint) per stream, then folds in ascending stream
/// order.  The fold order is part of the determinism contract.
EstimateWithCI accumulate(StructurePtr s, const McConfig& cfg,
                          const std::function<cplx(const GroupElement&)>& value) {
  cfg.validate();
  const std::int64_t per_stream = cfg.samples / cfg.streams;
  std::vector<StreamSums> sums(cfg.streams);
  parallel_streams(cfg.streams, [&](int id) {
    PathSampler sampler(s, cfg, id);
    StreamSums acc;
    for (std::int64_t i = 0; i < per_stream; ++i) {
      const cplx v = value(sampler.next());
      acc.sum += v;
      acc.sum_abs_sq += std::norm(v);
    }
    sums[id] = acc;
  });
  cplx total{0.0};
  double total_sq = 0.0;
  for (const auto& p : sums) {
    total += p.sum;
    total_sq += p.sum_abs_sq;
  }
  const double count = static_cast<double>(cfg.samples);
  EstimateWithCI est;
  est.samples = cfg.samples;
  est.mean = total / count;
  const double var = std::max(0.0, (total_sq - std::norm(total) / count) / (count - 1.0));
  est.std_error = std::sqrt(var / count);
  return est;
}

}  // namespace

void McConfig::validate() const {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  if (steps < 1) throw std::invalid_argument("need at least one step");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  if (streams < 1) throw std::invalid_argument("need at least one stream");
  if (samples % streams != 0)
    throw std::invalid_argument("samples must divide evenly across streams");
}

McConfig McConfig::with(double new_t, int new_steps) const {
  McConfig c = *this;
  c.t = new_t;
  c.steps = new_steps;
  return c;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream_id) {
  return splitmix64(seed + (stream_id + 1) * 0x9E3779B97F4A7C15ULL);
}

PathSampler::PathSampler(StructurePtr s, const McConfig& cfg, int stream_id)
    : s_(std::move(s)),
      dt_(cfg.t / cfg.steps),
      steps_(cfg.steps),
      rng_(derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(stream_id))),
      b_(Eigen::VectorXcd::Zero(s_->n())),
      m_(Eigen::VectorXcd::Zero(s_->N())) {
  cfg.validate();
}

GroupElement PathSampler::next() {
  const int n = s_->n();
  const int N = s_->N();
  const double sd = std::sqrt(dt_ / 2.0);
  std::normal_distribution<double> gauss(0.0, sd);
  b_.setZero();
  m_.setZero();
  Eigen::VectorXcd db(n);
  for (int step = 0; step < steps_; ++step) {
    for (int j = 0; j < n; ++j) {
      const double re = gauss(rng_);
      const double im = gauss(rng_);
      db[j] = cplx(re, im);
    }
    // left-point rule for the Levy area increment
    for (int l = 0; l < N; ++l)
      m_[l] += cplx(b_.transpose() * s_->omega_matrix(l) * db);
    b_ += db;
  }
  return {b_, 0.5 * m_};
}

GroupElement sample_endpoint(StructurePtr s, const McConfig& cfg,
                             int stream_id) {
  PathSampler sampler(std::move(s), cfg, stream_id);
  return sampler.next();
}

EstimateWithCI estimate_sq_norm(const HoloPoly& f, const McConfig& cfg) {
  const FlatPoly fp = flatten(f);
  return accumulate(f.structure(), cfg, [&](const GroupElement& g) {
    return cplx(std::norm(eval_flat(fp, g)), 0.0);
  });
}

EstimateWithCI estimate_mean(const HoloPoly& f, const McConfig& cfg) {
  const FlatPoly fp = flatten(f);
  return accumulate(f.structure(), cfg,
                    [&](const GroupElement& g) { return eval_flat(fp, g); });
}

GeneratorCheck short_time_generator_check(const HoloPoly& f, double t_small,
                                          const McConfig& cfg) {
  const auto& s = *f.structure();
  const GroupElement e = identity_element(s);
  const EstimateWithCI est = estimate_sq_norm(f, cfg.with(t_small, cfg.steps));
  GeneratorCheck out;
  out.mc_slope = (est.mean.real() - std::norm(f.evaluate(e))) / t_small;
  out.slope_std_error = est.std_error / t_small;
  for (int j = 0; j < s.n(); ++j)
    out.symbolic += std::norm(lie_derive(f, basis_vector(s, j)).evaluate(e));
  out.ratio = out.symbolic != 0.0 ? out.mc_slope / out.symbolic : out.mc_slope;
  out.z = out.slope_std_error > 0.0
              ? (out.mc_slope - out.symbolic) / out.slope_std_error
              : 0.0;
  return out;
}

std::vector<FerniqueRow> fernique_diagnostic(
    StructurePtr s, const McConfig& cfg, const std::vector<double>& epsilons) {
  cfg.validate();
  const std::int64_t per_stream = cfg.samples / cfg.streams;
  std::vector<std::vector<double>> per(cfg.streams);
  parallel_streams(cfg.streams, [&](int id) {
    PathSampler sampler(s, cfg, id);
    auto& slot = per[id];
    slot.reserve(per_stream);
    for (std::int64_t i = 0; i < per_stream; ++i) {
      const GroupElement g = sampler.next();
      const double hn = homogeneous_norm(*s, g);
      slot.push_back(hn * hn / cfg.t);
    }
  });
  std::vector<double> x;
  x.reserve(cfg.samples);
  for (const auto& slot : per) x.insert(x.end(), slot.begin(), slot.end());

  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  const std::size_t top = std::max<std::size_t>(1, x.size() / 100);

  std::vector<FerniqueRow> rows;
  for (double eps : epsilons) {
    FerniqueRow row;
    row.epsilon = eps;
    double sum = 0.0, sumsq = 0.0;
    for (double xi : x) {
      const double v = std::exp(eps * xi);
      sum += v;
      sumsq += v * v;
    }
    double top_sum = 0.0;
    for (std::size_t i = 0; i < top; ++i) top_sum += std::exp(eps * x[order[i]]);
    const double count = static_cast<double>(x.size());
    row.mean = sum / count;
    row.std_error =
        std::sqrt(std::max(0.0, (sumsq - sum * sum / count) / (count - 1.0)) / count);
    row.top_share = sum > 0.0 ? top_sum / sum : 0.0;
    row.divergence_flag = row.top_share > 0.5;
    rows.push_back(row);
  }
  return rows;
}

IsometryReport isometry_report(const HoloPoly& f, double t,
                               const McConfig& cfg) {
  IsometryReport rep;
  rep.steps = cfg.steps;
  const GradedTensor alpha = taylor_tensor(f, std::max(0, f.weighted_degree()));
  rep.exact = fock_norm_sq(alpha, t);
  rep.mc = estimate_sq_norm(f, cfg.with(t, cfg.steps));
  McConfig refined = cfg.with(t, 2 * cfg.steps);
  refined.seed = derive_stream_seed(cfg.seed, 0x5EEDFULL);
  rep.mc_refined = estimate_sq_norm(f, refined);
  rep.z = rep.mc.std_error > 0.0 ? (rep.mc.mean.real() - rep.exact) / rep.mc.std_error : 0.0;
  const double joint =
      std::hypot(rep.mc.std_error, rep.mc_refined.std_error);
  rep.z_refine =
      joint > 0.0 ? (rep.mc.mean.real() - rep.mc_refined.mean.real()) / joint : 0.0;
  return rep;
}

}  // namespace heisfock
