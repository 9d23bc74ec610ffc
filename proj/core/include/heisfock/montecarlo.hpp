#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heisfock/polynomial.hpp"
#include "heisfock/structure.hpp"

namespace heisfock {

/// Simulation plan for the group Brownian motion g_t = (B_t, M_t/2),
/// M_t = int omega(B, dB).  samples must split evenly across streams.
struct McConfig {
  double t = 1.0;
  int steps = 1;
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  int streams = 1;

  void validate() const;
  McConfig with(double new_t, int new_steps) const;
};

/// Sample statistic with a plain-variance standard error; the confidence
/// level is fixed at 99% (two-sided normal).
struct EstimateWithCI {
  cplx mean;
  double std_error = 0.0;
  std::int64_t samples = 0;

  static constexpr double kZ99 = 2.5758293035489008;
  double ci_half_width() const { return kZ99 * std_error; }
};

/// One independent sample stream: complex Brownian increments with
/// E|<B_t, xi_j>|^2 = t (real and imaginary parts of variance dt/2 per
/// step), Levy area accumulated by the left-point rule, which coincides
/// pathwise with the midpoint rule because omega(dB,dB) = 0.
class PathSampler {
 public:
  PathSampler(StructurePtr s, const McConfig& cfg, int stream_id);

  /// Endpoint (B_t, M_t/2) of a fresh path.
  GroupElement next();

 private:
  StructurePtr s_;
  double dt_;
  int steps_;
  std::mt19937_64 rng_;
  Eigen::VectorXcd b_;
  Eigen::VectorXcd m_;
};

/// First endpoint of the given stream; thin wrapper kept for scripting.
GroupElement sample_endpoint(StructurePtr s, const McConfig& cfg,
                             int stream_id);

/// E|f(g_t)|^2 with stream-ordered deterministic reduction.
EstimateWithCI estimate_sq_norm(const HoloPoly& f, const McConfig& cfg);

/// E f(g_t); equals f(e) for holomorphic f (martingale property).
EstimateWithCI estimate_mean(const HoloPoly& f, const McConfig& cfg);

/// Short-time slope of E|f(g_t)|^2 against the symbolic generator value
/// sum_j |(eta_j~ f)(e)|^2 (horizontal directions only).
struct GeneratorCheck {
  double mc_slope = 0.0;
  double slope_std_error = 0.0;
  double symbolic = 0.0;
  double ratio = 0.0;
  double z = 0.0;
};

GeneratorCheck short_time_generator_check(const HoloPoly& f, double t_small,
                                          const McConfig& cfg);

/// Empirical E exp(eps |g_t|_g^2 / t) per epsilon.  The divergence flag
/// fires when the top 1% of samples carries more than half of the sum.
struct FerniqueRow {
  double epsilon = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double top_share = 0.0;
  bool divergence_flag = false;
};

std::vector<FerniqueRow> fernique_diagnostic(StructurePtr s,
                                             const McConfig& cfg,
                                             const std::vector<double>& epsilons);

/// Exact Fock norm of the Taylor tensor against the Monte Carlo L^2 norm,
/// with a step-halved companion run to expose discretisation bias.
struct IsometryReport {
  double exact = 0.0;
  EstimateWithCI mc;
  EstimateWithCI mc_refined;  // 2x steps, fresh seed
  int steps = 0;
  double z = 0.0;        // (mc - exact) / SE
  double z_refine = 0.0; // (mc - mc_refined) / joint SE
};

IsometryReport isometry_report(const HoloPoly& f, double t, const McConfig& cfg);

/// Stream seed derivation shared by all samplers (counter-based splitmix).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream_id);

}  // namespace heisfock
