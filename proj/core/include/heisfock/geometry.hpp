#pragma once

#include <vector>

#include "heisfock/polynomial.hpp"
#include "heisfock/structure.hpp"

namespace heisfock {

/// Discretised horizontal curve: nodes A(t_i) on a grid 0 = t_0 < ... <
/// t_M = 1 with the center component derived from the lift formula
/// a' = omega(A, A')/2.  All constructors start at the identity, a(0) = 0.
struct HorizontalPath {
  StructurePtr s;
  std::vector<double> time;
  std::vector<Eigen::VectorXcd> A;
  std::vector<Eigen::VectorXcd> a;

  GroupElement endpoint() const { return {A.back(), a.back()}; }
};

/// Lifts horizontal samples to a full path by trapezoid quadrature of
/// omega(A, A')/2 with piecewise-linear slopes (exact for polygons, since
/// omega(dA,dA) = 0).
HorizontalPath lift(StructurePtr s, std::vector<Eigen::VectorXcd> A_samples,
                    std::vector<double> grid);

/// Piecewise-linear length sum |dA_i|.
double path_length(const HorizontalPath& p);

/// Largest deviation of the stored center samples from a recomputation of
/// the lift, relative to the path scale.
double lift_consistency(const HorizontalPath& p);

/// The segment t -> (tA, 0); realizes d_h(e,(A,0)) = |A| exactly.
HorizontalPath straight_witness(StructurePtr s, const Eigen::VectorXcd& A,
                                int segments = 256);

/// Closed loop from the circle A cos(2 pi t) + B sin(2 pi t) reaching the
/// pure-center point (0, pi omega(A,B)); cost at most 2 pi (|A| + |B|) up to
/// grid error.  The amplitude carries a polygon-area correction so the
/// discrete lift hits the target center exactly.
HorizontalPath center_loop_witness(StructurePtr s, const Eigen::VectorXcd& A,
                                   const Eigen::VectorXcd& B,
                                   int segments = 256);

/// Concatenation via left translation by p's endpoint; horizontal again.
HorizontalPath concat(const HorizontalPath& p, const HorizontalPath& q);

/// (A(t), a(t)) -> (lambda A(t), lambda^2 a(t)); length scales by lambda.
HorizontalPath dilate_path(const HorizontalPath& p, double lambda);

/// Two-sided estimate of the horizontal distance d_h(e, x); the true value
/// is only sandwiched, so downstream consumers must use the side that keeps
/// their inequality valid.
struct DistanceBracket {
  double lower = 0.0;
  double upper = 0.0;
  HorizontalPath witness;
  bool converged = true;
};

/// Constructive upper bound: straight segment to (A,0) concatenated with
/// center loops decomposed over the deterministic pair basis, each scaled by
/// sqrt|eps^l(a)|.  Requires the Hormander condition when the center part is
/// nonzero.
DistanceBracket distance_upper(StructurePtr s, const GroupElement& x,
                               int segments = 256);

/// |A|, the only rigorous machine-checkable lower bound; uninformative for
/// pure-center targets.
double distance_lower(const HeisenbergStructure& s, const GroupElement& x);

struct StepRule {
  double initial = 1e-2;   // first trial step; later steps are Barzilai-Borwein
  double backtrack = 0.5;
  double armijo = 1e-4;
};

struct PenaltySchedule {
  int rounds = 5;
  double initial = 10.0;
  double growth = 10.0;
};

/// Minimises path length over the discretised horizontal nodes subject to
/// lifted-endpoint = x: quadratic center penalty with multiplier updates and
/// a x10 weight schedule, then an exact micro-loop correction of any center
/// residual so the witness endpoint matches the target to float precision.
/// Never returns a length below distance_lower; on stall the best-found
/// bracket is returned with converged = false.
DistanceBracket distance_optimize(StructurePtr s, const GroupElement& x,
                                  const HorizontalPath& init, int iters,
                                  const StepRule& rule = {},
                                  const PenaltySchedule& schedule = {});

/// |f(g)| <= sqrt(fock_norm_sq) * exp(D^2 / 2t) with D an upper distance
/// estimate (valid since D >= d_h); on pure-horizontal points D = |A| is the
/// exact distance and the bound is tested sharply.
struct PointwiseRow {
  double abs_value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool pure_horizontal = false;
  bool violation = false;
};

struct PointwiseReport {
  std::vector<PointwiseRow> rows;
  int violations = 0;
  int exact_side_points = 0;
};

PointwiseReport pointwise_bound_check(const HoloPoly& f, double t,
                                      const std::vector<GroupElement>& points,
                                      int segments = 256);

}  // namespace heisfock
