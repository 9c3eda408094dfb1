#pragma once

#include <vector>

#include "dcl/embedding.hpp"
#include "dcl/triangulation.hpp"

namespace dcl {

// Discrete conformal factor, one value per vertex (log scale).
using ConformalFactor = std::vector<double>;

// u * l, edgewise l'_ij = exp((u_i+u_j)/2) l_ij. The result may violate
// triangle inequalities; query first_nonmetric_face() before trusting angles.
PLMetric conformal_change(const PLMetric& metric, const ConformalFactor& u);

// K_i(u) = 2pi - sum of incident inner angles under u*l. Requires a closed
// face cycle at i.
double curvature_at(const PLMetric& metric, const ConformalFactor& u, VertexId i);

// Curvature at every vertex of `at` (each must be interior); other entries NaN.
std::vector<double> curvature(const PLMetric& metric, const ConformalFactor& u,
                              const VertexSet& at);

struct CotanWeights {
    std::vector<double> eta;            // per edge, 1/2 (cot + cot')
    std::vector<bool> boundary_half;    // true where only one cotangent entered
};

CotanWeights cotan_weights(const PLMetric& metric, const ConformalFactor& u);

// Row of dK_i as a linear functional on du: coefficient sum(eta) on du_i and
// -eta_ij on each neighbor du_j.
struct CurvatureDifferentialRow {
    VertexId center = -1;
    double diagonal = 0;
    std::vector<std::pair<VertexId, double>> neighbor_coeff;
};

CurvatureDifferentialRow curvature_differential(const PLMetric& metric,
                                                const ConformalFactor& u, VertexId i);

// Largest margin m such that every face keeps all angles <= pi/2 - eps/2 for
// every conformal perturbation with |u|_inf <= m, located by bisection with a
// per-face grid over the perturbation box. Plays the role of the 2*delta
// acuteness box for the flow.
double acuteness_box(const PLMetric& metric, double eps, double m_max = 2.0);

enum class FlowStatus { completed, box_exit, acuteness_lost, solve_failure };

struct FlowSample {
    double t = 0;
    ConformalFactor u;            // over all vertices; meaningful on the region
    double max_abs_curvature = 0; // over interior vertices of the region
    double min_angle_margin = 0;  // pi/2 - max angle of the current metric
};

struct FlowResult {
    FlowStatus status = FlowStatus::completed;
    double exit_time = 0;
    std::vector<FlowSample> trajectory;
};

// Curvature-preserving conformal flow on the region: boundary vertices move
// with the prescribed velocity, interior velocities solve the cotangent
// harmonic system at the current factor. Classical RK4 with fixed step.
FlowResult flow_integrate(const PLMetric& metric, const VertexSet& region,
                          const std::vector<double>& boundary_velocity, double t_end,
                          double dt, double box = 0.0 /* 0: compute from metric */);

struct ZeroCurvatureOptions {
    double tol = 1e-11;       // on |K|_inf
    int max_iterations = 60;
    double eps_guard = 0.0;   // iterates must stay acute with this margin
};

// Newton solve for K = 0 at interior vertices of the region with Dirichlet
// data boundary_u; Jacobian is the curvature differential. Damped steps keep
// the iterates uniformly acute.
ConformalFactor solve_zero_curvature(const PLMetric& metric, const VertexSet& region,
                                     const std::vector<double>& boundary_u,
                                     const ZeroCurvatureOptions& opt = {});

enum class MaxPrincipleStatus { holds, violated, inconclusive };

// Local maximum principle on the 1-ring of i:
//   u'_i - u_i <= max over neighbors of (u'_j - u_j)
// requires both u*l, u'*l Delaunay on the ring and K_i = 0 for both.
MaxPrincipleStatus check_local_max_principle(const PLMetric& metric,
                                             const ConformalFactor& u,
                                             const ConformalFactor& u_prime, VertexId i,
                                             double slack = 1e-9,
                                             double curvature_tol = 1e-8);

}  // namespace dcl
