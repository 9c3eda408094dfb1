#pragma once

#include <string>

#include "dcl/conformal.hpp"
#include "dcl/embedding.hpp"

namespace dcl {

struct RecoverResult {
    ConformalFactor u;
    double max_residual = 0;  // max edge gap |(u_i+u_j)/2 - log(l'/l)|
};

// Invert the conformal-change relation: least-squares solve of
// (u_i+u_j)/2 = log(l'_ij / l_ij) over all edges.  Throws if the residual
// exceeds `tol` (no conformal factor relates the embeddings).
RecoverResult recover_factor(const Embedding& emb_phi, const Embedding& emb_psi,
                             double tol = 1e-9);

struct OscillationReport {
    std::string experiment = "oscillation";
    int vertex_count = 0;
    int face_count = 0;
    double eps_measured = 0;       // acuteness margin common to both patches
    double delta = 0;              // covering separation ratio
    double covering_c = 0;         // C = 1 + 2/delta
    double curvature_sup = 0;      // sup |K| over interior vertices, both metrics
    double c_prime = 0;            // exp(200 pi K_sup)
    double m_const = 0;            // 2 log(1/sin eps) + 3
    double bound = 0;              // 2M + 2 log C + log C' - log 2
    double oscillation = 0;        // max |u_j - u_j'| over admissible pairs
    int admissible_pairs = 0;
    bool applicable = false;       // admissible pairs exist at this scale
    bool pass = false;             // applicable implies oscillation <= bound + tol
    double max_dilatation = 0;
    double runtime_seconds = 0;
};

// Measures the oscillation of the recovered conformal factor over vertex
// pairs deep inside both patches (images within radius r/(2C) of the patch
// centers, r the inradius of the respective image), and compares it with
// the computed theoretical bound.  On small truncations no pair may
// qualify; the report then says "not applicable" instead of failing.
OscillationReport oscillation_experiment(const Embedding& emb_phi,
                                         const Embedding& emb_psi,
                                         double epsilon,
                                         double tol = 1e-9);

struct TruncationCheck {
    double radius = 0;
    int interior_count = 0;
    FlowStatus status = FlowStatus::completed;
    double max_gap = 0;    // max_i |bar_u_i - u_i(delta)|
    double bound = 0;      // |bar_u|_inf - delta
    double exit_time = 0;  // flow end (== delta when completed)
    bool ok = false;
};

struct FlowExperimentReport {
    std::string experiment = "flow_to_constant";
    double bar_u_sup = 0;
    double delta = 0;
    std::vector<TruncationCheck> truncations;
    bool pass = false;
    double runtime_seconds = 0;
};

// Runs the curvature-preserving flow with boundary velocity bar_u/|bar_u|_inf
// to time delta on nested radius truncations of the patch, and verifies the
// contraction estimate |bar_u_i - u_i(delta)| <= |bar_u|_inf - delta.
// bar_u must be curvature-preserving and normalized so that
// -inf bar_u = sup bar_u = |bar_u|_inf; radii empty selects three nested
// truncations automatically.
FlowExperimentReport flow_to_constant_experiment(const Embedding& patch,
                                                 const ConformalFactor& bar_u,
                                                 double delta,
                                                 std::vector<double> radii = {},
                                                 double dt = 1e-3,
                                                 double tol = 1e-6);

std::string to_json(const OscillationReport& r);
std::string to_json(const FlowExperimentReport& r);

}  // namespace dcl
