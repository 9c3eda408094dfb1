#pragma once

#include <complex>
#include <vector>

#include "dcl/conformal.hpp"
#include "dcl/embedding.hpp"

namespace dcl {

// Poincare-disk primitives. Points must satisfy |z| < 1 - 1e-12.

void require_in_disk(Complex z);

// The disk automorphism z -> (z - a) / (1 - conj(a) z), the single Moebius
// primitive used everywhere.
Complex mobius(Complex a, Complex z);

double hyp_distance(Complex z1, Complex z2);

struct SinhHalfIdentity {
    double lhs = 0;  // sinh(d_h/2)
    double rhs = 0;  // |z1-z2| / sqrt((1-|z1|^2)(1-|z2|^2))
};

SinhHalfIdentity sinh_half_identity(Complex z1, Complex z2);

using HyperbolicFactor = std::vector<double>;

struct HyperbolicFactorResult {
    HyperbolicFactor uh;
    double max_edge_relation_gap = 0;  // hyperbolic conformal relation, relative
};

// u^h_i = u_i + log((1-|z_i|^2)/(1-|z'_i|^2)); verifies both the Euclidean
// consistency l(dst) = u * l(src) and the per-edge hyperbolic relation
//   sinh(d_h(z'_i,z'_j)/2) = exp((u^h_i+u^h_j)/2) sinh(d_h(z_i,z_j)/2).
HyperbolicFactorResult to_hyperbolic_factor(const ConformalFactor& u,
                                            const Embedding& emb_src,
                                            const Embedding& emb_dst,
                                            double consistency_tol = 1e-9);

struct HypMaxPrincipleReport {
    double min_interior = 0;
    double min_boundary = 0;
    bool ok = false;                 // boundary >= 0 implies interior >= -1e-9
    bool descent_witness_ok = true;  // every interior u^h<0 has a strictly
                                     // smaller neighbor
};

HypMaxPrincipleReport check_hyperbolic_max_principle(const Triangulation& tri,
                                                     const VertexSet& region,
                                                     const HyperbolicFactor& uh,
                                                     double slack = 1e-9);

// Inverse exponential map at z0: |v| = d_h(z0, z), direction = initial
// direction of the geodesic from z0 to z under the T_{z0}D = C identification.
Complex hyperbolic_log_map(Complex z0, Complex z);

enum class RingEmbedStatus { ok, inconclusive };

struct RingEmbedResult {
    RingEmbedStatus status = RingEmbedStatus::inconclusive;
    bool embeds = false;
    std::vector<double> wrap_angles;  // arg(v_{k+1}/v_k), expected in (0, pi)
    double wrap_sum = 0;              // expected 2 pi
    bool delaunay_match = true;       // Euclidean vs hyperbolic Delaunay agree
};

// Hyperbolic re-embedding of a Euclidean 1-ring in the disk: center plus
// counterclockwise neighbor cycle. Acuteness is a precondition; its failure
// yields an inconclusive status, not false.
RingEmbedResult one_ring_hyperbolic_embed(Complex center,
                                          const std::vector<Complex>& cycle,
                                          double tol = 1e-9);

}  // namespace dcl
