#pragma once

#include <optional>

#include "dcl/embedding.hpp"
#include "dcl/network.hpp"

namespace dcl {

// Round annulus { z : r < |z - center| < r_outer }.
struct RoundAnnulus {
    Complex center;
    double r = 0;
    double r_outer = 0;
};

// Conformal modulus log(r'/r) / (2 pi).
double modulus_round(const RoundAnnulus& a);

// A piecewise-linear map given by matched source/target triangulations.
struct PLMap {
    const Triangulation* tri = nullptr;
    const Embedding* src = nullptr;
    const Embedding* dst = nullptr;
};

struct DilatationResult {
    double max_dilatation = 1;  // max over faces of sigma_max / sigma_min
    int worst_face = -1;
};

// Quasiconformal dilatation of a PL map, from the singular values of the
// per-face affine differentials.  Throws if any face degenerates or flips.
DilatationResult dilatation(const PLMap& map);

// Largest round annulus centered at `center` separating the point sets:
// all of `inner` inside the inner circle (closed), all of `outer` outside.
// Empty optional if no such annulus with r_outer > r exists.
std::optional<RoundAnnulus> contains_round_annulus(Complex center,
                                                   const std::vector<Complex>& inner,
                                                   const std::vector<Complex>& outer);

// If two round annuli with common inner disk are nested, the modulus
// threshold that forces comparable outer radii.  Exposed as a parameter;
// the conservative default is 100.
struct ModulusComparisonOptions {
    double threshold = 100;
};

struct OscillationBoundInputs {
    double eps = 0;        // acuteness margin of both triangulations
    double curvature_sup = 0;  // sup |K| along the comparison
    double covering_c = 0;     // covering constant C of the target
};

// Bound on max u - min u over a one-ring:
//   2 M(eps) + 2 log C + log C' - log 2,   M = 2 log(1/sin eps) + 3,
//   C' = exp(200 pi K_sup).
double oscillation_bound(const OscillationBoundInputs& in);

struct ModulusEstimate {
    double value = 0;          // extremal length of inner-to-outer curves
    double exact = 0;          // modulus of the round annulus it discretizes
    int vertex_count = 0;
};

// Discrete-conformal estimate of the modulus of a round annulus: build an
// acute triangulated annulus, refine `levels` times by midpoint subdivision,
// and compute the extremal length between the two boundary loops using
// cotangent conductances.
ModulusEstimate modulus_estimate(double r, double r_outer, int levels);

// The acute annulus mesh behind modulus_estimate, exposed for reuse.
struct AnnulusMesh {
    std::vector<Face> faces;
    std::vector<Complex> pos;
    std::vector<VertexId> inner_loop;
    std::vector<VertexId> outer_loop;
};

AnnulusMesh make_annulus(double r, double r_outer, int n_theta, int n_layers);

// One 4:1 midpoint subdivision step (preserves all angles).
AnnulusMesh subdivide_midpoint(const AnnulusMesh& m);

}  // namespace dcl
