#pragma once

#include <complex>
#include <vector>

#include "dcl/triangulation.hpp"

namespace dcl {

using Complex = std::complex<double>;

// Vertex -> planar point over a fixed triangulation. Faces must be
// nondegenerate and positively oriented; validate() also checks that angles
// around each interior vertex tile 2pi (local injectivity).
struct Embedding {
    const Triangulation* tri = nullptr;
    std::vector<Complex> position;

    Embedding() = default;
    Embedding(const Triangulation& t, std::vector<Complex> pos);

    Complex at(VertexId i) const { return position[i]; }

    double signed_area(int face) const;
    void validate() const;  // throws on degenerate/flipped faces or folded rings
};

// Edge -> positive length satisfying strict triangle inequalities.
struct PLMetric {
    const Triangulation* tri = nullptr;
    std::vector<double> length;  // indexed by edge

    PLMetric() = default;
    PLMetric(const Triangulation& t, std::vector<double> len);

    double at(int e) const { return length[e]; }
    double at(VertexId i, VertexId j) const { return length[tri->edge_index(i, j)]; }

    // Strict triangle inequality on every face; returns violating face or -1.
    int first_nonmetric_face() const;
    bool is_metric() const { return first_nonmetric_face() < 0; }
};

PLMetric induced_metric(const Embedding& emb);

// Inner angle at `apex` in face `face` by the law of cosines, in (0, pi).
double inner_angle(const PLMetric& metric, int face, VertexId apex);

// Inner angle of a triangle with sides (opp, adj1, adj2), opp opposite the apex.
double triangle_angle(double opp, double adj1, double adj2);

struct ClassifyResult {
    bool uniformly_nondegenerate = false;   // min angle >= eps
    bool uniformly_acute = false;           // max angle <= pi/2 - eps
    bool delaunay = false;                  // opposite-angle sums <= pi (+ tol)
    double min_angle = 0, max_angle = 0;
    int min_angle_face = -1, max_angle_face = -1;
    double worst_delaunay_sum = 0;          // largest opposite-angle sum
    int worst_delaunay_edge = -1;
};

// Tolerance 1e-9 radians on the Delaunay comparison so exact cocircular input
// (square grids) classifies as Delaunay.
ClassifyResult classify(const PLMetric& metric, double epsilon, double delaunay_tol = 1e-9);

struct Circumdisk {
    Complex center;
    double radius = 0;
    bool contains(Complex z, double tol = 0) const {
        return std::abs(z - center) <= radius + tol;
    }
    // Signed distance of z to the circle, normalized by the radius;
    // negative inside.
    double signed_distance(Complex z) const {
        return (std::abs(z - center) - radius) / radius;
    }
};

Circumdisk circumdisk(const Embedding& emb, int face);

struct DelaunayWitness {
    bool delaunay = false;
    int worst_edge = -1;
    double worst_signed_distance = 0;  // min over interior edges, normalized
};

// Circumdisk form of Delaunay: no opposite vertex strictly inside a face's
// circumdisk, with a symmetric tolerance band on the normalized signed
// distance. Agrees with classify(...).delaunay for the induced metric.
DelaunayWitness delaunay_circumdisk_form(const Embedding& emb, double tol = 1e-9);

struct CoveringConstants {
    double delta = 0;  // min_f d(U_f^c, face) / diam(face) over eligible faces
    double C = 0;      // 1 + 2/delta
    int worst_face = -1;
    int eligible_faces = 0;
};

// Per-mesh covering constant: a face is eligible when its three vertices are
// interior and each of their 1-rings lies strictly inside the patch, so the
// union of ring polygons U is well defined. Distances are exact
// (segment-segment over the clipped ring boundaries).
CoveringConstants covering_constants(const Embedding& emb);

// Robust-ish in-circle: signed normalized distance of d to the circle through
// a, b, c (positively oriented). Positive outside. Accumulated in long double.
double incircle_signed(Complex a, Complex b, Complex c, Complex d);

}  // namespace dcl
