#pragma once

#include <cstdint>

#include "dcl/embedding.hpp"
#include "dcl/network.hpp"

namespace dcl {

struct PatchData {
    std::vector<Face> faces;
    std::vector<Complex> pos;
};

// Equilateral hexagonal patch: all unit-lattice vertices within `rings`
// lattice steps of the origin, triangulated by the lattice triangles.
PatchData hex_patch(int rings);

// Hexagonal patch with vertices jittered by a uniform disk of radius
// `jitter`, rejection-sampled until uniformly acute with margin eps.
// Deterministic per seed; throws when the attempt budget is exhausted.
PatchData generate_perturbed_acute(int rings, double jitter, double eps,
                                   std::uint64_t seed, int budget = 200);

// Triangular-lattice disk of radius R folded by the order-12 symmetry group
// of the lattice (rotations by 60 degrees and a mirror).  Conductances and
// edge multiplicities accumulate orbit weights so that the Dirichlet energy
// of any symmetric function on the full lattice equals the energy on the
// quotient; radius-defined vertex sets and extremal lengths computed on the
// quotient therefore agree with the full lattice exactly.
struct QuotientLattice {
    Network net;                       // conductance = multiplicity * eta_unit
    std::vector<Complex> pos;          // canonical representative positions
    std::vector<double> orbit_size;    // per vertex: 1, 6, or 12
    std::vector<double> edge_length;   // all 1 (unit lattice)
    std::vector<double> edge_multiplicity;  // full-lattice edges per quotient edge
    std::vector<double> self_edge_mult;     // full edges joining a vertex's own orbit
    long long full_vertex_count = 0;
};

QuotientLattice hex_lattice_quotient(double radius, double eta_unit);

}  // namespace dcl
