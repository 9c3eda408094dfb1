#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "dcl/triangulation.hpp"

namespace dcl {

struct NetEdge {
    int a = 0, b = 0;
    double conductance = 0;  // eta; resistance mu = 1/eta
};

// Finite electrical network: any graph with positive conductances. Built from
// a triangulation's 1-skeleton or read from file.
class Network {
public:
    Network() : n_(0) {}  // empty network
    Network(int vertex_count, std::vector<NetEdge> edges);

    int vertex_count() const { return n_; }
    const std::vector<NetEdge>& edges() const { return edges_; }
    double resistance(int e) const { return 1.0 / edges_[e].conductance; }
    // (edge index, neighbor) pairs.
    const std::vector<std::pair<int, int>>& incident(int v) const { return adj_[v]; }

private:
    int n_;
    std::vector<NetEdge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

// Graph-level set calculus (same definitions as VertexSet, over any graph).
std::vector<bool> graph_boundary(const Network& net, const std::vector<bool>& s);
std::vector<bool> graph_interior(const Network& net, const std::vector<bool>& s);
std::vector<bool> graph_closure(const Network& net, const std::vector<bool>& s);

struct DirichletResult {
    std::vector<double> f;      // values over region vertices; NaN outside
    double max_residual = 0;    // interior harmonicity residual, sup norm
};

// f = g on the region boundary, eta-harmonic at region-interior vertices.
// Direct sparse factorization up to ~2e6 unknowns, conjugate gradient beyond.
DirichletResult solve_dirichlet(const Network& net, const std::vector<bool>& region,
                                const std::vector<double>& g);

// Same solve with an explicit fixed set instead of a region: f = g on the
// fixed vertices, harmonic everywhere else.
DirichletResult solve_dirichlet_fixed(const Network& net, const std::vector<bool>& fixed,
                                      const std::vector<double>& g);

struct ELProblem {
    const Network* net = nullptr;
    std::vector<bool> v1, v2;  // disjoint, nonempty
};

// Edges with an endpoint in V0 = (V1 u V2)^c.
std::vector<int> edge_pool_E0(const ELProblem& p);

struct ELResult {
    double value = std::numeric_limits<double>::infinity();
    bool connected = false;            // V1 reachable from V2 through E0
    std::vector<double> w;             // optimal density on edges (0 off E0)
};

// Extremal length via the harmonic characterization: potential 0 on V1 and 1
// on V2, w the edge currents normalized to unit total current; EL equals the
// effective resistance over E0.
ELResult extremal_length(const ELProblem& p);

struct EWOptions {
    int max_constraints = 1000000;
    double tol = 1e-10;
};

// Extremal width by constraint generation over paths: shortest-path
// separation plus an active-set quadratic solve. Intended for small instances.
ELResult extremal_width(const ELProblem& p, const EWOptions& opt = {});

struct RecurrenceProfile {
    std::vector<double> per_ring_el;       // EL(V_{k-1}, closure(V_k^c))
    std::vector<double> cumulative;        // partial sums (lower bound for EL(V_0, V_n^c))
    double theoretical_ring_bound = 0;     // sin^2(eps) / (12 pi C^2)
};

// Per-ring extremal lengths for nested radius-defined rings V_k = {|pos| < r_k}.
RecurrenceProfile recurrence_profile(const Network& net,
                                     const std::vector<std::complex<double>>& pos,
                                     const std::vector<double>& radii, double eps,
                                     double C);

struct AreaSumBound {
    double lhs = 0;  // sum of l_e^2 over E0(V_{k-1}, closure(V_k^c))
    double rhs = 0;  // 12 pi C^2 / sin^2(eps) * r_{k-1}^2
    bool ok = false;
};

// The edge weights act as multiplicities (1 for a plain patch; orbit sizes for
// a folded lattice).
AreaSumBound area_sum_bound_check(const Network& net,
                                  const std::vector<std::complex<double>>& pos,
                                  const std::vector<double>& edge_length,
                                  const std::vector<double>& edge_weight,
                                  double r_prev, double r_k, double eps, double C);

}  // namespace dcl
