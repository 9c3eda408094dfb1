#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dcl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using VertexId = int;

// Undirected edge, canonicalized as (min, max).
struct EdgeKey {
    VertexId a, b;
    EdgeKey(VertexId i, VertexId j) : a(i < j ? i : j), b(i < j ? j : i) {}
    bool operator==(const EdgeKey&) const = default;
    auto operator<=>(const EdgeKey&) const = default;
};

struct Face {
    VertexId v[3];  // oriented (counterclockwise in any embedding)
    bool contains(VertexId i) const { return v[0] == i || v[1] == i || v[2] == i; }
};

// Immutable combinatorial simplicial triangulation of a planar patch.
// Vertices are dense indices 0..n-1. Construction validates the simplicial
// conditions and global orientation consistency; invalid input throws.
class Triangulation {
public:
    Triangulation() = default;  // empty complex

    Triangulation(int vertex_count, std::vector<Face> faces);

    // Edge-only complexes (no faces) are allowed; used for generated subcomplexes.
    Triangulation(int vertex_count, std::vector<EdgeKey> edges, std::vector<Face> faces);

    int vertex_count() const { return n_; }
    const std::vector<EdgeKey>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }

    int edge_index(VertexId i, VertexId j) const;
    std::optional<int> find_edge(VertexId i, VertexId j) const;
    bool has_edge(VertexId i, VertexId j) const { return find_edge(i, j).has_value(); }

    const std::vector<int>& vertex_edges(VertexId i) const { return vertex_edges_[i]; }
    const std::vector<int>& vertex_faces(VertexId i) const { return vertex_faces_[i]; }
    // 1 or 2 entries; boundary edges have exactly 1.
    const std::vector<int>& edge_faces(int e) const { return edge_faces_[e]; }

    bool is_boundary_edge(int e) const { return edge_faces_[e].size() == 1; }
    // A vertex is interior when its incident faces form a single closed cycle.
    bool is_interior_vertex(VertexId i) const;

    std::vector<VertexId> neighbors(VertexId i) const;

    // Neighbors of an interior vertex i listed counterclockwise following the
    // face orientations. Throws "open link" for boundary vertices.
    std::vector<VertexId> one_ring_cycle(VertexId i) const;

    // For an interior edge ij, the two vertices opposite it (one per face).
    std::pair<VertexId, VertexId> opposite_vertices(int e) const;
    // For a boundary edge, the single opposite vertex.
    VertexId opposite_vertex_single(int e) const;

private:
    void build();

    int n_ = 0;
    std::vector<EdgeKey> edges_;
    std::vector<Face> faces_;
    std::map<EdgeKey, int> edge_index_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::vector<int>> edge_faces_;
};

// Subset of a triangulation's vertices with the combinatorial set calculus:
//   boundary(S)  = {i in S : some neighbor of i is outside S}
//   interior(S)  = S \ boundary(S)
//   closure(S)   = complement(interior(complement(S)))
//   E(S)         = {ij in E : i in interior(S) or j in interior(S)}
class VertexSet {
public:
    VertexSet(const Triangulation& tri, std::vector<bool> member);
    static VertexSet full(const Triangulation& tri);
    static VertexSet empty(const Triangulation& tri);
    static VertexSet of(const Triangulation& tri, const std::vector<VertexId>& ids);

    const Triangulation& triangulation() const { return *tri_; }
    bool contains(VertexId i) const { return member_[i]; }
    int size() const;
    std::vector<VertexId> vertices() const;

    VertexSet complement() const;
    VertexSet boundary() const;
    VertexSet interior() const;
    VertexSet closure() const;

    std::vector<int> edge_set_E() const;

    bool operator==(const VertexSet& o) const { return member_ == o.member_; }
    bool is_subset_of(const VertexSet& o) const;

private:
    const Triangulation* tri_;
    std::vector<bool> member_;
};

struct OneRing {
    Triangulation complex;                 // subcomplex generated by {i} + neighbors
    std::vector<VertexId> cycle;           // neighbors of i, counterclockwise, in parent ids
    std::vector<VertexId> complex_to_parent;
};

OneRing one_ring(const Triangulation& tri, VertexId i);

struct Subcomplex {
    Triangulation complex;
    std::vector<VertexId> to_parent;          // complex vertex -> parent vertex
    std::unordered_map<VertexId, VertexId> from_parent;
};

// T(S): faces with all three vertices in S plus edges with both endpoints in S.
Subcomplex generated_subcomplex(const VertexSet& set);

}  // namespace dcl
