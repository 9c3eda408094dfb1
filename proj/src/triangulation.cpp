#include "dcl/triangulation.hpp"

#include <algorithm>
#include <set>

namespace dcl {

Triangulation::Triangulation(int vertex_count, std::vector<Face> faces)
    : n_(vertex_count), faces_(std::move(faces)) {
    std::set<EdgeKey> eset;
    for (const Face& f : faces_) {
        eset.insert(EdgeKey(f.v[0], f.v[1]));
        eset.insert(EdgeKey(f.v[1], f.v[2]));
        eset.insert(EdgeKey(f.v[2], f.v[0]));
    }
    edges_.assign(eset.begin(), eset.end());
    build();
}

Triangulation::Triangulation(int vertex_count, std::vector<EdgeKey> edges,
                             std::vector<Face> faces)
    : n_(vertex_count), edges_(std::move(edges)), faces_(std::move(faces)) {
    for (const Face& f : faces_) {
        EdgeKey ab(f.v[0], f.v[1]), bc(f.v[1], f.v[2]), ca(f.v[2], f.v[0]);
        for (const EdgeKey& e : {ab, bc, ca})
            if (std::find(edges_.begin(), edges_.end(), e) == edges_.end())
                edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    build();
}

void Triangulation::build() {
    if (n_ < 0) throw Error("negative vertex count");
    for (const EdgeKey& e : edges_) {
        if (e.a < 0 || e.b >= n_) throw Error("edge vertex out of range");
        if (e.a == e.b) throw Error("degenerate edge (repeated vertex)");
    }
    for (int e = 0; e < (int)edges_.size(); ++e) edge_index_[edges_[e]] = e;
    if ((int)edge_index_.size() != (int)edges_.size())
        throw Error("duplicate edge");

    std::set<std::array<VertexId, 3>> face_keys;
    for (const Face& f : faces_) {
        for (int k = 0; k < 3; ++k)
            if (f.v[k] < 0 || f.v[k] >= n_) throw Error("face vertex out of range");
        if (f.v[0] == f.v[1] || f.v[1] == f.v[2] || f.v[2] == f.v[0])
            throw Error("degenerate face (repeated vertex)");
        std::array<VertexId, 3> key{f.v[0], f.v[1], f.v[2]};
        std::sort(key.begin(), key.end());
        if (!face_keys.insert(key).second) throw Error("duplicate face");
    }

    vertex_edges_.assign(n_, {});
    vertex_faces_.assign(n_, {});
    edge_faces_.assign(edges_.size(), {});
    for (int e = 0; e < (int)edges_.size(); ++e) {
        vertex_edges_[edges_[e].a].push_back(e);
        vertex_edges_[edges_[e].b].push_back(e);
    }
    for (int fi = 0; fi < (int)faces_.size(); ++fi) {
        const Face& f = faces_[fi];
        for (int k = 0; k < 3; ++k) {
            vertex_faces_[f.v[k]].push_back(fi);
            int e = edge_index(f.v[k], f.v[(k + 1) % 3]);
            edge_faces_[e].push_back(fi);
        }
    }
    for (int e = 0; e < (int)edges_.size(); ++e)
        if (edge_faces_[e].size() > 2) throw Error("edge in more than two faces");

    // Orientation consistency: a shared edge must be traversed in opposite
    // directions by its two faces.
    for (int e = 0; e < (int)edges_.size(); ++e) {
        if (edge_faces_[e].size() != 2) continue;
        int dir[2];
        for (int s = 0; s < 2; ++s) {
            const Face& f = faces_[edge_faces_[e][s]];
            dir[s] = 0;
            for (int k = 0; k < 3; ++k)
                if (f.v[k] == edges_[e].a && f.v[(k + 1) % 3] == edges_[e].b) dir[s] = 1;
        }
        if (dir[0] == dir[1]) throw Error("inconsistent face orientations");
    }
}

int Triangulation::edge_index(VertexId i, VertexId j) const {
    auto it = edge_index_.find(EdgeKey(i, j));
    if (it == edge_index_.end()) throw Error("no such edge");
    return it->second;
}

std::optional<int> Triangulation::find_edge(VertexId i, VertexId j) const {
    auto it = edge_index_.find(EdgeKey(i, j));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

bool Triangulation::is_interior_vertex(VertexId i) const {
    if (vertex_faces_[i].empty()) return false;
    for (int e : vertex_edges_[i])
        if (edge_faces_[e].size() != 2) return false;
    // All incident edges interior and face count matches edge count: closed fan.
    return vertex_faces_[i].size() == vertex_edges_[i].size();
}

std::vector<VertexId> Triangulation::neighbors(VertexId i) const {
    std::vector<VertexId> out;
    out.reserve(vertex_edges_[i].size());
    for (int e : vertex_edges_[i])
        out.push_back(edges_[e].a == i ? edges_[e].b : edges_[e].a);
    return out;
}

std::vector<VertexId> Triangulation::one_ring_cycle(VertexId i) const {
    if (!is_interior_vertex(i)) throw Error("open link: vertex " + std::to_string(i));
    // In face (i, j, k) the link edge is j -> k; chaining these gives the
    // counterclockwise neighbor cycle.
    std::unordered_map<VertexId, VertexId> next;
    for (int fi : vertex_faces_[i]) {
        const Face& f = faces_[fi];
        for (int k = 0; k < 3; ++k)
            if (f.v[k] == i) next[f.v[(k + 1) % 3]] = f.v[(k + 2) % 3];
    }
    std::vector<VertexId> cycle;
    VertexId start = next.begin()->first;
    VertexId cur = start;
    do {
        cycle.push_back(cur);
        auto it = next.find(cur);
        if (it == next.end()) throw Error("open link: vertex " + std::to_string(i));
        cur = it->second;
    } while (cur != start && cycle.size() <= next.size());
    if (cur != start || cycle.size() != next.size())
        throw Error("link is not a single cycle at vertex " + std::to_string(i));
    return cycle;
}

std::pair<VertexId, VertexId> Triangulation::opposite_vertices(int e) const {
    if (edge_faces_[e].size() != 2) throw Error("not an interior edge");
    VertexId out[2];
    for (int s = 0; s < 2; ++s) {
        const Face& f = faces_[edge_faces_[e][s]];
        for (int k = 0; k < 3; ++k)
            if (f.v[k] != edges_[e].a && f.v[k] != edges_[e].b) out[s] = f.v[k];
    }
    return {out[0], out[1]};
}

VertexId Triangulation::opposite_vertex_single(int e) const {
    if (edge_faces_[e].size() != 1) throw Error("not a boundary edge");
    const Face& f = faces_[edge_faces_[e][0]];
    for (int k = 0; k < 3; ++k)
        if (f.v[k] != edges_[e].a && f.v[k] != edges_[e].b) return f.v[k];
    throw Error("corrupt face");
}

VertexSet::VertexSet(const Triangulation& tri, std::vector<bool> member)
    : tri_(&tri), member_(std::move(member)) {
    if ((int)member_.size() != tri.vertex_count())
        throw Error("membership vector size mismatch");
}

VertexSet VertexSet::full(const Triangulation& tri) {
    return VertexSet(tri, std::vector<bool>(tri.vertex_count(), true));
}

VertexSet VertexSet::empty(const Triangulation& tri) {
    return VertexSet(tri, std::vector<bool>(tri.vertex_count(), false));
}

VertexSet VertexSet::of(const Triangulation& tri, const std::vector<VertexId>& ids) {
    std::vector<bool> m(tri.vertex_count(), false);
    for (VertexId i : ids) {
        if (i < 0 || i >= tri.vertex_count()) throw Error("vertex id out of range");
        m[i] = true;
    }
    return VertexSet(tri, std::move(m));
}

int VertexSet::size() const {
    return (int)std::count(member_.begin(), member_.end(), true);
}

std::vector<VertexId> VertexSet::vertices() const {
    std::vector<VertexId> out;
    for (int i = 0; i < (int)member_.size(); ++i)
        if (member_[i]) out.push_back(i);
    return out;
}

VertexSet VertexSet::complement() const {
    std::vector<bool> m(member_.size());
    for (size_t i = 0; i < member_.size(); ++i) m[i] = !member_[i];
    return VertexSet(*tri_, std::move(m));
}

VertexSet VertexSet::boundary() const {
    // Patches are finite truncations of an infinite complex: mesh-rim
    // vertices (open links) carry virtual outside neighbors, so they are
    // boundary of any set containing them.
    std::vector<bool> m(member_.size(), false);
    for (int i = 0; i < tri_->vertex_count(); ++i) {
        if (!member_[i]) continue;
        if (!tri_->is_interior_vertex(i)) { m[i] = true; continue; }
        for (VertexId j : tri_->neighbors(i))
            if (!member_[j]) { m[i] = true; break; }
    }
    return VertexSet(*tri_, std::move(m));
}

VertexSet VertexSet::interior() const {
    VertexSet b = boundary();
    std::vector<bool> m(member_.size());
    for (size_t i = 0; i < member_.size(); ++i) m[i] = member_[i] && !b.member_[i];
    return VertexSet(*tri_, std::move(m));
}

VertexSet VertexSet::closure() const {
    return complement().interior().complement();
}

std::vector<int> VertexSet::edge_set_E() const {
    VertexSet inter = interior();
    std::vector<int> out;
    for (int e = 0; e < (int)tri_->edges().size(); ++e) {
        const EdgeKey& ek = tri_->edges()[e];
        if (inter.contains(ek.a) || inter.contains(ek.b)) out.push_back(e);
    }
    return out;
}

bool VertexSet::is_subset_of(const VertexSet& o) const {
    for (size_t i = 0; i < member_.size(); ++i)
        if (member_[i] && !o.member_[i]) return false;
    return true;
}

OneRing one_ring(const Triangulation& tri, VertexId i) {
    std::vector<VertexId> cycle = tri.one_ring_cycle(i);
    std::vector<VertexId> verts{i};
    verts.insert(verts.end(), cycle.begin(), cycle.end());
    Subcomplex sub = generated_subcomplex(VertexSet::of(tri, verts));
    return OneRing{std::move(sub.complex), std::move(cycle), std::move(sub.to_parent)};
}

Subcomplex generated_subcomplex(const VertexSet& set) {
    const Triangulation& tri = set.triangulation();
    Subcomplex out;
    out.to_parent = set.vertices();
    for (int k = 0; k < (int)out.to_parent.size(); ++k)
        out.from_parent[out.to_parent[k]] = k;
    std::vector<EdgeKey> edges;
    for (const EdgeKey& e : tri.edges())
        if (set.contains(e.a) && set.contains(e.b))
            edges.emplace_back(out.from_parent[e.a], out.from_parent[e.b]);
    std::vector<Face> faces;
    for (const Face& f : tri.faces())
        if (set.contains(f.v[0]) && set.contains(f.v[1]) && set.contains(f.v[2]))
            faces.push_back(Face{{out.from_parent[f.v[0]], out.from_parent[f.v[1]],
                                  out.from_parent[f.v[2]]}});
    out.complex = Triangulation((int)out.to_parent.size(), std::move(edges), std::move(faces));
    return out;
}

}  // namespace dcl
