#include "dcl/generate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

namespace dcl {

namespace {

Complex lattice_pos(long long m, long long n) {
    return Complex((double)m + 0.5 * (double)n,
                   (double)n * (std::numbers::sqrt3 / 2));
}

int hex_dist(int m, int n) {
    return (std::abs(m) + std::abs(n) + std::abs(m + n)) / 2;
}

}  // namespace

PatchData hex_patch(int rings) {
    if (rings < 1) throw Error("hex patch needs at least one ring");
    PatchData out;
    std::unordered_map<long long, VertexId> index;
    auto key = [](int m, int n) {
        return ((long long)(m + (1 << 20)) << 24) | (long long)(n + (1 << 20));
    };
    for (int m = -rings; m <= rings; ++m)
        for (int n = -rings; n <= rings; ++n)
            if (hex_dist(m, n) <= rings) {
                index[key(m, n)] = (VertexId)out.pos.size();
                out.pos.push_back(lattice_pos(m, n));
            }
    auto at = [&](int m, int n) -> VertexId {
        auto it = index.find(key(m, n));
        return it == index.end() ? -1 : it->second;
    };
    for (int m = -rings; m <= rings; ++m)
        for (int n = -rings; n <= rings; ++n) {
            VertexId a = at(m, n), b = at(m + 1, n), c = at(m, n + 1), d = at(m + 1, n + 1);
            if (a >= 0 && b >= 0 && c >= 0) out.faces.push_back({a, b, c});
            if (b >= 0 && d >= 0 && c >= 0) out.faces.push_back({b, d, c});
        }
    return out;
}

PatchData generate_perturbed_acute(int rings, double jitter, double eps,
                                   std::uint64_t seed, int budget) {
    PatchData base = hex_patch(rings);
    if (jitter == 0) return base;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < budget; ++attempt) {
        PatchData trial = base;
        for (Complex& z : trial.pos) {
            double x, y;
            do {
                x = unit(rng);
                y = unit(rng);
            } while (x * x + y * y > 1);
            z += jitter * Complex(x, y);
        }
        try {
            Triangulation tri((int)trial.pos.size(), trial.faces);
            Embedding emb(tri, trial.pos);
            emb.validate();
            if (classify(induced_metric(emb), eps).uniformly_acute) return trial;
        } catch (const Error&) {
            // degenerate sample; keep trying
        }
    }
    throw Error("perturbed-patch rejection budget exceeded");
}

namespace {

struct LatticePoint {
    long long m, n;
};

// Symmetries of the triangular lattice fixing the origin: rotation by 60
// degrees and the mirror across the first lattice axis, in (m,n) coordinates.
LatticePoint rot60(LatticePoint p) { return {-p.n, p.m + p.n}; }
LatticePoint mirror(LatticePoint p) { return {p.m + p.n, -p.n}; }

LatticePoint canonical(LatticePoint p) {
    LatticePoint best = p;
    LatticePoint q = p;
    for (int half = 0; half < 2; ++half) {
        for (int k = 0; k < 6; ++k) {
            if (q.m < best.m || (q.m == best.m && q.n < best.n)) best = q;
            q = rot60(q);
        }
        q = mirror(p);
    }
    return best;
}

long long pack(LatticePoint p) {
    return ((p.m + (1LL << 24)) << 26) | (p.n + (1LL << 24));
}

}  // namespace

QuotientLattice hex_lattice_quotient(double radius, double eta_unit) {
    if (!(radius >= 1) || !(eta_unit > 0)) throw Error("bad quotient lattice parameters");
    double r2 = radius * radius;
    auto inside = [&](long long m, long long n) {
        return (double)(m * m + m * n + n * n) <= r2;
    };
    auto orbit_count = [](LatticePoint p) {
        LatticePoint img[12];
        int cnt = 0;
        LatticePoint q = p;
        for (int half = 0; half < 2; ++half) {
            for (int k = 0; k < 6; ++k) {
                bool seen = false;
                for (int i = 0; i < cnt; ++i)
                    seen = seen || (img[i].m == q.m && img[i].n == q.n);
                if (!seen) img[cnt++] = q;
                q = rot60(q);
            }
            q = mirror(p);
        }
        return cnt;
    };

    QuotientLattice out;
    std::unordered_map<long long, int> index;
    std::unordered_map<long long, double> edge_mult;
    auto canon_index = [&](LatticePoint p) {
        LatticePoint c = canonical(p);
        auto [it, fresh] = index.emplace(pack(c), (int)out.pos.size());
        if (fresh) {
            out.pos.push_back(lattice_pos(c.m, c.n));
            out.orbit_size.push_back((double)orbit_count(c));
            out.self_edge_mult.push_back(0.0);
        }
        return it->second;
    };

    // Sweep the full disk but touch the hash maps only from canonical
    // representatives; each contributes its orbit's share of every incident
    // full edge (half per directed endpoint).
    long long span = (long long)(radius * 2 / std::numbers::sqrt3) + 2;
    const long long dirs[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    for (long long m = -span; m <= span; ++m) {
        // n range from m^2 + mn + n^2 <= r^2.
        double disc = 4 * r2 - 3.0 * (double)(m * m);
        if (disc < 0) continue;
        long long lo = (long long)std::ceil((-(double)m - std::sqrt(disc)) / 2 - 1e-9);
        long long hi = (long long)std::floor((-(double)m + std::sqrt(disc)) / 2 + 1e-9);
        for (long long n = lo; n <= hi; ++n) {
            if (!inside(m, n)) continue;
            ++out.full_vertex_count;
            LatticePoint p{m, n};
            LatticePoint c = canonical(p);
            if (c.m != m || c.n != n) continue;
            int a = canon_index(p);
            double half_share = out.orbit_size[a] / 2;
            for (auto& d : dirs) {
                long long m2 = m + d[0], n2 = n + d[1];
                if (!inside(m2, n2)) continue;
                int b = canon_index({m2, n2});
                if (a == b) {
                    out.self_edge_mult[a] += half_share;  // intra-orbit full edges
                    continue;
                }
                long long ekey = a < b ? ((long long)a << 26 | b) : ((long long)b << 26 | a);
                edge_mult[ekey] += half_share;
            }
        }
    }

    std::vector<NetEdge> edges;
    edges.reserve(edge_mult.size());
    out.edge_multiplicity.reserve(edge_mult.size());
    for (auto& [ekey, mult] : edge_mult) {
        int a = (int)(ekey >> 26), b = (int)(ekey & ((1 << 26) - 1));
        edges.push_back({a, b, mult * eta_unit});
        out.edge_multiplicity.push_back(mult);
    }
    out.edge_length.assign(edges.size(), 1.0);
    out.net = Network((int)out.pos.size(), edges);
    return out;
}

}  // namespace dcl
