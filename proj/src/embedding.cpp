#include "dcl/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dcl {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment_distance(Complex p, Complex a, Complex b) {
    Complex d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0) return std::abs(p - a);
    double t = std::clamp(((p - a).real() * d.real() + (p - a).imag() * d.imag()) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double segment_segment_distance(Complex a, Complex b, Complex c, Complex d) {
    // Proper crossing means distance zero.
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return 0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

// Strict interior test by crossing number; points on the boundary count as
// outside (they belong to U^c by definition).
bool strictly_inside_polygon(Complex p, const std::vector<Complex>& poly) {
    constexpr double eps = 1e-13;
    int crossings = 0;
    int n = (int)poly.size();
    for (int k = 0; k < n; ++k) {
        Complex a = poly[k], b = poly[(k + 1) % n];
        if (point_segment_distance(p, a, b) < eps) return false;  // on boundary
        bool up = a.imag() <= p.imag() && b.imag() > p.imag();
        bool down = b.imag() <= p.imag() && a.imag() > p.imag();
        if (up || down) {
            double t = (p.imag() - a.imag()) / (b.imag() - a.imag());
            double x = a.real() + t * (b.real() - a.real());
            if (x > p.real()) ++crossings;
        }
    }
    return crossings % 2 == 1;
}

}  // namespace

Embedding::Embedding(const Triangulation& t, std::vector<Complex> pos)
    : tri(&t), position(std::move(pos)) {
    if ((int)position.size() != t.vertex_count())
        throw Error("embedding size mismatch");
}

double Embedding::signed_area(int face) const {
    const Face& f = tri->faces()[face];
    Complex a = position[f.v[0]], b = position[f.v[1]], c = position[f.v[2]];
    return 0.5 * cross(b - a, c - a);
}

void Embedding::validate() const {
    for (int fi = 0; fi < (int)tri->faces().size(); ++fi)
        if (signed_area(fi) <= 0)
            throw Error("degenerate or flipped face " + std::to_string(fi));
    PLMetric l = induced_metric(*this);
    for (int i = 0; i < tri->vertex_count(); ++i) {
        if (!tri->is_interior_vertex(i)) continue;
        double sum = 0;
        for (int fi : tri->vertex_faces(i)) sum += inner_angle(l, fi, i);
        if (std::abs(sum - 2 * kPi) > 1e-9)
            throw Error("folded 1-ring at vertex " + std::to_string(i));
    }
}

PLMetric::PLMetric(const Triangulation& t, std::vector<double> len)
    : tri(&t), length(std::move(len)) {
    if (length.size() != t.edges().size()) throw Error("metric size mismatch");
    for (double l : length)
        if (!(l > 0) || !std::isfinite(l)) throw Error("nonpositive edge length");
}

int PLMetric::first_nonmetric_face() const {
    for (int fi = 0; fi < (int)tri->faces().size(); ++fi) {
        const Face& f = tri->faces()[fi];
        double a = at(f.v[1], f.v[2]);
        double b = at(f.v[2], f.v[0]);
        double c = at(f.v[0], f.v[1]);
        if (a + b <= c || b + c <= a || c + a <= b) return fi;
    }
    return -1;
}

PLMetric induced_metric(const Embedding& emb) {
    for (int fi = 0; fi < (int)emb.tri->faces().size(); ++fi)
        if (emb.signed_area(fi) == 0)
            throw Error("degenerate face " + std::to_string(fi));
    std::vector<double> len(emb.tri->edges().size());
    for (int e = 0; e < (int)len.size(); ++e) {
        const EdgeKey& ek = emb.tri->edges()[e];
        len[e] = std::abs(emb.at(ek.a) - emb.at(ek.b));
    }
    return PLMetric(*emb.tri, std::move(len));
}

double triangle_angle(double opp, double adj1, double adj2) {
    if (adj1 + adj2 <= opp || adj2 + opp <= adj1 || opp + adj1 <= adj2)
        throw Error("triangle inequality violated");
    double c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2 * adj1 * adj2);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double inner_angle(const PLMetric& metric, int face, VertexId apex) {
    const Face& f = metric.tri->faces()[face];
    if (!f.contains(apex)) throw Error("apex not in face");
    VertexId j = -1, k = -1;
    for (int s = 0; s < 3; ++s)
        if (f.v[s] != apex) (j < 0 ? j : k) = f.v[s];
    return triangle_angle(metric.at(j, k), metric.at(apex, j), metric.at(apex, k));
}

ClassifyResult classify(const PLMetric& metric, double epsilon, double delaunay_tol) {
    if (epsilon < 0) throw Error("epsilon must be nonnegative");
    const Triangulation& tri = *metric.tri;
    ClassifyResult r;
    r.min_angle = kPi;
    r.max_angle = 0;
    for (int fi = 0; fi < (int)tri.faces().size(); ++fi) {
        for (int s = 0; s < 3; ++s) {
            double th = inner_angle(metric, fi, tri.faces()[fi].v[s]);
            if (th < r.min_angle) { r.min_angle = th; r.min_angle_face = fi; }
            if (th > r.max_angle) { r.max_angle = th; r.max_angle_face = fi; }
        }
    }
    r.uniformly_nondegenerate = r.min_angle >= epsilon;
    r.uniformly_acute = r.max_angle <= kPi / 2 - epsilon;
    r.delaunay = true;
    r.worst_delaunay_sum = 0;
    for (int e = 0; e < (int)tri.edges().size(); ++e) {
        if (tri.is_boundary_edge(e)) continue;
        auto [k, k2] = tri.opposite_vertices(e);
        const EdgeKey& ek = tri.edges()[e];
        double sum = triangle_angle(metric.at(e), metric.at(k, ek.a), metric.at(k, ek.b)) +
                     triangle_angle(metric.at(e), metric.at(k2, ek.a), metric.at(k2, ek.b));
        if (sum > r.worst_delaunay_sum) { r.worst_delaunay_sum = sum; r.worst_delaunay_edge = e; }
    }
    if (r.worst_delaunay_sum > kPi + delaunay_tol) r.delaunay = false;
    return r;
}

Circumdisk circumdisk(const Embedding& emb, int face) {
    const Face& f = emb.tri->faces()[face];
    Complex a = emb.at(f.v[0]), b = emb.at(f.v[1]), c = emb.at(f.v[2]);
    double d = 2 * cross(b - a, c - a);
    if (d == 0) throw Error("collinear face " + std::to_string(face));
    double na = std::norm(b - a), nc = std::norm(c - a);
    // Circumcenter relative to a.
    double ux = ((c - a).imag() * na - (b - a).imag() * nc) / d;
    double uy = ((b - a).real() * nc - (c - a).real() * na) / d;
    Circumdisk out;
    out.center = a + Complex(ux, uy);
    out.radius = std::abs(out.center - a);
    return out;
}

DelaunayWitness delaunay_circumdisk_form(const Embedding& emb, double tol) {
    const Triangulation& tri = *emb.tri;
    DelaunayWitness w;
    w.delaunay = true;
    w.worst_signed_distance = std::numeric_limits<double>::infinity();
    for (int e = 0; e < (int)tri.edges().size(); ++e) {
        if (tri.is_boundary_edge(e)) continue;
        for (int side = 0; side < 2; ++side) {
            int fi = tri.edge_faces(e)[side];
            int fo = tri.edge_faces(e)[1 - side];
            const Face& f = tri.faces()[fi];
            VertexId opp = -1;
            for (int s = 0; s < 3; ++s) {
                const Face& g = tri.faces()[fo];
                if (g.v[s] != tri.edges()[e].a && g.v[s] != tri.edges()[e].b) opp = g.v[s];
            }
            double sd = incircle_signed(emb.at(f.v[0]), emb.at(f.v[1]), emb.at(f.v[2]),
                                        emb.at(opp));
            if (sd < w.worst_signed_distance) {
                w.worst_signed_distance = sd;
                w.worst_edge = e;
            }
        }
    }
    if (w.worst_signed_distance < -tol) w.delaunay = false;
    return w;
}

double incircle_signed(Complex a, Complex b, Complex c, Complex d) {
    // Circumcenter in long double, then normalized distance of d to the circle.
    long double ax = a.real() - d.real(), ay = a.imag() - d.imag();
    long double bx = b.real() - d.real(), by = b.imag() - d.imag();
    long double cx = c.real() - d.real(), cy = c.imag() - d.imag();
    long double bax = bx - ax, bay = by - ay, cax = cx - ax, cay = cy - ay;
    long double det = 2 * (bax * cay - bay * cax);
    if (det == 0) throw Error("collinear circumcircle");
    long double nb = bax * bax + bay * bay, nc = cax * cax + cay * cay;
    long double ux = (cay * nb - bay * nc) / det;
    long double uy = (bax * nc - cax * nb) / det;
    long double ox = ax + ux, oy = ay + uy;  // center relative to d
    long double r = std::sqrt(ux * ux + uy * uy);
    long double dist = std::sqrt(ox * ox + oy * oy);
    return (double)((dist - r) / r);
}

CoveringConstants covering_constants(const Embedding& emb) {
    const Triangulation& tri = *emb.tri;
    CoveringConstants out;
    out.delta = std::numeric_limits<double>::infinity();

    // Ring polygons of interior vertices, as position cycles.
    std::vector<std::vector<Complex>> ring(tri.vertex_count());
    for (int i = 0; i < tri.vertex_count(); ++i) {
        if (!tri.is_interior_vertex(i)) continue;
        for (VertexId j : tri.one_ring_cycle(i)) ring[i].push_back(emb.at(j));
    }

    for (int fi = 0; fi < (int)tri.faces().size(); ++fi) {
        const Face& f = tri.faces()[fi];
        if (!tri.is_interior_vertex(f.v[0]) || !tri.is_interior_vertex(f.v[1]) ||
            !tri.is_interior_vertex(f.v[2]))
            continue;
        ++out.eligible_faces;

        Complex tA = emb.at(f.v[0]), tB = emb.at(f.v[1]), tC = emb.at(f.v[2]);
        double diam = std::max({std::abs(tA - tB), std::abs(tB - tC), std::abs(tC - tA)});

        double dist = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 3; ++s) {
            const std::vector<Complex>& poly = ring[f.v[s]];
            const std::vector<Complex>* others[2] = {&ring[f.v[(s + 1) % 3]],
                                                     &ring[f.v[(s + 2) % 3]]};
            int m = (int)poly.size();
            for (int k = 0; k < m; ++k) {
                Complex p = poly[k], q = poly[(k + 1) % m];
                // Clip away the open parts of segment pq lying strictly inside
                // the other two ring polygons; what remains is in U^c.
                std::vector<double> cuts{0.0, 1.0};
                for (const auto* other : others) {
                    int mo = (int)other->size();
                    for (int t = 0; t < mo; ++t) {
                        Complex r0 = (*other)[t], r1 = (*other)[(t + 1) % mo];
                        double den = cross(q - p, r1 - r0);
                        if (den == 0) continue;
                        double tt = cross(r0 - p, r1 - r0) / den;
                        double ss = cross(r0 - p, q - p) / den;
                        if (tt > 0 && tt < 1 && ss >= 0 && ss <= 1) cuts.push_back(tt);
                    }
                }
                std::sort(cuts.begin(), cuts.end());
                for (size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
                    double t0 = cuts[ci], t1 = cuts[ci + 1];
                    if (t1 - t0 < 1e-14) continue;
                    Complex mid = p + 0.5 * (t0 + t1) * (q - p);
                    bool inside = false;
                    for (const auto* other : others)
                        if (strictly_inside_polygon(mid, *other)) { inside = true; break; }
                    if (inside) continue;
                    Complex s0 = p + t0 * (q - p), s1 = p + t1 * (q - p);
                    dist = std::min({dist, segment_segment_distance(s0, s1, tA, tB),
                                     segment_segment_distance(s0, s1, tB, tC),
                                     segment_segment_distance(s0, s1, tC, tA)});
                }
            }
        }
        double val = dist / diam;
        if (val < out.delta) { out.delta = val; out.worst_face = fi; }
    }
    if (out.eligible_faces == 0) throw Error("patch too small");
    out.C = 1 + 2 / out.delta;
    return out;
}

}  // namespace dcl
