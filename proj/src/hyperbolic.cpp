#include "dcl/hyperbolic.hpp"

#include <cmath>
#include <numbers>

namespace dcl {

namespace {
constexpr double kPi = std::numbers::pi;
}

void require_in_disk(Complex z) {
    if (std::abs(z) >= 1 - 1e-12) throw Error("point not strictly inside the unit disk");
}

Complex mobius(Complex a, Complex z) {
    return (z - a) / (1.0 - std::conj(a) * z);
}

double hyp_distance(Complex z1, Complex z2) {
    require_in_disk(z1);
    require_in_disk(z2);
    // Normalize z1 to the origin; distance to r in [0,1) is log((1+r)/(1-r)).
    double r = std::abs(mobius(z1, z2));
    return std::log1p(r) - std::log1p(-r);
}

SinhHalfIdentity sinh_half_identity(Complex z1, Complex z2) {
    require_in_disk(z1);
    require_in_disk(z2);
    SinhHalfIdentity out;
    out.lhs = std::sinh(0.5 * hyp_distance(z1, z2));
    out.rhs = std::abs(z1 - z2) /
              std::sqrt((1 - std::norm(z1)) * (1 - std::norm(z2)));
    return out;
}

HyperbolicFactorResult to_hyperbolic_factor(const ConformalFactor& u,
                                            const Embedding& emb_src,
                                            const Embedding& emb_dst,
                                            double consistency_tol) {
    const Triangulation& tri = *emb_src.tri;
    if (emb_dst.tri != &tri) throw Error("embeddings over different triangulations");
    for (int i = 0; i < tri.vertex_count(); ++i) {
        require_in_disk(emb_src.at(i));
        require_in_disk(emb_dst.at(i));
    }
    for (const EdgeKey& ek : tri.edges()) {
        double l = std::abs(emb_src.at(ek.a) - emb_src.at(ek.b));
        double lp = std::abs(emb_dst.at(ek.a) - emb_dst.at(ek.b));
        double expect = std::exp(0.5 * (u[ek.a] + u[ek.b])) * l;
        if (std::abs(lp - expect) > consistency_tol * std::max(1.0, expect))
            throw Error("embeddings are not conformally related on edge (" +
                        std::to_string(ek.a) + "," + std::to_string(ek.b) + ")");
    }

    HyperbolicFactorResult out;
    out.uh.resize(tri.vertex_count());
    for (int i = 0; i < tri.vertex_count(); ++i)
        out.uh[i] = u[i] + std::log((1 - std::norm(emb_src.at(i))) /
                                    (1 - std::norm(emb_dst.at(i))));

    for (const EdgeKey& ek : tri.edges()) {
        double sh = sinh_half_identity(emb_src.at(ek.a), emb_src.at(ek.b)).lhs;
        double shp = sinh_half_identity(emb_dst.at(ek.a), emb_dst.at(ek.b)).lhs;
        double expect = std::exp(0.5 * (out.uh[ek.a] + out.uh[ek.b])) * sh;
        double gap = std::abs(shp - expect) / std::max(1e-300, std::abs(expect));
        out.max_edge_relation_gap = std::max(out.max_edge_relation_gap, gap);
    }
    return out;
}

HypMaxPrincipleReport check_hyperbolic_max_principle(const Triangulation& tri,
                                                     const VertexSet& region,
                                                     const HyperbolicFactor& uh,
                                                     double slack) {
    HypMaxPrincipleReport rep;
    VertexSet bdry = region.boundary();
    VertexSet inter = region.interior();
    rep.min_boundary = std::numeric_limits<double>::infinity();
    rep.min_interior = std::numeric_limits<double>::infinity();
    for (VertexId i : bdry.vertices()) rep.min_boundary = std::min(rep.min_boundary, uh[i]);
    for (VertexId i : inter.vertices()) rep.min_interior = std::min(rep.min_interior, uh[i]);
    rep.ok = !(rep.min_boundary >= 0) || rep.min_interior >= -slack;
    for (VertexId i : inter.vertices()) {
        if (uh[i] >= 0) continue;
        bool has_smaller = false;
        for (VertexId j : tri.neighbors(i))
            if (region.contains(j) && uh[j] < uh[i]) { has_smaller = true; break; }
        if (!has_smaller) rep.descent_witness_ok = false;
    }
    return rep;
}

Complex hyperbolic_log_map(Complex z0, Complex z) {
    require_in_disk(z0);
    require_in_disk(z);
    Complex w = mobius(z0, z);
    double aw = std::abs(w);
    if (aw == 0) return 0;
    // The derivative of the centering map at z0 is the positive real
    // 1/(1-|z0|^2), so the initial geodesic direction is w/|w| itself.
    return (w / aw) * hyp_distance(z0, z);
}

RingEmbedResult one_ring_hyperbolic_embed(Complex center,
                                          const std::vector<Complex>& cycle,
                                          double tol) {
    RingEmbedResult out;
    int m = (int)cycle.size();
    if (m < 3) return out;
    require_in_disk(center);
    for (Complex z : cycle) require_in_disk(z);

    // Acuteness gate: every ring face must have all Euclidean angles < pi/2.
    for (int k = 0; k < m; ++k) {
        Complex a = center, b = cycle[k], c = cycle[(k + 1) % m];
        double la = std::abs(b - c), lb = std::abs(a - c), lc = std::abs(a - b);
        try {
            if (triangle_angle(la, lb, lc) >= kPi / 2 ||
                triangle_angle(lb, la, lc) >= kPi / 2 ||
                triangle_angle(lc, la, lb) >= kPi / 2)
                return out;  // inconclusive
        } catch (const Error&) {
            return out;
        }
    }
    out.status = RingEmbedStatus::ok;

    std::vector<Complex> v(m);
    for (int k = 0; k < m; ++k) v[k] = hyperbolic_log_map(center, cycle[k]);

    out.embeds = true;
    out.wrap_sum = 0;
    for (int k = 0; k < m; ++k) {
        double a = std::arg(v[(k + 1) % m] / v[k]);
        out.wrap_angles.push_back(a);
        out.wrap_sum += a;
        if (!(a > 0 && a < kPi)) out.embeds = false;
    }
    if (std::abs(out.wrap_sum - 2 * kPi) > tol) out.embeds = false;

    // Hyperbolic and Euclidean circumdisks coincide: the in-circle predicate
    // must be invariant under a disk automorphism.
    Complex probe = std::sqrt(Complex(0.37, 0.11));  // fixed non-special anchor
    probe *= 0.4;
    for (int k = 0; k < m; ++k) {
        Complex a = center, b = cycle[k], c = cycle[(k + 1) % m];
        Complex d = cycle[(k + 2) % m];
        double s_eu = incircle_signed(a, b, c, d);
        double s_hy = incircle_signed(mobius(probe, a), mobius(probe, b),
                                      mobius(probe, c), mobius(probe, d));
        if (std::abs(s_eu) > tol && std::abs(s_hy) > tol &&
            std::signbit(s_eu) != std::signbit(s_hy))
            out.delaunay_match = false;
    }
    return out;
}

}  // namespace dcl
