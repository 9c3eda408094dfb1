#include "dcl/modulus.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numbers>

#include "dcl/conformal.hpp"

namespace dcl {

namespace {
constexpr double kPi = std::numbers::pi;
}

double modulus_round(const RoundAnnulus& a) {
    if (!(a.r > 0 && a.r_outer > a.r)) throw Error("degenerate round annulus");
    return std::log(a.r_outer / a.r) / (2 * kPi);
}

DilatationResult dilatation(const PLMap& map) {
    const Triangulation& tri = *map.tri;
    DilatationResult out;
    for (int f = 0; f < (int)tri.faces().size(); ++f) {
        const Face& fc = tri.faces()[f];
        Complex a = map.src->at(fc.v[0]), b = map.src->at(fc.v[1]), c = map.src->at(fc.v[2]);
        Complex A = map.dst->at(fc.v[0]), B = map.dst->at(fc.v[1]), C = map.dst->at(fc.v[2]);
        Eigen::Matrix2d S, T;
        S << (b - a).real(), (c - a).real(), (b - a).imag(), (c - a).imag();
        T << (B - A).real(), (C - A).real(), (B - A).imag(), (C - A).imag();
        if (std::abs(S.determinant()) < 1e-300) throw Error("degenerate source face");
        Eigen::Matrix2d D = T * S.inverse();
        if (D.determinant() <= 0) throw Error("face " + std::to_string(f) + " flips orientation");
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(D);
        double k = svd.singularValues()(0) / svd.singularValues()(1);
        if (k > out.max_dilatation) {
            out.max_dilatation = k;
            out.worst_face = f;
        }
    }
    return out;
}

std::optional<RoundAnnulus> contains_round_annulus(Complex center,
                                                   const std::vector<Complex>& inner,
                                                   const std::vector<Complex>& outer) {
    if (inner.empty() || outer.empty()) return std::nullopt;
    double r = 0, R = std::numeric_limits<double>::infinity();
    for (Complex z : inner) r = std::max(r, std::abs(z - center));
    for (Complex z : outer) R = std::min(R, std::abs(z - center));
    if (!(R > r) || r == 0) return std::nullopt;
    return RoundAnnulus{center, r, R};
}

double oscillation_bound(const OscillationBoundInputs& in) {
    if (!(in.eps > 0 && in.eps < kPi / 2)) throw Error("acuteness margin out of range");
    double m = 2 * std::log(1 / std::sin(in.eps)) + 3;
    double log_cprime = 200 * kPi * in.curvature_sup;
    return 2 * m + 2 * std::log(in.covering_c) + log_cprime - std::log(2.0);
}

AnnulusMesh make_annulus(double r, double r_outer, int n_theta, int n_layers) {
    if (!(r > 0 && r_outer > r)) throw Error("degenerate round annulus");
    if (n_theta < 3 || n_layers < 1) throw Error("annulus mesh too coarse");
    AnnulusMesh m;
    // Layers at geometric radii; consecutive layers offset by half an angular
    // step so every face is an isoceles triangle straddling two circles.
    double q = std::pow(r_outer / r, 1.0 / n_layers);
    auto vid = [&](int layer, int k) { return layer * n_theta + ((k % n_theta + n_theta) % n_theta); };
    for (int layer = 0; layer <= n_layers; ++layer) {
        double rad = r * std::pow(q, layer);
        double off = (layer % 2) ? kPi / n_theta : 0.0;
        for (int k = 0; k < n_theta; ++k) {
            double th = 2 * kPi * k / n_theta + off;
            m.pos.push_back(std::polar(rad, th));
        }
    }
    for (int layer = 0; layer < n_layers; ++layer) {
        for (int k = 0; k < n_theta; ++k) {
            if (layer % 2 == 0) {
                m.faces.push_back({vid(layer, k), vid(layer + 1, k), vid(layer, k + 1)});
                m.faces.push_back({vid(layer, k + 1), vid(layer + 1, k), vid(layer + 1, k + 1)});
            } else {
                m.faces.push_back({vid(layer, k), vid(layer + 1, k), vid(layer + 1, k + 1)});
                m.faces.push_back({vid(layer, k), vid(layer + 1, k + 1), vid(layer, k + 1)});
            }
        }
    }
    for (int k = 0; k < n_theta; ++k) {
        m.inner_loop.push_back(vid(0, k));
        m.outer_loop.push_back(vid(n_layers, k));
    }
    return m;
}

AnnulusMesh subdivide_midpoint(const AnnulusMesh& m) {
    AnnulusMesh out;
    out.pos = m.pos;
    std::map<std::pair<VertexId, VertexId>, VertexId> mid;
    auto midpoint = [&](VertexId a, VertexId b) {
        auto key = std::minmax(a, b);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        VertexId id = (VertexId)out.pos.size();
        out.pos.push_back(0.5 * (m.pos[a] + m.pos[b]));
        mid.emplace(key, id);
        return id;
    };
    for (const Face& f : m.faces) {
        VertexId a = f.v[0], b = f.v[1], c = f.v[2];
        VertexId ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
        out.faces.push_back({a, ab, ca});
        out.faces.push_back({ab, b, bc});
        out.faces.push_back({ca, bc, c});
        out.faces.push_back({ab, bc, ca});
    }
    auto refine_loop = [&](const std::vector<VertexId>& loop) {
        std::vector<VertexId> r;
        int n = (int)loop.size();
        for (int k = 0; k < n; ++k) {
            r.push_back(loop[k]);
            r.push_back(midpoint(loop[k], loop[(k + 1) % n]));
        }
        return r;
    };
    out.inner_loop = refine_loop(m.inner_loop);
    out.outer_loop = refine_loop(m.outer_loop);
    return out;
}

ModulusEstimate modulus_estimate(double r, double r_outer, int levels) {
    AnnulusMesh mesh = make_annulus(r, r_outer, 16, 2);
    for (int i = 0; i < levels; ++i) mesh = subdivide_midpoint(mesh);

    Triangulation tri((int)mesh.pos.size(), mesh.faces);
    Embedding emb(tri, mesh.pos);
    PLMetric metric = induced_metric(emb);
    CotanWeights w = cotan_weights(metric, ConformalFactor(tri.vertex_count(), 0.0));
    std::vector<NetEdge> edges;
    for (int e = 0; e < (int)tri.edges().size(); ++e) {
        if (!(w.eta[e] > 0)) throw Error("annulus mesh not weighted Delaunay");
        edges.push_back({tri.edges()[e].a, tri.edges()[e].b, w.eta[e]});
    }
    Network net(tri.vertex_count(), edges);
    ELProblem prob;
    prob.net = &net;
    prob.v1.assign(tri.vertex_count(), false);
    prob.v2.assign(tri.vertex_count(), false);
    for (VertexId i : mesh.inner_loop) prob.v1[i] = true;
    for (VertexId i : mesh.outer_loop) prob.v2[i] = true;
    ELResult el = extremal_length(prob);

    ModulusEstimate out;
    out.value = el.value;
    out.exact = modulus_round({0.0, r, r_outer});
    out.vertex_count = tri.vertex_count();
    return out;
}

}  // namespace dcl
