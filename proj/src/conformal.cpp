#include "dcl/conformal.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>

namespace dcl {

namespace {

constexpr double kPi = std::numbers::pi;

double face_angle(const PLMetric& m, const ConformalFactor& u, int face, VertexId apex) {
    const Face& f = m.tri->faces()[face];
    VertexId j = -1, k = -1;
    for (int s = 0; s < 3; ++s)
        if (f.v[s] != apex) (j < 0 ? j : k) = f.v[s];
    double a = m.at(j, k) * std::exp(0.5 * (u[j] + u[k]));
    double b = m.at(apex, j) * std::exp(0.5 * (u[apex] + u[j]));
    double c = m.at(apex, k) * std::exp(0.5 * (u[apex] + u[k]));
    return triangle_angle(a, b, c);
}

double edge_cotan_sum(const PLMetric& m, const ConformalFactor& u, int e, bool& boundary) {
    const Triangulation& tri = *m.tri;
    const EdgeKey& ek = tri.edges()[e];
    double sum = 0;
    for (int fi : tri.edge_faces(e)) {
        VertexId opp = -1;
        for (int s = 0; s < 3; ++s)
            if (tri.faces()[fi].v[s] != ek.a && tri.faces()[fi].v[s] != ek.b)
                opp = tri.faces()[fi].v[s];
        sum += 1.0 / std::tan(face_angle(m, u, fi, opp));
    }
    boundary = tri.edge_faces(e).size() == 1;
    return 0.5 * sum;
}

struct HarmonicSystem {
    std::vector<VertexId> interior;            // region interior, solve order
    std::vector<int> index_of;                 // vertex -> interior index or -1
    std::vector<VertexId> boundary;
};

HarmonicSystem region_split(const VertexSet& region) {
    HarmonicSystem sys;
    VertexSet inter = region.interior();
    VertexSet bdry = region.boundary();
    sys.index_of.assign(region.triangulation().vertex_count(), -1);
    for (VertexId i : inter.vertices()) {
        sys.index_of[i] = (int)sys.interior.size();
        sys.interior.push_back(i);
    }
    sys.boundary = bdry.vertices();
    return sys;
}

// Solve the interior harmonic system with the given per-edge weights and
// prescribed values on the region boundary. Returns velocities for interior
// vertices; throws on factorization failure or nonpositive weights.
Eigen::VectorXd solve_harmonic(const Triangulation& tri, const HarmonicSystem& sys,
                               const std::vector<double>& eta,
                               const std::vector<double>& boundary_value) {
    int m = (int)sys.interior.size();
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < m; ++r) {
        VertexId i = sys.interior[r];
        double diag = 0;
        for (int e : tri.vertex_edges(i)) {
            VertexId j = tri.edges()[e].a == i ? tri.edges()[e].b : tri.edges()[e].a;
            double w = eta[e];
            if (!(w > 0))
                throw Error("nonpositive cotangent weight on edge " + std::to_string(e));
            diag += w;
            if (sys.index_of[j] >= 0)
                trip.emplace_back(r, sys.index_of[j], -w);
            else
                rhs[r] += w * boundary_value[j];
        }
        trip.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> L(m, m);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
    if (solver.info() != Eigen::Success) throw Error("harmonic system factorization failed");
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw Error("harmonic system solve failed");
    return x;
}

}  // namespace

PLMetric conformal_change(const PLMetric& metric, const ConformalFactor& u) {
    if ((int)u.size() != metric.tri->vertex_count()) throw Error("factor size mismatch");
    std::vector<double> len(metric.length.size());
    for (int e = 0; e < (int)len.size(); ++e) {
        const EdgeKey& ek = metric.tri->edges()[e];
        len[e] = std::exp(0.5 * (u[ek.a] + u[ek.b])) * metric.length[e];
    }
    return PLMetric(*metric.tri, std::move(len));
}

double curvature_at(const PLMetric& metric, const ConformalFactor& u, VertexId i) {
    const Triangulation& tri = *metric.tri;
    if (!tri.is_interior_vertex(i))
        throw Error("curvature queried at boundary vertex " + std::to_string(i));
    double sum = 0;
    for (int fi : tri.vertex_faces(i)) sum += face_angle(metric, u, fi, i);
    return 2 * kPi - sum;
}

std::vector<double> curvature(const PLMetric& metric, const ConformalFactor& u,
                              const VertexSet& at) {
    std::vector<double> K(metric.tri->vertex_count(),
                          std::numeric_limits<double>::quiet_NaN());
    for (VertexId i : at.vertices())
        if (metric.tri->is_interior_vertex(i)) K[i] = curvature_at(metric, u, i);
    return K;
}

CotanWeights cotan_weights(const PLMetric& metric, const ConformalFactor& u) {
    const Triangulation& tri = *metric.tri;
    CotanWeights out;
    out.eta.resize(tri.edges().size());
    out.boundary_half.resize(tri.edges().size());
    for (int e = 0; e < (int)tri.edges().size(); ++e) {
        bool bdry = false;
        out.eta[e] = edge_cotan_sum(metric, u, e, bdry);
        out.boundary_half[e] = bdry;
    }
    return out;
}

CurvatureDifferentialRow curvature_differential(const PLMetric& metric,
                                                const ConformalFactor& u, VertexId i) {
    const Triangulation& tri = *metric.tri;
    if (!tri.is_interior_vertex(i))
        throw Error("curvature differential at boundary vertex");
    CurvatureDifferentialRow row;
    row.center = i;
    for (int e : tri.vertex_edges(i)) {
        VertexId j = tri.edges()[e].a == i ? tri.edges()[e].b : tri.edges()[e].a;
        bool bdry = false;
        double eta = edge_cotan_sum(metric, u, e, bdry);
        row.diagonal += eta;
        row.neighbor_coeff.emplace_back(j, -eta);
    }
    return row;
}

double acuteness_box(const PLMetric& metric, double eps, double m_max) {
    const Triangulation& tri = *metric.tri;
    double target = kPi / 2 - eps / 2;
    auto feasible = [&](double m) {
        // Per-face worst case over a grid of factor perturbations in [-m, m]^3.
        static const double g[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
        for (const Face& f : tri.faces()) {
            double ljk = metric.at(f.v[1], f.v[2]);
            double lik = metric.at(f.v[0], f.v[2]);
            double lij = metric.at(f.v[0], f.v[1]);
            for (double gi : g)
                for (double gj : g)
                    for (double gk : g) {
                        double a = ljk * std::exp(0.5 * m * (gj + gk));
                        double b = lik * std::exp(0.5 * m * (gi + gk));
                        double c = lij * std::exp(0.5 * m * (gi + gj));
                        if (a + b <= c || b + c <= a || c + a <= b) return false;
                        if (triangle_angle(a, b, c) > target) return false;
                        if (triangle_angle(b, a, c) > target) return false;
                        if (triangle_angle(c, a, b) > target) return false;
                    }
        }
        return true;
    };
    if (!feasible(0)) return 0;
    double lo = 0, hi = m_max;
    if (feasible(hi)) return hi;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

FlowResult flow_integrate(const PLMetric& metric, const VertexSet& region,
                          const std::vector<double>& boundary_velocity, double t_end,
                          double dt, double box) {
    const Triangulation& tri = *metric.tri;
    if ((int)boundary_velocity.size() != tri.vertex_count())
        throw Error("boundary velocity size mismatch");
    HarmonicSystem sys = region_split(region);
    for (VertexId j : sys.boundary)
        if (std::abs(boundary_velocity[j]) > 1 + 1e-12)
            throw Error("boundary velocity exceeds 1 in sup norm");
    if (box <= 0) {
        ClassifyResult c0 = classify(metric, 0);
        double eps0 = std::min(kPi / 2 - c0.max_angle, c0.min_angle);
        box = acuteness_box(metric, eps0);
    }

    std::vector<double> eta(tri.edges().size());
    auto velocity = [&](const ConformalFactor& u, ConformalFactor& du) {
        bool b = false;
        for (int e : region.edge_set_E()) eta[e] = edge_cotan_sum(metric, u, e, b);
        Eigen::VectorXd x = solve_harmonic(tri, sys, eta, boundary_velocity);
        du.assign(tri.vertex_count(), 0.0);
        for (VertexId j : sys.boundary) du[j] = boundary_velocity[j];
        for (int r = 0; r < (int)sys.interior.size(); ++r) du[sys.interior[r]] = x[r];
    };

    FlowResult out;
    ConformalFactor u(tri.vertex_count(), 0.0), k1, k2, k3, k4, tmp(tri.vertex_count());
    int steps = (int)std::llround(t_end / dt);

    auto record = [&](double t) {
        FlowSample s;
        s.t = t;
        s.u = u;
        double maxK = 0;
        for (VertexId i : sys.interior)
            maxK = std::max(maxK, std::abs(curvature_at(metric, u, i)));
        s.max_abs_curvature = maxK;
        PLMetric ul = conformal_change(metric, u);
        ClassifyResult c = classify(ul, 0);
        s.min_angle_margin = kPi / 2 - c.max_angle;
        out.trajectory.push_back(std::move(s));
        return out.trajectory.back().min_angle_margin;
    };

    record(0.0);
    for (int s = 0; s < steps; ++s) {
        double t = s * dt;
        try {
            velocity(u, k1);
            for (int i = 0; i < (int)u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
            velocity(tmp, k2);
            for (int i = 0; i < (int)u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
            velocity(tmp, k3);
            for (int i = 0; i < (int)u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
            velocity(tmp, k4);
        } catch (const Error&) {
            out.status = FlowStatus::solve_failure;
            out.exit_time = t;
            return out;
        }
        for (int i = 0; i < (int)u.size(); ++i)
            u[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);

        double sup = 0;
        for (VertexId i : sys.interior) sup = std::max(sup, std::abs(u[i]));
        for (VertexId i : sys.boundary) sup = std::max(sup, std::abs(u[i]));
        double margin = record((s + 1) * dt);
        if (sup >= box) {
            out.status = FlowStatus::box_exit;
            out.exit_time = (s + 1) * dt;
            return out;
        }
        if (margin <= 0) {
            out.status = FlowStatus::acuteness_lost;
            out.exit_time = (s + 1) * dt;
            return out;
        }
    }
    out.status = FlowStatus::completed;
    out.exit_time = steps * dt;
    return out;
}

ConformalFactor solve_zero_curvature(const PLMetric& metric, const VertexSet& region,
                                     const std::vector<double>& boundary_u,
                                     const ZeroCurvatureOptions& opt) {
    const Triangulation& tri = *metric.tri;
    HarmonicSystem sys = region_split(region);
    int m = (int)sys.interior.size();

    ConformalFactor u(tri.vertex_count(), 0.0);
    for (VertexId j : sys.boundary) u[j] = boundary_u[j];
    // Start interior at the boundary mean; for constant data this is already
    // the solution.
    double mean = 0;
    for (VertexId j : sys.boundary) mean += boundary_u[j];
    if (!sys.boundary.empty()) mean /= (double)sys.boundary.size();
    for (VertexId i : sys.interior) u[i] = mean;

    auto residual = [&](const ConformalFactor& v, Eigen::VectorXd& K) {
        K.resize(m);
        double sup = 0;
        for (int r = 0; r < m; ++r) {
            K[r] = curvature_at(metric, v, sys.interior[r]);
            sup = std::max(sup, std::abs(K[r]));
        }
        return sup;
    };
    auto acute_enough = [&](const ConformalFactor& v) {
        PLMetric vl = conformal_change(metric, v);
        if (!vl.is_metric()) return false;
        return classify(vl, 0).max_angle < kPi / 2 - opt.eps_guard;
    };
    if (!acute_enough(u)) throw Error("initial iterate not uniformly acute");

    Eigen::VectorXd K;
    double supK = residual(u, K);
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (supK <= opt.tol) return u;
        std::vector<Eigen::Triplet<double>> trip;
        for (int r = 0; r < m; ++r) {
            CurvatureDifferentialRow row = curvature_differential(metric, u, sys.interior[r]);
            trip.emplace_back(r, r, row.diagonal);
            for (auto [j, c] : row.neighbor_coeff)
                if (sys.index_of[j] >= 0) trip.emplace_back(r, sys.index_of[j], c);
        }
        Eigen::SparseMatrix<double> J(m, m);
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(J);
        if (solver.info() != Eigen::Success) throw Error("curvature Jacobian factorization failed");
        Eigen::VectorXd step = solver.solve(-K);

        double damp = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half, damp *= 0.5) {
            ConformalFactor trial = u;
            for (int r = 0; r < m; ++r) trial[sys.interior[r]] += damp * step[r];
            if (!acute_enough(trial)) continue;
            Eigen::VectorXd Kt;
            double supKt = residual(trial, Kt);
            if (supKt < supK) {
                u = std::move(trial);
                K = std::move(Kt);
                supK = supKt;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw Error("zero-curvature solve stalled (acuteness or descent lost)");
    }
    if (supK > opt.tol) throw Error("zero-curvature solve did not converge");
    return u;
}

MaxPrincipleStatus check_local_max_principle(const PLMetric& metric,
                                             const ConformalFactor& u,
                                             const ConformalFactor& u_prime, VertexId i,
                                             double slack, double curvature_tol) {
    const Triangulation& tri = *metric.tri;
    if (!tri.is_interior_vertex(i)) return MaxPrincipleStatus::inconclusive;

    // Delaunay on the 1-ring subcomplex for both metrics, and K_i = 0 for both.
    OneRing ring = one_ring(tri, i);
    std::vector<VertexId> parent = ring.complex_to_parent;
    auto sub_metric = [&](const ConformalFactor& v) {
        std::vector<double> len(ring.complex.edges().size());
        for (int e = 0; e < (int)len.size(); ++e) {
            const EdgeKey& ek = ring.complex.edges()[e];
            VertexId a = parent[ek.a], b = parent[ek.b];
            len[e] = metric.at(a, b) * std::exp(0.5 * (v[a] + v[b]));
        }
        return PLMetric(ring.complex, std::move(len));
    };
    try {
        PLMetric mu = sub_metric(u), mup = sub_metric(u_prime);
        if (!mu.is_metric() || !mup.is_metric()) return MaxPrincipleStatus::inconclusive;
        if (!classify(mu, 0).delaunay || !classify(mup, 0).delaunay)
            return MaxPrincipleStatus::inconclusive;
        if (std::abs(curvature_at(metric, u, i)) > curvature_tol ||
            std::abs(curvature_at(metric, u_prime, i)) > curvature_tol)
            return MaxPrincipleStatus::inconclusive;
    } catch (const Error&) {
        return MaxPrincipleStatus::inconclusive;
    }

    double diff_i = u_prime[i] - u[i];
    double max_nb = -std::numeric_limits<double>::infinity();
    for (VertexId j : ring.cycle) max_nb = std::max(max_nb, u_prime[j] - u[j]);
    return diff_i <= max_nb + slack ? MaxPrincipleStatus::holds
                                    : MaxPrincipleStatus::violated;
}

}  // namespace dcl
