#include "dcl/experiments.hpp"

#include <Eigen/Sparse>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "dcl/modulus.hpp"

namespace dcl {

namespace {
constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

RecoverResult recover_factor(const Embedding& emb_phi, const Embedding& emb_psi,
                             double tol) {
    const Triangulation& tri = *emb_phi.tri;
    if (emb_psi.tri != &tri) throw Error("embeddings over different triangulations");
    int n = tri.vertex_count();
    int m = (int)tri.edges().size();

    // Normal equations of the sparse system (u_i+u_j)/2 = b_e.
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    std::vector<double> b(m);
    for (int e = 0; e < m; ++e) {
        const EdgeKey& ek = tri.edges()[e];
        double l = std::abs(emb_phi.at(ek.a) - emb_phi.at(ek.b));
        double lp = std::abs(emb_psi.at(ek.a) - emb_psi.at(ek.b));
        if (!(l > 0 && lp > 0)) throw Error("degenerate edge in embedding");
        b[e] = std::log(lp / l);
        trip.emplace_back(ek.a, ek.a, 0.25);
        trip.emplace_back(ek.b, ek.b, 0.25);
        trip.emplace_back(ek.a, ek.b, 0.25);
        trip.emplace_back(ek.b, ek.a, 0.25);
        rhs[ek.a] += 0.5 * b[e];
        rhs[ek.b] += 0.5 * b[e];
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    // Odd cycles (every face is one) make the normal matrix positive definite.
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw Error("factor recovery factorization failed");
    Eigen::VectorXd u = solver.solve(rhs);

    RecoverResult out;
    out.u.assign(u.data(), u.data() + n);
    for (int e = 0; e < m; ++e) {
        const EdgeKey& ek = tri.edges()[e];
        out.max_residual =
            std::max(out.max_residual, std::abs(0.5 * (u[ek.a] + u[ek.b]) - b[e]));
    }
    if (out.max_residual > tol)
        throw Error("embeddings are not conformally related (residual " +
                    std::to_string(out.max_residual) + ")");
    return out;
}

namespace {

// Inradius of the image about `center`: distance to the nearest boundary
// vertex (patch images are star-shaped about their center in our tests;
// this underestimates at worst, which only shrinks the admissible set).
double image_inradius(const Embedding& emb, Complex center) {
    const Triangulation& tri = *emb.tri;
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < tri.vertex_count(); ++i)
        if (!tri.is_interior_vertex(i))
            r = std::min(r, std::abs(emb.at(i) - center));
    return std::isfinite(r) ? r : 0.0;
}

Complex interior_centroid(const Embedding& emb) {
    Complex s = 0;
    int k = 0;
    for (int i = 0; i < emb.tri->vertex_count(); ++i)
        if (emb.tri->is_interior_vertex(i)) { s += emb.at(i); ++k; }
    return k ? s / (double)k : Complex(0, 0);
}

}  // namespace

OscillationReport oscillation_experiment(const Embedding& emb_phi,
                                         const Embedding& emb_psi,
                                         double epsilon,
                                         double tol) {
    auto t0 = std::chrono::steady_clock::now();
    const Triangulation& tri = *emb_phi.tri;
    PLMetric m_phi = induced_metric(emb_phi);
    PLMetric m_psi = induced_metric(emb_psi);
    ClassifyResult c_phi = classify(m_phi, epsilon);
    ClassifyResult c_psi = classify(m_psi, epsilon);
    if (!c_phi.uniformly_acute || !c_psi.uniformly_acute)
        throw Error("oscillation experiment requires uniformly acute patches");

    OscillationReport rep;
    rep.vertex_count = tri.vertex_count();
    rep.face_count = (int)tri.faces().size();
    rep.eps_measured =
        std::min(kPi / 2 - c_phi.max_angle, kPi / 2 - c_psi.max_angle);

    RecoverResult rec = recover_factor(emb_phi, emb_psi, tol);

    CoveringConstants cov_phi = covering_constants(emb_phi);
    CoveringConstants cov_psi = covering_constants(emb_psi);
    rep.delta = std::min(cov_phi.delta, cov_psi.delta);
    rep.covering_c = 1 + 2 / rep.delta;

    ConformalFactor zero(tri.vertex_count(), 0.0);
    for (const PLMetric* m : {&m_phi, &m_psi}) {
        std::vector<double> k = curvature(*m, zero, VertexSet::full(tri));
        for (int i = 0; i < tri.vertex_count(); ++i)
            if (tri.is_interior_vertex(i))
                rep.curvature_sup = std::max(rep.curvature_sup, std::abs(k[i]));
    }
    rep.c_prime = std::exp(200 * kPi * rep.curvature_sup);
    rep.m_const = 2 * std::log(1 / std::sin(rep.eps_measured)) + 3;
    rep.bound = oscillation_bound(
        {rep.eps_measured, rep.curvature_sup, rep.covering_c});

    PLMap map{&tri, &emb_phi, &emb_psi};
    rep.max_dilatation = dilatation(map).max_dilatation;

    // Admissible vertices: image within r/(2C) of the patch center on both
    // sides, r the respective image inradius.
    Complex ctr_phi = interior_centroid(emb_phi);
    Complex ctr_psi = interior_centroid(emb_psi);
    double r_phi = image_inradius(emb_phi, ctr_phi) / (2 * rep.covering_c);
    double r_psi = image_inradius(emb_psi, ctr_psi) / (2 * rep.covering_c);
    std::vector<int> admissible;
    for (int i = 0; i < tri.vertex_count(); ++i)
        if (std::abs(emb_phi.at(i) - ctr_phi) <= r_phi &&
            std::abs(emb_psi.at(i) - ctr_psi) <= r_psi)
            admissible.push_back(i);

    rep.admissible_pairs = (int)(admissible.size() * (admissible.size() - 1) / 2);
    rep.applicable = admissible.size() >= 2;
    if (rep.applicable) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i : admissible) {
            lo = std::min(lo, rec.u[i]);
            hi = std::max(hi, rec.u[i]);
        }
        rep.oscillation = hi - lo;
        rep.pass = rep.oscillation <= rep.bound + tol;
    } else {
        rep.pass = true;  // bound not applicable at this scale
    }
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

FlowExperimentReport flow_to_constant_experiment(const Embedding& patch,
                                                 const ConformalFactor& bar_u,
                                                 double delta,
                                                 std::vector<double> radii,
                                                 double dt,
                                                 double tol) {
    auto t0 = std::chrono::steady_clock::now();
    const Triangulation& tri = *patch.tri;
    PLMetric metric = induced_metric(patch);

    double sup = -std::numeric_limits<double>::infinity();
    double inf = -sup;
    for (double v : bar_u) {
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    if (!(sup > 0) || std::abs(sup + inf) > 1e-9 * std::max(1.0, sup))
        throw Error("bar_u must be normalized with -inf = sup = |bar_u|_inf");
    if (!(delta > 0 && delta < sup)) throw Error("delta must lie in (0, |bar_u|_inf)");

    FlowExperimentReport rep;
    rep.bar_u_sup = sup;
    rep.delta = delta;

    Complex ctr = interior_centroid(patch);
    if (radii.empty()) {
        double rmax = 0;
        for (int i = 0; i < tri.vertex_count(); ++i)
            rmax = std::max(rmax, std::abs(patch.at(i) - ctr));
        radii = {rmax / 2.5, rmax / 1.5, rmax * 1.001};
    }

    ConformalFactor vel(tri.vertex_count());
    for (int i = 0; i < tri.vertex_count(); ++i) vel[i] = bar_u[i] / sup;

    bool all_ok = true;
    for (double r : radii) {
        std::vector<bool> member(tri.vertex_count(), false);
        for (int i = 0; i < tri.vertex_count(); ++i)
            if (std::abs(patch.at(i) - ctr) <= r) member[i] = true;
        VertexSet vn(tri, member);
        TruncationCheck chk;
        chk.radius = r;
        chk.interior_count = (int)vn.interior().vertices().size();
        if (chk.interior_count == 0) {
            rep.truncations.push_back(chk);
            all_ok = false;
            continue;
        }
        int steps = (int)std::ceil(delta / dt - 1e-12);
        FlowResult fr = flow_integrate(metric, vn, vel, delta, delta / steps);
        chk.status = fr.status;
        chk.exit_time = fr.exit_time;
        chk.bound = sup - delta;
        if (fr.status == FlowStatus::completed) {
            const ConformalFactor& u = fr.trajectory.back().u;
            for (VertexId i : vn.vertices())
                chk.max_gap = std::max(chk.max_gap, std::abs(bar_u[i] - u[i]));
            chk.ok = chk.max_gap <= chk.bound + tol;
        }
        all_ok = all_ok && chk.ok;
        rep.truncations.push_back(chk);
    }
    rep.pass = all_ok;
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

std::string to_json(const OscillationReport& r) {
    nlohmann::json j{{"experiment", r.experiment},
                     {"vertex_count", r.vertex_count},
                     {"face_count", r.face_count},
                     {"eps_measured", r.eps_measured},
                     {"delta", r.delta},
                     {"covering_c", r.covering_c},
                     {"curvature_sup", r.curvature_sup},
                     {"c_prime", r.c_prime},
                     {"m_const", r.m_const},
                     {"bound", r.bound},
                     {"oscillation", r.oscillation},
                     {"admissible_pairs", r.admissible_pairs},
                     {"applicable", r.applicable},
                     {"pass", r.pass},
                     {"max_dilatation", r.max_dilatation},
                     {"runtime_seconds", r.runtime_seconds}};
    return j.dump();
}

std::string to_json(const FlowExperimentReport& r) {
    nlohmann::json trunc = nlohmann::json::array();
    for (const TruncationCheck& t : r.truncations) {
        const char* status = t.status == FlowStatus::completed      ? "completed"
                             : t.status == FlowStatus::box_exit     ? "box_exit"
                             : t.status == FlowStatus::acuteness_lost ? "acuteness_lost"
                                                                      : "solve_failure";
        trunc.push_back({{"radius", t.radius},
                         {"interior_count", t.interior_count},
                         {"status", status},
                         {"max_gap", t.max_gap},
                         {"bound", t.bound},
                         {"exit_time", t.exit_time},
                         {"ok", t.ok}});
    }
    nlohmann::json j{{"experiment", r.experiment},
                     {"bar_u_sup", r.bar_u_sup},
                     {"delta", r.delta},
                     {"truncations", trunc},
                     {"pass", r.pass},
                     {"runtime_seconds", r.runtime_seconds}};
    return j.dump();
}

}  // namespace dcl
