#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "dcl/experiments.hpp"
#include "dcl/hyperbolic.hpp"
#include "dcl/io.hpp"
#include "dcl/modulus.hpp"

namespace {

using namespace dcl;

constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;

struct LoadedMesh {
    PatchData data;
    Triangulation tri;
    Embedding emb;
    LoadedMesh(const std::string& path) : data(read_mesh_file(path)), tri((int)data.pos.size(), data.faces) {
        emb.tri = &tri;
        emb.position = data.pos;
        emb.validate();
    }
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) {
        out << text;
    } else {
        std::ofstream f(path);
        if (!f) throw Error("cannot write " + path);
        f << text;
    }
}

int run_verify(const std::string& mesh_path, double eps) {
    LoadedMesh m(mesh_path);
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };

    PLMetric metric = induced_metric(m.emb);
    check(metric.is_metric(), "triangle inequalities hold on every face");

    ClassifyResult cls = classify(metric, eps);
    check(cls.uniformly_nondegenerate, "uniformly nondegenerate at eps");
    check(cls.uniformly_acute, "uniformly acute at eps");
    check(cls.delaunay, "Delaunay (angle form)");
    DelaunayWitness dw = delaunay_circumdisk_form(m.emb);
    check(dw.delaunay == cls.delaunay, "angle-sum and circumdisk Delaunay agree");

    ConformalFactor zero(m.tri.vertex_count(), 0.0);
    std::vector<double> k = curvature(metric, zero, VertexSet::full(m.tri));
    double ksup = 0;
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (m.tri.is_interior_vertex(i)) ksup = std::max(ksup, std::abs(k[i]));
    check(ksup <= 1e-9, "embedded patch is flat at interior vertices");

    CotanWeights w = cotan_weights(metric, zero);
    bool positive = true;
    for (double e : w.eta) positive = positive && e > 0;
    check(positive, "cotangent weights positive (acute implies this)");

    // Dirichlet sup bound with harmonic data x-coordinate.
    std::vector<NetEdge> edges;
    for (size_t e = 0; e < m.tri.edges().size(); ++e)
        edges.push_back({m.tri.edges()[e].a, m.tri.edges()[e].b, w.eta[e]});
    Network net((int)m.data.pos.size(), edges);
    std::vector<bool> region(net.vertex_count(), true);
    for (int i = 0; i < net.vertex_count(); ++i)
        region[i] = true;
    std::vector<bool> v0(net.vertex_count());
    for (int i = 0; i < net.vertex_count(); ++i) v0[i] = m.tri.is_interior_vertex(i);
    std::vector<double> g(net.vertex_count());
    for (int i = 0; i < net.vertex_count(); ++i) g[i] = m.data.pos[i].real();
    std::vector<bool> fixed(net.vertex_count());
    for (int i = 0; i < net.vertex_count(); ++i) fixed[i] = !v0[i];
    DirichletResult dr = solve_dirichlet_fixed(net, fixed, g);
    double gmax = 0, fmax = 0;
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (!m.tri.is_interior_vertex(i)) gmax = std::max(gmax, std::abs(g[i]));
        if (std::isfinite(dr.f[i])) fmax = std::max(fmax, std::abs(dr.f[i]));
    }
    check(dr.max_residual <= 1e-12, "Dirichlet residual below 1e-12");
    check(fmax <= gmax + 1e-12, "Dirichlet sup bound");

    std::ostringstream s1, s2;
    write_mesh(s1, m.data);
    std::istringstream back(s1.str());
    write_mesh(s2, read_mesh(back));
    check(s1.str() == s2.str(), "mesh file round-trip is bit-identical");

    std::cout << (failures ? "verify: FAILED\n" : "verify: all checks passed\n");
    return failures ? kExitVerify : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete conformal rigidity lab"};
    app.require_subcommand(1);

    std::string mesh_path, mesh2_path, factor_path, net_path, problem_path, out_path;
    double eps = 0.1, tol = 1e-9, t_end = 0.1, dt = 1e-3, jitter = 0, delta = 0.05;
    double r_in = 1, r_out = 2, ratio = 0, r0 = 1.1;
    int rings = 3, levels = 4, nrings = 2;
    std::uint64_t seed = 0;

    auto* gen = app.add_subcommand("gen", "generate meshes");
    auto* gen_hex = gen->add_subcommand("hex", "hexagonal patch");
    gen_hex->add_option("--rings", rings)->required();
    gen_hex->add_option("--jitter", jitter);
    gen_hex->add_option("--seed", seed);
    gen_hex->add_option("--eps", eps);
    gen_hex->add_option("-o,--out", out_path);

    auto* cls = app.add_subcommand("classify", "acuteness/Delaunay predicates");
    cls->add_option("mesh", mesh_path)->required();
    cls->add_option("--eps", eps);

    auto* curv = app.add_subcommand("curvature", "per-vertex discrete curvature");
    curv->add_option("mesh", mesh_path)->required();
    curv->add_option("factor", factor_path);

    auto* wts = app.add_subcommand("weights", "cotangent edge weights");
    wts->add_option("mesh", mesh_path)->required();

    auto* slv = app.add_subcommand("solve", "zero-curvature factor from boundary data");
    slv->add_option("mesh", mesh_path)->required();
    slv->add_option("boundary", factor_path)->required();
    slv->add_option("--tol", tol);
    slv->add_option("-o,--out", out_path);

    auto* flw = app.add_subcommand("flow", "curvature-preserving flow trajectory");
    flw->add_option("mesh", mesh_path)->required();
    flw->add_option("velocity", factor_path)->required();
    flw->add_option("--t", t_end);
    flw->add_option("--dt", dt);
    flw->add_option("-o,--out", out_path);

    auto* har = app.add_subcommand("harmonic", "Dirichlet solve on a network");
    har->add_option("net", net_path)->required();
    har->add_option("values", factor_path)->required();
    std::vector<int> fixed;
    har->add_option("--fixed", fixed, "fixed vertex indices")->required();

    auto* elc = app.add_subcommand("el", "extremal length");
    elc->add_option("net", net_path)->required();
    elc->add_option("problem", problem_path)->required();

    auto* ewc = app.add_subcommand("ew", "extremal width");
    ewc->add_option("net", net_path)->required();
    ewc->add_option("problem", problem_path)->required();

    auto* rec = app.add_subcommand("recurrence", "per-ring extremal lengths");
    rec->add_option("mesh", mesh_path)->required();
    rec->add_option("--r0", r0);
    rec->add_option("--ratio", ratio, "ring growth (default 2C)");
    rec->add_option("--rings", nrings);
    rec->add_option("--eps", eps);

    auto* hyp = app.add_subcommand("hyp", "hyperbolic conformal factor");
    hyp->add_option("src", mesh_path)->required();
    hyp->add_option("dst", mesh2_path)->required();
    hyp->add_option("factor", factor_path)->required();

    auto* dil = app.add_subcommand("dilatation", "quasiconformal dilatation of a PL map");
    dil->add_option("src", mesh_path)->required();
    dil->add_option("dst", mesh2_path)->required();

    auto* mod = app.add_subcommand("modulus", "annulus modulus estimate");
    mod->add_option("--r", r_in);
    mod->add_option("--R", r_out);
    mod->add_option("--levels", levels);

    auto* exp = app.add_subcommand("experiment", "end-to-end experiments");
    auto* exp_osc = exp->add_subcommand("oscillation", "factor oscillation vs bound");
    exp_osc->add_option("src", mesh_path)->required();
    exp_osc->add_option("dst", mesh2_path)->required();
    exp_osc->add_option("--eps", eps);
    auto* exp_flow = exp->add_subcommand("flow", "flow-to-constant contraction");
    exp_flow->add_option("mesh", mesh_path)->required();
    exp_flow->add_option("bar_u", factor_path)->required();
    exp_flow->add_option("--delta", delta);

    auto* ver = app.add_subcommand("verify", "run the invariant suite");
    ver->add_option("mesh", mesh_path)->required();
    ver->add_option("--eps", eps);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (gen_hex->parsed()) {
            PatchData p = jitter == 0 ? hex_patch(rings)
                                      : generate_perturbed_acute(rings, jitter, eps, seed);
            std::ostringstream s;
            write_mesh(s, p);
            emit(std::cout, out_path, s.str());
        } else if (cls->parsed()) {
            LoadedMesh m(mesh_path);
            ClassifyResult r = classify(induced_metric(m.emb), eps);
            std::cout << "uniformly_nondegenerate " << r.uniformly_nondegenerate
                      << " (min angle " << r.min_angle << " at face " << r.min_angle_face
                      << ")\n"
                      << "uniformly_acute " << r.uniformly_acute << " (max angle "
                      << r.max_angle << " at face " << r.max_angle_face << ")\n"
                      << "delaunay " << r.delaunay << " (worst opposite-angle sum "
                      << r.worst_delaunay_sum << " at edge " << r.worst_delaunay_edge
                      << ")\n";
        } else if (curv->parsed()) {
            LoadedMesh m(mesh_path);
            ConformalFactor u(m.tri.vertex_count(), 0.0);
            if (!factor_path.empty()) u = read_factor_file(factor_path);
            std::vector<double> k =
                curvature(induced_metric(m.emb), u, VertexSet::full(m.tri));
            for (int i = 0; i < m.tri.vertex_count(); ++i)
                std::cout << i << ' ' << k[i]
                          << (m.tri.is_interior_vertex(i) ? "" : " (boundary)") << '\n';
        } else if (wts->parsed()) {
            LoadedMesh m(mesh_path);
            CotanWeights w = cotan_weights(induced_metric(m.emb),
                                           ConformalFactor(m.tri.vertex_count(), 0.0));
            for (size_t e = 0; e < m.tri.edges().size(); ++e)
                std::cout << "e " << m.tri.edges()[e].a << ' ' << m.tri.edges()[e].b
                          << ' ' << w.eta[e] << '\n';
        } else if (slv->parsed()) {
            LoadedMesh m(mesh_path);
            ConformalFactor g = read_factor_file(factor_path);
            if ((int)g.size() != m.tri.vertex_count())
                throw ParseError("factor length does not match vertex count");
            ZeroCurvatureOptions opt;
            opt.tol = tol;
            ConformalFactor u = solve_zero_curvature(induced_metric(m.emb),
                                                     VertexSet::full(m.tri), g, opt);
            std::ostringstream s;
            write_factor(s, u);
            emit(std::cout, out_path, s.str());
        } else if (flw->parsed()) {
            LoadedMesh m(mesh_path);
            ConformalFactor v = read_factor_file(factor_path);
            if ((int)v.size() != m.tri.vertex_count())
                throw ParseError("factor length does not match vertex count");
            FlowResult r = flow_integrate(induced_metric(m.emb), VertexSet::full(m.tri),
                                          v, t_end, dt);
            std::ostringstream s;
            for (const FlowSample& smp : r.trajectory) s << trajectory_line(smp) << '\n';
            emit(std::cout, out_path, s.str());
            if (r.status != FlowStatus::completed) {
                std::cerr << "flow stopped early at t = " << r.exit_time << '\n';
                return kExitSolver;
            }
        } else if (har->parsed()) {
            Network net = read_network_file(net_path);
            std::vector<double> g = read_factor_file(factor_path);
            if ((int)g.size() != net.vertex_count())
                throw ParseError("value count does not match network");
            std::vector<bool> v0(net.vertex_count(), true);
            for (int i : fixed) {
                if (i < 0 || i >= net.vertex_count())
                    throw ParseError("fixed index out of range");
                v0[i] = false;
            }
            std::vector<bool> fixed(net.vertex_count());
            for (int i = 0; i < net.vertex_count(); ++i) fixed[i] = !v0[i];
            DirichletResult r = solve_dirichlet_fixed(net, fixed, g);
            for (int i = 0; i < net.vertex_count(); ++i)
                std::cout << i << ' ' << (std::isfinite(r.f[i]) ? r.f[i] : g[i]) << '\n';
        } else if (elc->parsed() || ewc->parsed()) {
            Network net = read_network_file(net_path);
            ELProblem p = read_problem_file(problem_path, net);
            ELResult r = elc->parsed() ? extremal_length(p) : extremal_width(p);
            if (!r.connected && elc->parsed()) {
                std::cout << "EL inf (no connection)\n";
            } else {
                std::cout << (elc->parsed() ? "EL " : "EW ") << r.value << '\n';
                for (size_t e = 0; e < r.w.size(); ++e)
                    if (r.w[e] != 0)
                        std::cout << "w " << net.edges()[e].a << ' ' << net.edges()[e].b
                                  << ' ' << r.w[e] << '\n';
            }
        } else if (rec->parsed()) {
            LoadedMesh m(mesh_path);
            CotanWeights w = cotan_weights(induced_metric(m.emb),
                                           ConformalFactor(m.tri.vertex_count(), 0.0));
            std::vector<NetEdge> edges;
            for (size_t e = 0; e < m.tri.edges().size(); ++e)
                edges.push_back({m.tri.edges()[e].a, m.tri.edges()[e].b, w.eta[e]});
            Network net((int)m.data.pos.size(), edges);
            CoveringConstants cov = covering_constants(m.emb);
            double growth = ratio > 0 ? ratio : 2 * cov.C;
            std::vector<double> radii{r0};
            for (int i = 0; i < nrings; ++i) radii.push_back(radii.back() * growth);
            RecurrenceProfile pr = recurrence_profile(net, m.data.pos, radii, eps, cov.C);
            std::cout << "C " << cov.C << " ring bound " << pr.theoretical_ring_bound
                      << '\n';
            for (size_t k = 0; k < pr.per_ring_el.size(); ++k)
                std::cout << "ring " << k + 1 << " EL " << pr.per_ring_el[k]
                          << " cumulative " << pr.cumulative[k] << '\n';
        } else if (hyp->parsed()) {
            LoadedMesh a(mesh_path);
            PatchData bdata = read_mesh_file(mesh2_path);
            Embedding b(a.tri, bdata.pos);
            ConformalFactor u = read_factor_file(factor_path);
            HyperbolicFactorResult r = to_hyperbolic_factor(u, a.emb, b);
            for (size_t i = 0; i < r.uh.size(); ++i) std::cout << r.uh[i] << '\n';
            std::cerr << "max edge relation gap " << r.max_edge_relation_gap << '\n';
        } else if (dil->parsed()) {
            LoadedMesh a(mesh_path);
            PatchData bdata = read_mesh_file(mesh2_path);
            Embedding b(a.tri, bdata.pos);
            DilatationResult r = dilatation({&a.tri, &a.emb, &b});
            std::cout << "max dilatation " << r.max_dilatation << " at face "
                      << r.worst_face << '\n';
        } else if (mod->parsed()) {
            ModulusEstimate r = modulus_estimate(r_in, r_out, levels);
            std::cout << "estimate " << r.value << " exact " << r.exact << " vertices "
                      << r.vertex_count << " levels " << levels << '\n';
        } else if (exp_osc->parsed()) {
            LoadedMesh a(mesh_path);
            PatchData bdata = read_mesh_file(mesh2_path);
            Embedding b(a.tri, bdata.pos);
            std::cout << to_json(oscillation_experiment(a.emb, b, eps)) << '\n';
        } else if (exp_flow->parsed()) {
            LoadedMesh m(mesh_path);
            ConformalFactor bar_u = read_factor_file(factor_path);
            std::cout << to_json(flow_to_constant_experiment(m.emb, bar_u, delta)) << '\n';
        } else if (ver->parsed()) {
            return run_verify(mesh_path, eps);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return 0;
}
