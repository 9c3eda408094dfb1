#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "dcl/experiments.hpp"
#include "dcl/generate.hpp"

using namespace dcl;

namespace {

struct Mesh {
    Triangulation tri;
    Embedding emb;
    Mesh(PatchData d) : tri((int)d.pos.size(), d.faces), emb(tri, d.pos) {}
};

}  // namespace

TEST_CASE("recover_factor inverts a conformal change") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-0.15, 0.15);
    PatchData d = hex_patch(2);
    Triangulation t((int)d.pos.size(), d.faces);
    Embedding src(t, d.pos);
    for (int it = 0; it < 20; ++it) {
        double c = U(rng);  // similarity pair: exact factor c everywhere
        std::vector<Complex> dst;
        for (Complex z : d.pos) dst.push_back(std::exp(c) * z);
        Embedding ed(t, dst);
        RecoverResult r = recover_factor(src, ed);
        CHECK(r.max_residual < 1e-10);
        for (int i = 0; i < t.vertex_count(); ++i)
            CHECK(r.u[i] == doctest::Approx(c).epsilon(1e-9));
    }
    // Unrelated embeddings are rejected.
    PatchData j = generate_perturbed_acute(2, 0.12, 0.05, 3);
    Embedding bad(t, j.pos);
    CHECK_THROWS_AS(recover_factor(src, bad), Error);
}

TEST_CASE("oscillation experiment on a scaled patch pair") {
    Mesh a(hex_patch(3));
    std::vector<Complex> scaled;
    for (Complex z : a.emb.position) scaled.push_back(0.75 * z);
    Embedding b(a.tri, scaled);
    OscillationReport rep = oscillation_experiment(a.emb, b, 0.1);
    CHECK(rep.vertex_count == a.tri.vertex_count());
    CHECK(rep.face_count == (int)a.tri.faces().size());
    CHECK(rep.delta == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-9));
    CHECK(rep.covering_c == doctest::Approx(1 + 4 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK(rep.curvature_sup < 1e-10);        // both metrics flat
    CHECK(rep.max_dilatation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.pass);                          // constant factor: oscillation 0
    if (rep.applicable) CHECK(rep.oscillation < 1e-9);
    CHECK(rep.bound > 0);

    // Report serializes to parseable JSON with the headline fields.
    nlohmann::json js = nlohmann::json::parse(to_json(rep));
    CHECK(js["experiment"] == "oscillation");
    CHECK(js["pass"] == rep.pass);
    CHECK(js["bound"].get<double>() == doctest::Approx(rep.bound));
}

TEST_CASE("flow-to-constant experiment contracts") {
    Mesh m(hex_patch(3));
    PLMetric len = induced_metric(m.emb);
    VertexSet region = VertexSet::full(m.tri);

    // Curvature-preserving bar_u from the zero-curvature solve, shifted so
    // that sup = -inf as the experiment requires.
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(-0.06, 0.06);
    std::vector<double> g(m.tri.vertex_count(), 0.0);
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (!m.tri.is_interior_vertex(i)) g[i] = U(rng);
    ConformalFactor bar_u = solve_zero_curvature(len, region, g);
    double lo = *std::min_element(bar_u.begin(), bar_u.end());
    double hi = *std::max_element(bar_u.begin(), bar_u.end());
    for (double& x : bar_u) x -= (lo + hi) / 2;

    double sup = (hi - lo) / 2;
    FlowExperimentReport rep =
        flow_to_constant_experiment(m.emb, bar_u, 0.5 * sup);
    CHECK(rep.pass);
    CHECK(rep.bar_u_sup == doctest::Approx(sup).epsilon(1e-12));
    REQUIRE(rep.truncations.size() == 3);
    for (const TruncationCheck& tc : rep.truncations) {
        CHECK(tc.ok);
        CHECK(tc.status == FlowStatus::completed);
        CHECK(tc.max_gap <= tc.bound + 1e-6);
        CHECK(tc.exit_time == doctest::Approx(0.5 * sup).epsilon(1e-9));
    }

    nlohmann::json js = nlohmann::json::parse(to_json(rep));
    CHECK(js["experiment"] == "flow_to_constant");
    CHECK(js["truncations"].size() == 3);

    // Unnormalized bar_u is rejected.
    ConformalFactor off = bar_u;
    for (double& x : off) x += 0.3 * sup;
    CHECK_THROWS_AS(flow_to_constant_experiment(m.emb, off, 0.5 * sup), Error);
}
