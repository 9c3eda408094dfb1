#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dcl/conformal.hpp"
#include "dcl/generate.hpp"

using namespace dcl;
using std::numbers::pi;

namespace {

struct Mesh {
    Triangulation tri;
    Embedding emb;
    PLMetric len;
    Mesh(PatchData d)
        : tri((int)d.pos.size(), d.faces), emb(tri, d.pos), len(induced_metric(emb)) {}
};

ConformalFactor zeros(const Triangulation& t) {
    return ConformalFactor(t.vertex_count(), 0.0);
}

ConformalFactor random_factor(const Triangulation& t, double amp, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-amp, amp);
    ConformalFactor u(t.vertex_count());
    for (double& x : u) x = U(rng);
    return u;
}

int interior_vertex(const Triangulation& t) {
    for (int i = 0; i < t.vertex_count(); ++i)
        if (t.is_interior_vertex(i)) return i;
    return -1;
}

}  // namespace

TEST_CASE("conformal change formulas") {
    Mesh m(hex_patch(1));
    ConformalFactor u = zeros(m.tri);
    PLMetric same = conformal_change(m.len, u);
    for (size_t e = 0; e < m.len.length.size(); ++e) CHECK(same.at((int)e) == m.len.at((int)e));

    // u constant c scales every length by e^c.
    for (double& x : u) x = 0.6;
    PLMetric scaled = conformal_change(m.len, u);
    for (size_t e = 0; e < m.len.length.size(); ++e)
        CHECK(scaled.at((int)e) ==
              doctest::Approx(std::exp(0.6) * m.len.at((int)e)).epsilon(1e-14));

    // Single edge: u_i = 2 log 2, u_j = 0, l = 1 -> l' = 2.
    Triangulation pair(3, {{0, 1, 2}});
    PLMetric l(pair, {1.0, 1.0, 1.0});
    ConformalFactor up = {2 * std::log(2.0), 0.0, 0.0};
    PLMetric lp = conformal_change(l, up);
    CHECK(lp.at(0, 1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("conformal change is a group action") {
    std::mt19937_64 rng(3);
    Mesh m(hex_patch(2));
    for (int it = 0; it < 200; ++it) {
        ConformalFactor u = random_factor(m.tri, 0.3, rng);
        ConformalFactor v = random_factor(m.tri, 0.3, rng);
        ConformalFactor sum(u.size());
        for (size_t i = 0; i < u.size(); ++i) sum[i] = u[i] + v[i];
        PLMetric two_step = conformal_change(conformal_change(m.len, v), u);
        PLMetric one_step = conformal_change(m.len, sum);
        for (size_t e = 0; e < m.len.length.size(); ++e)
            CHECK(two_step.at((int)e) == doctest::Approx(one_step.at((int)e)).epsilon(1e-12));
    }
}

TEST_CASE("curvature on the flat lattice and a cone") {
    Mesh m(hex_patch(2));
    ConformalFactor u = zeros(m.tri);
    for (int i = 0; i < m.tri.vertex_count(); ++i) {
        if (!m.tri.is_interior_vertex(i)) continue;
        CHECK(std::abs(curvature_at(m.len, u, i)) < 1e-13);
        // Constant factor leaves curvature unchanged.
        ConformalFactor c(u.size(), -1.3);
        CHECK(std::abs(curvature_at(m.len, c, i)) < 1e-12);
    }

    // Valence-5 equilateral fan closed up: cone angle 5 pi/3.
    std::vector<Face> faces;
    for (int k = 0; k < 5; ++k) faces.push_back({0, k + 1, (k + 1) % 5 + 1});
    Triangulation fan(6, faces);
    PLMetric l(fan, std::vector<double>(fan.edges().size(), 1.0));
    CHECK(curvature_at(l, zeros(fan), 0) == doctest::Approx(pi / 3).epsilon(1e-13));

    int rim = -1;
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (!m.tri.is_interior_vertex(i)) rim = i;
    CHECK_THROWS_AS(curvature_at(m.len, u, rim), Error);
}

TEST_CASE("cotan weights closed forms") {
    Mesh m(hex_patch(2));
    CotanWeights w = cotan_weights(m.len, zeros(m.tri));
    for (size_t e = 0; e < w.eta.size(); ++e) {
        if (w.boundary_half[e]) continue;
        CHECK(w.eta[e] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
    }

    // Unit square cut by both diagonals: the corner-to-center edges see two
    // opposite pi/4 angles, eta = 1.
    PatchData sq;
    sq.pos = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    sq.faces = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    Mesh ms(std::move(sq));
    CotanWeights ws = cotan_weights(ms.len, zeros(ms.tri));
    for (VertexId i = 0; i < 4; ++i) {
        int e = ms.tri.edge_index(i, 4);
        CHECK(!ws.boundary_half[e]);
        CHECK(ws.eta[e] == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("acute metrics give positive weights") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Mesh m(generate_perturbed_acute(2, 0.12, 0.05, seed));
        CotanWeights w = cotan_weights(m.len, zeros(m.tri));
        for (double eta : w.eta) CHECK(eta > 0);
    }
}

TEST_CASE("curvature differential structure") {
    Mesh m(hex_patch(2));
    ConformalFactor u = zeros(m.tri);
    int c = interior_vertex(m.tri);
    CurvatureDifferentialRow row = curvature_differential(m.len, u, c);
    CHECK(row.diagonal == doctest::Approx(6.0 / std::sqrt(3.0)).epsilon(1e-13));
    double sum = row.diagonal;
    for (auto& [j, coeff] : row.neighbor_coeff) sum += coeff;
    CHECK(std::abs(sum) < 1e-12);  // constants are null directions

    // Symmetry: dK_i/du_j == dK_j/du_i == -eta_ij.
    std::mt19937_64 rng(5);
    ConformalFactor ur = random_factor(m.tri, 0.1, rng);
    for (int i = 0; i < m.tri.vertex_count(); ++i) {
        if (!m.tri.is_interior_vertex(i)) continue;
        CurvatureDifferentialRow ri = curvature_differential(m.len, ur, i);
        for (auto& [j, cij] : ri.neighbor_coeff) {
            if (!m.tri.is_interior_vertex(j)) continue;
            CurvatureDifferentialRow rj = curvature_differential(m.len, ur, j);
            for (auto& [k, cji] : rj.neighbor_coeff)
                if (k == i) CHECK(cij == doctest::Approx(cji).epsilon(1e-12));
        }
    }
}

TEST_CASE("curvature differential matches central differences") {
    std::mt19937_64 rng(17);
    const double h = 1e-5;
    int instances = 0;
    for (std::uint64_t seed = 1; instances < 60; ++seed) {
        Mesh m(generate_perturbed_acute(2, 0.1, 0.05, seed));
        ConformalFactor u = random_factor(m.tri, 0.05, rng);
        ConformalFactor dir = random_factor(m.tri, 1.0, rng);
        for (int i = 0; i < m.tri.vertex_count(); ++i) {
            if (!m.tri.is_interior_vertex(i)) continue;
            CurvatureDifferentialRow row = curvature_differential(m.len, u, i);
            double predicted = row.diagonal * dir[i];
            for (auto& [j, coeff] : row.neighbor_coeff) predicted += coeff * dir[j];
            ConformalFactor up = u, um = u;
            for (size_t k = 0; k < u.size(); ++k) {
                up[k] += h * dir[k];
                um[k] -= h * dir[k];
            }
            double fd = (curvature_at(m.len, up, i) - curvature_at(m.len, um, i)) / (2 * h);
            CHECK(std::abs(fd - predicted) < 1e-7);
            ++instances;
        }
    }
}

TEST_CASE("flow with constant boundary velocity is linear in time") {
    Mesh m(hex_patch(2));
    VertexSet region = VertexSet::full(m.tri);
    std::vector<double> vel(m.tri.vertex_count(), 1.0);
    FlowResult r = flow_integrate(m.len, region, vel, 0.05, 1e-3);
    CHECK(r.status == FlowStatus::completed);
    const FlowSample& last = r.trajectory.back();
    CHECK(last.t == doctest::Approx(0.05).epsilon(1e-12));
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        CHECK(last.u[i] == doctest::Approx(0.05).epsilon(1e-9));

    std::vector<double> zero_vel(m.tri.vertex_count(), 0.0);
    FlowResult rz = flow_integrate(m.len, region, zero_vel, 0.05, 1e-3);
    for (int i = 0; i < m.tri.vertex_count(); ++i) CHECK(std::abs(rz.trajectory.back().u[i]) < 1e-14);
}

TEST_CASE("flow preserves curvature and the Lipschitz bound") {
    Mesh m(hex_patch(3));
    VertexSet region = VertexSet::full(m.tri);
    std::vector<double> vel(m.tri.vertex_count(), 0.0);
    int sign = 1;
    for (int i = 0; i < m.tri.vertex_count(); ++i) {
        if (m.tri.is_interior_vertex(i)) continue;
        vel[i] = 0.7 * sign;
        sign = -sign;
    }
    FlowResult r = flow_integrate(m.len, region, vel, 0.1, 1e-3);
    CHECK(r.status == FlowStatus::completed);
    for (const FlowSample& s : r.trajectory) {
        CHECK(s.max_abs_curvature < 1e-6);
        double sup = 0;
        for (int i = 0; i < m.tri.vertex_count(); ++i) sup = std::max(sup, std::abs(s.u[i]));
        CHECK(sup <= 0.7 * s.t + 1e-9);
    }
}

TEST_CASE("zero-curvature solve") {
    Mesh m(hex_patch(2));
    VertexSet region = VertexSet::full(m.tri);

    // Constant boundary data reproduces the constant.
    std::vector<double> bc(m.tri.vertex_count(), 0.4);
    ConformalFactor uc = solve_zero_curvature(m.len, region, bc);
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        CHECK(uc[i] == doctest::Approx(0.4).epsilon(1e-10));

    // Random small boundary data: flat interior, max principle vs second solve.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    std::vector<double> g1(m.tri.vertex_count(), 0.0), g2(m.tri.vertex_count(), 0.0);
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (!m.tri.is_interior_vertex(i)) {
            g1[i] = U(rng);
            g2[i] = U(rng);
        }
    ConformalFactor u1 = solve_zero_curvature(m.len, region, g1);
    ConformalFactor u2 = solve_zero_curvature(m.len, region, g2);
    double boundary_gap = 0, interior_gap = 0;
    for (int i = 0; i < m.tri.vertex_count(); ++i) {
        if (!m.tri.is_interior_vertex(i)) continue;
        CHECK(std::abs(curvature_at(m.len, u1, i)) < 1e-10);
        interior_gap = std::max(interior_gap, std::abs(u1[i] - u2[i]));
    }
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (!m.tri.is_interior_vertex(i))
            boundary_gap = std::max(boundary_gap, std::abs(g1[i] - g2[i]));
    CHECK(interior_gap <= boundary_gap + 1e-9);
}

TEST_CASE("flow endpoint agrees with the direct solve") {
    Mesh m(hex_patch(2));
    VertexSet region = VertexSet::full(m.tri);
    double t_end = 0.04;
    std::vector<double> vel(m.tri.vertex_count(), 0.0);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (!m.tri.is_interior_vertex(i)) vel[i] = U(rng);
    FlowResult r = flow_integrate(m.len, region, vel, t_end, 1e-3);
    REQUIRE(r.status == FlowStatus::completed);
    std::vector<double> bc(m.tri.vertex_count(), 0.0);
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        if (!m.tri.is_interior_vertex(i)) bc[i] = vel[i] * t_end;
    ConformalFactor u_direct = solve_zero_curvature(m.len, region, bc);
    for (int i = 0; i < m.tri.vertex_count(); ++i)
        CHECK(std::abs(r.trajectory.back().u[i] - u_direct[i]) < 1e-6);
}

TEST_CASE("local max principle") {
    Mesh m(hex_patch(1));
    int c = interior_vertex(m.tri);
    ConformalFactor u = zeros(m.tri);

    ConformalFactor shifted = u;
    for (double& x : shifted) x += 0.2;
    CHECK(check_local_max_principle(m.len, u, shifted, c) == MaxPrincipleStatus::holds);
    CHECK(check_local_max_principle(m.len, u, u, c) == MaxPrincipleStatus::holds);

    // Generated pairs: solve K=0 on the ring for random rim data; the
    // principle is checked, never assumed.
    VertexSet region = VertexSet::full(m.tri);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-0.08, 0.08);
    for (int it = 0; it < 100; ++it) {
        std::vector<double> g1(m.tri.vertex_count(), 0.0), g2(m.tri.vertex_count(), 0.0);
        for (int i = 0; i < m.tri.vertex_count(); ++i)
            if (i != c) {
                g1[i] = U(rng);
                g2[i] = U(rng);
            }
        ConformalFactor u1 = solve_zero_curvature(m.len, region, g1);
        ConformalFactor u2 = solve_zero_curvature(m.len, region, g2);
        CHECK(check_local_max_principle(m.len, u1, u2, c) == MaxPrincipleStatus::holds);
    }

    // Curvature precondition violated -> inconclusive.
    ConformalFactor bump = u;
    bump[c] = 0.5;
    CHECK(check_local_max_principle(m.len, bump, u, c) == MaxPrincipleStatus::inconclusive);
}

TEST_CASE("acuteness box is positive and sharp-ish on the lattice") {
    Mesh m(hex_patch(2));
    double box = acuteness_box(m.len, 0.1);
    CHECK(box > 0);
    // Any |u| <= box perturbation keeps the mesh acute with margin eps/2.
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> U(-box, box);
    for (int it = 0; it < 50; ++it) {
        ConformalFactor u(m.tri.vertex_count());
        for (double& x : u) x = U(rng);
        PLMetric lu = conformal_change(m.len, u);
        REQUIRE(lu.is_metric());
        CHECK(classify(lu, 0.05 - 1e-9).uniformly_acute);
    }
}
