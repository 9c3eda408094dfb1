#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dcl/modulus.hpp"

using namespace dcl;
using std::numbers::pi;

TEST_CASE("round annulus modulus") {
    CHECK(modulus_round({{0, 0}, 1.0, std::exp(2 * pi)}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(modulus_round({{3, -1}, 2.0, 4.0}) ==
          doctest::Approx(std::log(2.0) / (2 * pi)).epsilon(1e-15));
    // Scale invariance.
    CHECK(modulus_round({{0, 0}, 0.37, 0.74}) ==
          doctest::Approx(modulus_round({{0, 0}, 5.0, 10.0})).epsilon(1e-13));
}

TEST_CASE("dilatation of PL maps") {
    Triangulation t(4, {{0, 1, 2}, {0, 2, 3}});
    Embedding src(t, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});

    // Similarity: rotate + scale, dilatation exactly 1.
    Complex rot = std::polar(2.3, 0.7);
    std::vector<Complex> sim;
    for (Complex z : src.position) sim.push_back(rot * z + Complex{0.2, -0.4});
    Embedding dsim(t, sim);
    DilatationResult r1 = dilatation({&t, &src, &dsim});
    CHECK(std::abs(r1.max_dilatation - 1.0) < 1e-12);

    // Stretch x by 2: dilatation 2 on every face.
    std::vector<Complex> st;
    for (Complex z : src.position) st.push_back({2 * z.real(), z.imag()});
    Embedding dst(t, st);
    DilatationResult r2 = dilatation({&t, &src, &dst});
    CHECK(r2.max_dilatation == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("separating round annulus") {
    std::vector<Complex> inner = {{0.1, 0}, {0, -0.2}, {0.15, 0.1}};
    std::vector<Complex> outer = {{1.0, 0}, {0, 1.3}, {-0.9, -0.9}};
    auto a = contains_round_annulus({0, 0}, inner, outer);
    REQUIRE(a.has_value());
    CHECK(a->r == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(a->r_outer == doctest::Approx(1.0).epsilon(1e-13));
    // Interleaved radii: no separating annulus.
    CHECK(!contains_round_annulus({0, 0}, outer, inner).has_value());
}

TEST_CASE("oscillation bound formula") {
    double eps = pi / 6, C = 3.0;
    OscillationBoundInputs in{eps, 0.0, C};
    double M = 2 * std::log(1.0 / std::sin(eps)) + 3;
    CHECK(oscillation_bound(in) ==
          doctest::Approx(2 * M + 2 * std::log(C) - std::log(2.0)).epsilon(1e-14));
    // Curvature enters through C' = exp(200 pi K).
    OscillationBoundInputs in2{eps, 1e-3, C};
    CHECK(oscillation_bound(in2) - oscillation_bound(in) ==
          doctest::Approx(200 * pi * 1e-3).epsilon(1e-10));
    // Monotonicity: smaller margin, larger bound.
    OscillationBoundInputs in3{eps / 2, 0.0, C};
    CHECK(oscillation_bound(in3) > oscillation_bound(in));
}

TEST_CASE("annulus mesh construction and refinement") {
    AnnulusMesh m = make_annulus(1.0, 2.0, 16, 2);
    Triangulation t((int)m.pos.size(), m.faces);
    Embedding emb(t, m.pos);
    emb.validate();
    for (VertexId i : m.inner_loop) CHECK(std::abs(std::abs(m.pos[i]) - 1.0) < 1e-12);
    for (VertexId i : m.outer_loop) CHECK(std::abs(std::abs(m.pos[i]) - 2.0) < 1e-12);
    PLMetric len = induced_metric(emb);
    CHECK(classify(len, 1e-3).uniformly_acute);

    AnnulusMesh s = subdivide_midpoint(m);
    CHECK(s.faces.size() == 4 * m.faces.size());
    CHECK(s.inner_loop.size() == 2 * m.inner_loop.size());
    Triangulation ts((int)s.pos.size(), s.faces);
    Embedding embs(ts, s.pos);
    PLMetric lens = induced_metric(embs);
    // Midpoint subdivision preserves the angle set exactly.
    ClassifyResult c0 = classify(len, 1e-3), c1 = classify(lens, 1e-3);
    CHECK(c1.min_angle == doctest::Approx(c0.min_angle).epsilon(1e-12));
    CHECK(c1.max_angle == doctest::Approx(c0.max_angle).epsilon(1e-12));
}

TEST_CASE("discrete modulus estimate converges") {
    ModulusEstimate e = modulus_estimate(1.0, 2.0, 3);
    CHECK(e.exact == doctest::Approx(std::log(2.0) / (2 * pi)).epsilon(1e-15));
    CHECK(std::abs(e.value - e.exact) / e.exact < 0.01);
    // Refinement improves the estimate.
    ModulusEstimate coarse = modulus_estimate(1.0, 2.0, 1);
    CHECK(std::abs(e.value - e.exact) <= std::abs(coarse.value - coarse.exact) + 1e-12);
}
