#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dcl/generate.hpp"
#include "dcl/io.hpp"

using namespace dcl;

TEST_CASE("mesh round trip is bit-identical") {
    PatchData d = generate_perturbed_acute(2, 0.1, 0.05, 12);
    std::ostringstream out1;
    write_mesh(out1, d);
    std::istringstream in1(out1.str());
    PatchData back = read_mesh(in1);
    REQUIRE(back.pos.size() == d.pos.size());
    REQUIRE(back.faces.size() == d.faces.size());
    for (size_t i = 0; i < d.pos.size(); ++i) CHECK(back.pos[i] == d.pos[i]);
    std::ostringstream out2;
    write_mesh(out2, back);
    CHECK(out1.str() == out2.str());
}

TEST_CASE("mesh parser accepts comments and rejects bad input") {
    std::istringstream ok("# header\n\nv 0 0\nv 1 0  # trailing\nv 0 1\nf 0 1 2\n");
    PatchData d = read_mesh(ok);
    CHECK(d.pos.size() == 3);
    CHECK(d.faces.size() == 1);

    auto fails = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_mesh(in), ParseError);
    };
    fails("v 0\n");                       // missing coordinate
    fails("v 0 0\nv 1 0\nf 0 1 2\n");     // face index out of range
    fails("v nan 0\n");                   // non-finite
    fails("v 0 0\nx 1 2\n");              // unknown record
    fails("v 0 0 0\n");                   // extra field
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream in("v 0 0\nv 1 0\nf 0 1 5\n");
    try {
        read_mesh(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("factor round trip") {
    ConformalFactor u = {0.0, -1.25, 3.14159265358979312, 1e-17};
    std::ostringstream out;
    write_factor(out, u);
    std::istringstream in(out.str());
    ConformalFactor back = read_factor(in);
    REQUIRE(back.size() == u.size());
    for (size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);
}

TEST_CASE("network format") {
    std::istringstream in("# net\ne 0 1 2.5\ne 1 2 0.5\n");
    Network net = read_network(in);
    CHECK(net.vertex_count() == 3);
    REQUIRE(net.edges().size() == 2);
    CHECK(net.edges()[0].conductance == 2.5);
    CHECK(net.resistance(1) == doctest::Approx(2.0));

    std::ostringstream out;
    write_network(out, net);
    std::istringstream in2(out.str());
    Network back = read_network(in2);
    CHECK(back.edges().size() == 2);
    CHECK(back.edges()[1].conductance == net.edges()[1].conductance);

    std::istringstream neg("e 0 1 -1\n");
    CHECK_THROWS_AS(read_network(neg), ParseError);
    std::istringstream loop("e 2 2 1\n");
    CHECK_THROWS_AS(read_network(loop), ParseError);
}

TEST_CASE("EL problem file") {
    std::istringstream netin("e 0 1 1\ne 1 2 1\ne 2 3 1\n");
    Network net = read_network(netin);
    std::istringstream pin(R"({"v1": [0], "v2": [3]})");
    ELProblem p = read_problem(pin, net);
    CHECK(p.v1[0]);
    CHECK(p.v2[3]);
    CHECK(!p.v1[1]);

    std::istringstream overlap(R"({"v1": [0, 2], "v2": [2]})");
    CHECK_THROWS_AS(read_problem(overlap, net), ParseError);
    std::istringstream range(R"({"v1": [0], "v2": [9]})");
    CHECK_THROWS_AS(read_problem(range, net), ParseError);
    std::istringstream junk("not json");
    CHECK_THROWS_AS(read_problem(junk, net), ParseError);
}

TEST_CASE("trajectory line is one JSON object") {
    FlowSample s;
    s.t = 0.25;
    s.u = {0.1, -0.2};
    s.max_abs_curvature = 3e-9;
    s.min_angle_margin = 0.5;
    std::string line = trajectory_line(s);
    CHECK(line.find('\n') == std::string::npos);
    nlohmann::json js = nlohmann::json::parse(line);
    CHECK(js["t"].get<double>() == doctest::Approx(0.25));
    CHECK(js["u"].size() == 2);
    CHECK(js["max_abs_K"].get<double>() == doctest::Approx(3e-9));
    CHECK(js["min_angle_margin"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("quotient lattice invariants") {
    QuotientLattice q = hex_lattice_quotient(8.0, 1.0);
    CHECK(q.net.vertex_count() > 0);
    // Orbit sizes are 1 (origin), 6, or 12, and sum to the full count.
    double total = 0;
    for (double o : q.orbit_size) {
        CHECK((o == 1 || o == 6 || o == 12));
        total += o;
    }
    CHECK((long long)total == q.full_vertex_count);
    // Full lattice count inside radius 8: direct enumeration oracle.
    long long direct = 0;
    for (int m = -10; m <= 10; ++m)
        for (int n = -10; n <= 10; ++n)
            if (m * m + m * n + n * n <= 64) ++direct;
    CHECK(q.full_vertex_count == direct);
    // Edge multiplicities and conductances agree.
    for (size_t e = 0; e < q.net.edges().size(); ++e) {
        CHECK(q.net.edges()[e].conductance ==
              doctest::Approx(q.edge_multiplicity[e]).epsilon(1e-15));
        CHECK(q.edge_length[e] == 1.0);
    }
    // Total full-lattice edge count: multiplicities plus intra-orbit edges
    // must reproduce the direct count.
    double edge_total = 0;
    for (double m : q.edge_multiplicity) edge_total += m;
    for (double m : q.self_edge_mult) edge_total += m;
    long long direct_edges = 0;
    const int dirs[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    for (int m = -10; m <= 10; ++m)
        for (int n = -10; n <= 10; ++n) {
            if (m * m + m * n + n * n > 64) continue;
            for (auto& d2 : dirs) {
                int a = m + d2[0], b = n + d2[1];
                if (a * a + a * b + b * b <= 64) ++direct_edges;
            }
        }
    direct_edges /= 2;  // each undirected edge seen twice
    CHECK((long long)std::llround(edge_total) == direct_edges);
}

TEST_CASE("quotient solves match the full lattice") {
    // Radially symmetric Dirichlet problem solved on the quotient and on the
    // full lattice must produce identical effective resistances.
    double R = 6.0;
    QuotientLattice q = hex_lattice_quotient(R, 1.0);
    // Full lattice network.
    std::map<std::pair<int, int>, int> idx;
    std::vector<Complex> pos;
    for (int m = -8; m <= 8; ++m)
        for (int n = -8; n <= 8; ++n)
            if (m * m + m * n + n * n <= R * R) {
                idx[{m, n}] = (int)pos.size();
                pos.push_back({m + n / 2.0, n * std::sqrt(3.0) / 2});
            }
    std::vector<NetEdge> edges;
    const int dirs[3][2] = {{1, 0}, {0, 1}, {-1, 1}};
    for (auto& [mn, i] : idx)
        for (auto& d2 : dirs) {
            auto it = idx.find({mn.first + d2[0], mn.second + d2[1]});
            if (it != idx.end()) edges.push_back({i, it->second, 1.0});
        }
    Network full((int)pos.size(), edges);

    auto ring_problem = [](const Network& net, const std::vector<Complex>& p, double r1,
                           double r2) {
        ELProblem pr{&net, std::vector<bool>(net.vertex_count(), false),
                     std::vector<bool>(net.vertex_count(), false)};
        for (int i = 0; i < net.vertex_count(); ++i) {
            double r = std::abs(p[i]);
            if (r < r1) pr.v1[i] = true;
            if (r > r2) pr.v2[i] = true;
        }
        return pr;
    };
    ELResult a = extremal_length(ring_problem(full, pos, 1.5, 4.5));
    ELResult b = extremal_length(ring_problem(q.net, q.pos, 1.5, 4.5));
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
}
