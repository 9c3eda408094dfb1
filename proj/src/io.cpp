#include "dcl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace dcl {

namespace {

// Strip comments/whitespace; returns false for lines with no content.
bool content_line(const std::string& raw, std::string& out) {
    std::string s = raw.substr(0, raw.find('#'));
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return false;
    out = s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
    return true;
}

double parse_real(const std::string& tok) {
    double v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError("bad real: '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError("non-finite real: '" + tok + "'");
    return v;
}

long parse_index(const std::string& tok) {
    long v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || v < 0)
        throw ParseError("bad index: '" + tok + "'");
    return v;
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

std::string fmt17(double v) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename F>
void for_each_content_line(std::istream& in, F&& f) {
    std::string raw, line;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!content_line(raw, line)) continue;
        try {
            f(line);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

}  // namespace

PatchData read_mesh(std::istream& in) {
    PatchData mesh;
    for_each_content_line(in, [&](const std::string& line) {
        auto tok = tokens(line);
        if (tok[0] == "v" && tok.size() == 3) {
            mesh.pos.emplace_back(parse_real(tok[1]), parse_real(tok[2]));
        } else if (tok[0] == "f" && tok.size() == 4) {
            Face f{(VertexId)parse_index(tok[1]), (VertexId)parse_index(tok[2]),
                   (VertexId)parse_index(tok[3])};
            for (VertexId v : f.v)
                if (v >= (VertexId)mesh.pos.size())
                    throw ParseError("face index " + std::to_string(v) + " out of range");
            mesh.faces.push_back(f);
        } else {
            throw ParseError("unrecognized record '" + line + "'");
        }
    });
    if (mesh.pos.empty()) throw ParseError("mesh has no vertices");
    return mesh;
}

void write_mesh(std::ostream& out, const PatchData& mesh) {
    for (Complex z : mesh.pos)
        out << "v " << fmt17(z.real()) << ' ' << fmt17(z.imag()) << '\n';
    for (const Face& f : mesh.faces)
        out << "f " << f.v[0] << ' ' << f.v[1] << ' ' << f.v[2] << '\n';
}

ConformalFactor read_factor(std::istream& in) {
    ConformalFactor u;
    for_each_content_line(in, [&](const std::string& line) {
        auto tok = tokens(line);
        if (tok.size() != 1) throw ParseError("expected one real per line");
        u.push_back(parse_real(tok[0]));
    });
    if (u.empty()) throw ParseError("empty factor file");
    return u;
}

void write_factor(std::ostream& out, const ConformalFactor& u) {
    for (double v : u) out << fmt17(v) << '\n';
}

Network read_network(std::istream& in) {
    std::vector<NetEdge> edges;
    int n = 0;
    for_each_content_line(in, [&](const std::string& line) {
        auto tok = tokens(line);
        if (tok[0] != "e" || tok.size() != 4)
            throw ParseError("unrecognized record '" + line + "'");
        NetEdge e{(int)parse_index(tok[1]), (int)parse_index(tok[2]),
                  parse_real(tok[3])};
        if (!(e.conductance > 0)) throw ParseError("conductance must be positive");
        n = std::max({n, e.a + 1, e.b + 1});
        edges.push_back(e);
    });
    if (edges.empty()) throw ParseError("empty network file");
    try {
        return Network(n, std::move(edges));
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

void write_network(std::ostream& out, const Network& net) {
    for (const NetEdge& e : net.edges())
        out << "e " << e.a << ' ' << e.b << ' ' << fmt17(e.conductance) << '\n';
}

ELProblem read_problem(std::istream& in, const Network& net) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("problem JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("v1") || !j.contains("v2"))
        throw ParseError("problem JSON must be {\"v1\": [...], \"v2\": [...]}");
    ELProblem p;
    p.net = &net;
    p.v1.assign(net.vertex_count(), false);
    p.v2.assign(net.vertex_count(), false);
    auto fill = [&](const nlohmann::json& arr, std::vector<bool>& s, const char* name) {
        if (!arr.is_array()) throw ParseError(std::string(name) + " must be an array");
        for (const auto& x : arr) {
            if (!x.is_number_integer() || x.get<long>() < 0 ||
                x.get<long>() >= net.vertex_count())
                throw ParseError(std::string(name) + " index out of range");
            s[x.get<long>()] = true;
        }
    };
    fill(j["v1"], p.v1, "v1");
    fill(j["v2"], p.v2, "v2");
    for (int i = 0; i < net.vertex_count(); ++i)
        if (p.v1[i] && p.v2[i]) throw ParseError("v1 and v2 must be disjoint");
    return p;
}

std::string trajectory_line(const FlowSample& s) {
    nlohmann::json j{{"t", s.t},
                     {"u", s.u},
                     {"max_abs_K", s.max_abs_curvature},
                     {"min_angle_margin", s.min_angle_margin}};
    return j.dump();
}

PatchData read_mesh_file(const std::string& path) {
    auto in = open_in(path);
    return read_mesh(in);
}
void write_mesh_file(const std::string& path, const PatchData& mesh) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    write_mesh(out, mesh);
}
ConformalFactor read_factor_file(const std::string& path) {
    auto in = open_in(path);
    return read_factor(in);
}
void write_factor_file(const std::string& path, const ConformalFactor& u) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    write_factor(out, u);
}
Network read_network_file(const std::string& path) {
    auto in = open_in(path);
    return read_network(in);
}
ELProblem read_problem_file(const std::string& path, const Network& net) {
    auto in = open_in(path);
    return read_problem(in, net);
}

}  // namespace dcl
