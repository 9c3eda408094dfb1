#pragma once

#include <iosfwd>
#include <string>

#include "dcl/conformal.hpp"
#include "dcl/generate.hpp"
#include "dcl/network.hpp"

namespace dcl {

// Parse failures throw ParseError (CLI exit code 2); everything else in the
// library throws plain Error.
struct ParseError : Error {
    using Error::Error;
};

// Mesh text format: `v <x> <y>` lines (implicit 0-based index) and
// `f <i> <j> <k>` lines (counterclockwise); `#` comments and blank lines
// ignored.  Reals are written with 17 significant digits so canonical files
// round-trip bit-identically.
PatchData read_mesh(std::istream& in);
PatchData read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const PatchData& mesh);
void write_mesh_file(const std::string& path, const PatchData& mesh);

// Factor file: one real per line, vertex order matching the mesh.
ConformalFactor read_factor(std::istream& in);
ConformalFactor read_factor_file(const std::string& path);
void write_factor(std::ostream& out, const ConformalFactor& u);
void write_factor_file(const std::string& path, const ConformalFactor& u);

// Network file: `e <i> <j> <conductance>` lines, same comment rules.
Network read_network(std::istream& in);
Network read_network_file(const std::string& path);
void write_network(std::ostream& out, const Network& net);

// EL problem file: JSON {"v1": [indices], "v2": [indices]}.
ELProblem read_problem(std::istream& in, const Network& net);
ELProblem read_problem_file(const std::string& path, const Network& net);

// One trajectory sample as a JSON line {t, u, max_abs_K, min_angle_margin}.
std::string trajectory_line(const FlowSample& s);

}  // namespace dcl
