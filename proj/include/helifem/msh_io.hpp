#pragma once

#include <iosfwd>
#include <string>

#include "helifem/mesh.hpp"

// ASCII Gmsh MSH 2.2 reader/writer. Physical names map region tags:
// "conductor_<i>" (i >= 0), "insulator", and "outer_boundary" for the
// 2-node line elements on the shield.

namespace helifem {

struct MshParseError : std::runtime_error {
    int line;
    MshParseError(int line_, const std::string& what)
        : std::runtime_error("msh:" + std::to_string(line_) + ": " + what), line(line_) {}
};

Mesh2D parse_msh(std::istream& in);
Mesh2D parse_msh_file(const std::string& path);

void write_msh(const Mesh2D& m, std::ostream& out);
void write_msh_file(const Mesh2D& m, const std::string& path);

}  // namespace helifem
