#pragma once

#include "helifem/mesh.hpp"
#include "helifem/section.hpp"

// Built-in polygon mesher: incremental constrained Delaunay triangulation of
// the symmetry cell, conforming edge recovery by midpoint splitting, and
// circumcenter refinement (split encroached constraint segments instead of
// inserting centers near them). Quality target: circumradius < target_h and
// minimum angle > 20 degrees. Region tags are assigned by point-in-polygon
// tests of triangle centroids.

namespace helifem {

struct MesherError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MesherOptions {
    double target_h = 1e-3;       // circumradius bound [m]
    double min_angle_deg = 20.0;
    int max_split_depth = 12;     // constraint recovery recursion limit
    std::size_t max_vertices = 4'000'000;
};

Mesh2D generate_mesh(const SymmetryCell& cell, const MesherOptions& opt);

inline Mesh2D generate_mesh(const SymmetryCell& cell, double target_h) {
    MesherOptions opt;
    opt.target_h = target_h;
    return generate_mesh(cell, opt);
}

}  // namespace helifem
