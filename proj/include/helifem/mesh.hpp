#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Triangulated symmetry cell. Region tags: conductor index >= 0 or insulator.
// Edges are derived deterministically (oriented min node -> max node, sorted
// lexicographically). A Mesh2D is immutable after validation and safe to
// share across threads.

namespace helifem {

using Vec2 = Eigen::Vector2d;

inline constexpr int kInsulator = -1;

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Triangle {
    std::array<int, 3> v{};  // CCW node ids
    int region = kInsulator; // conductor id or kInsulator
};

struct MeshEdge {
    int a = -1, b = -1;          // node ids, a < b
    std::array<int, 2> tri{-1, -1};  // adjacent triangles (tri[1] = -1 on boundary)
};

struct MeshStats {
    int node_count = 0;
    int triangle_count = 0;
    int edge_count = 0;
    double min_angle_deg = 0.0;
    double max_aspect_ratio = 0.0;
    std::map<int, int> region_triangles;  // region tag -> count
};

class Mesh2D {
  public:
    std::vector<Vec2> nodes;
    std::vector<Triangle> triangles;
    std::vector<std::array<int, 2>> boundary_lines;  // outer-boundary segments from input

    // Derived connectivity, built by finalize().
    std::vector<MeshEdge> edges;
    std::vector<std::array<int, 3>> tri_edges;   // per triangle: edge ids opposite local vertex
    std::vector<std::array<int, 3>> tri_edge_sign;  // +1 if edge orientation matches CCW traversal

    int conductor_count = 0;  // conductor ids are 0..conductor_count-1

    // Derive edges + adjacency, orient triangles CCW, then validate all
    // structural invariants. Throws MeshError with context on violation.
    void finalize();

    int edge_index(int a, int b) const;  // -1 when absent
    double triangle_area(int t) const;
    Vec2 centroid(int t) const;

    // Boundary edges of conductor region c (adjacent to one conductor-c and
    // one insulator triangle).
    std::vector<int> interface_edges(int conductor) const;
    // Edges with exactly one adjacent triangle (the outer boundary).
    std::vector<int> outer_boundary_edges() const;

    MeshStats stats() const;

  private:
    std::map<std::pair<int, int>, int> edge_lookup_;
    void validate() const;
};

// Chain an unordered closed set of boundary edges into an ordered node loop.
// Throws MeshError if the set is not a single closed loop.
std::vector<int> chain_edge_loop(const Mesh2D& m, const std::vector<int>& edge_ids);

}  // namespace helifem
