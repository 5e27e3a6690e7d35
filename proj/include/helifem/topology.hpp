#pragma once

#include <map>
#include <vector>

#include "helifem/mesh.hpp"

// Homology loops of conductor boundaries and a dual cohomology basis of the
// insulator region: one thick cut per conductor, supported on a band of edges
// from that conductor's boundary to the outer boundary. After alignment the
// pairing <loop_i, cut_j> is exactly the Kronecker delta (integer arithmetic).

namespace helifem {

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HomologyLoop {
    int conductor = -1;
    std::vector<int> nodes;      // CCW cycle, nodes[k] -> nodes[k+1]
    std::vector<int> edge_ids;   // edge_ids[k] joins nodes[k], nodes[k+1]
    std::vector<int> edge_dir;   // +1 when traversal matches edge orientation (a->b)
};

struct Cochain1 {
    std::map<int, int> coeff;    // edge id -> signed integer coefficient

    int operator()(int edge) const {
        auto it = coeff.find(edge);
        return it == coeff.end() ? 0 : it->second;
    }
};

struct CohomologyBasis {
    std::vector<Cochain1> generators;           // one per conductor
    std::vector<std::vector<long long>> pairing;  // loops x generators, identity after alignment
};

// One CCW loop per conductor.
std::vector<HomologyLoop> boundary_loops(const Mesh2D& m);

// CCW outer boundary loop (the PEC shield).
HomologyLoop outer_boundary_loop(const Mesh2D& m);

// Cut-path cochains: for each conductor, a shortest dual path of insulator
// triangles from that conductor to the outer boundary; +-1 on every primal
// edge crossed (including one interface edge and one outer-boundary edge).
std::vector<Cochain1> raw_cohomology(const Mesh2D& m);

// Circulation of a cochain along a loop.
long long circulation(const Cochain1& c, const HomologyLoop& loop);

// Signed sum of a cochain over the edges of an insulator triangle; zero for a
// closed cochain.
long long coboundary_on_triangle(const Mesh2D& m, const Cochain1& c, int tri);

// Integer change of basis making the pairing with boundary_loops the identity.
// Requires the raw pairing matrix to be unimodular.
CohomologyBasis align_basis(const Mesh2D& m, const std::vector<HomologyLoop>& loops,
                            const std::vector<Cochain1>& raw);

// Convenience: loops + raw + align.
CohomologyBasis build_cohomology_basis(const Mesh2D& m);

}  // namespace helifem
