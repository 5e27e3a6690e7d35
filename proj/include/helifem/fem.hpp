#pragma once

#include <complex>
#include <vector>

#include "helifem/geometry.hpp"
#include "helifem/mesh.hpp"
#include "helifem/sparse.hpp"
#include "helifem/topology.hpp"

// Discrete complex-symmetric system for the dimension-reduced H-phi weak
// form. In-plane field: Whitney edge functions on conductor-interior edges;
// in the insulator gradients of a nodal potential plus the per-conductor
// cohomology generators carrying the prescribed currents. Axial component:
// nodal on conductor-interior nodes, zero in the insulator (PEC gauge).
//
// Every mesh edge gets a linear expression for its circulation in terms of
// free dofs plus a complex constant; interface edges couple the conductor
// edge space to the insulator potential through that expression.

namespace helifem {

struct FemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Excitation {
    std::vector<cplx> currents;  // amplitude phasors, one per conductor [A]
    double omega = 0.0;          // angular frequency [rad/s]

    void validate(int conductor_count) const;
};

struct DofTerm {
    int dof;
    double coeff;
};

struct DofMap {
    int n_free = 0;
    int n_fixed = 0;
    int n_edge_dofs = 0, n_phi_dofs = 0, n_hw_dofs = 0;
    int gauge_node = -1;

    std::vector<int> edge_dof;  // per edge: free in-plane circulation dof or -1
    std::vector<int> phi_dof;   // per node: potential dof or -1
    std::vector<int> hw_dof;    // per node: axial-field dof or -1

    // circulation of H along edge e (min -> max node) = sum terms + const
    std::vector<std::vector<DofTerm>> edge_terms;
    std::vector<cplx> edge_const;
};

DofMap build_dof_map(const Mesh2D& m, const CohomologyBasis& basis, const Excitation& exc);

// Frequency-independent blocks: A(omega) = j*omega*M + K acting on free dofs,
// rhs b(omega) = -(j*omega*bM + bK) from the fixed (current/gauge) part.
struct AssembledOperator {
    SparseComplex M;  // mass block (real entries)
    SparseComplex K;  // curl-curl block, conductor triangles only (real entries)
    std::vector<cplx> bM, bK;

    SparseComplex system_at(double omega) const;
    std::vector<cplx> rhs_at(double omega) const;
};

struct AssembledSystem {
    SparseComplex A;
    std::vector<cplx> b;
};

AssembledOperator assemble(const Mesh2D& m, const HelixParams& h, const MaterialSpec& mat,
                           const DofMap& dofmap, const Excitation& exc);

inline AssembledSystem assemble_system(const AssembledOperator& op, double omega) {
    return {op.system_at(omega), op.rhs_at(omega)};
}

// Element-local curl of the reduced 3-component field representation,
// constant per triangle: (dHw/dv, -dHw/du, dHv/du - dHu/dv).
// Inputs: 3 edge circulations (local edges opposite vertices, global edge
// orientation) and 3 nodal Hw values.
Vec3c element_curl(const Mesh2D& m, int tri, const std::array<cplx, 3>& edge_circ,
                   const std::array<cplx, 3>& hw_nodes);

// Circulations of all three edges of a triangle under a given free-dof vector.
std::array<cplx, 3> element_edge_circulations(const Mesh2D& m, const DofMap& dm, int tri,
                                              const std::vector<cplx>& x);
std::array<cplx, 3> element_hw_values(const Mesh2D& m, const DofMap& dm, int tri,
                                      const std::vector<cplx>& x);

// 3-point degree-2 Gauss rule on the triangle (barycentric coords, weights
// summing to 1).
struct TriQuadrature {
    static constexpr int n = 3;
    static const std::array<std::array<double, 3>, 3> bary;
    static const std::array<double, 3> weights;
};

}  // namespace helifem
