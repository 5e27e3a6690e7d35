#include "helifem/fem.hpp"

#include <algorithm>
#include <cmath>

namespace helifem {

const std::array<std::array<double, 3>, 3> TriQuadrature::bary = {{
    {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}},
    {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}},
    {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}},
}};
const std::array<double, 3> TriQuadrature::weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

void Excitation::validate(int conductor_count) const {
    if (static_cast<int>(currents.size()) != conductor_count)
        throw FemError("Excitation: expected " + std::to_string(conductor_count) +
                       " currents, got " + std::to_string(currents.size()));
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw FemError("Excitation: omega must be finite and >= 0");
}

namespace {

bool is_conductor_interior_edge(const Mesh2D& m, int e) {
    const auto& ed = m.edges[e];
    return ed.tri[1] >= 0 && m.triangles[ed.tri[0]].region >= 0 &&
           m.triangles[ed.tri[1]].region >= 0;
}

// Per-triangle P1 geometry: area and barycentric gradients.
struct TriGeom {
    double area;
    std::array<Vec2, 3> grad;
    std::array<Vec2, 3> p;
};

TriGeom tri_geom(const Mesh2D& m, int t) {
    TriGeom g;
    for (int k = 0; k < 3; ++k) g.p[k] = m.nodes[m.triangles[t].v[k]];
    const Vec2 e1 = g.p[1] - g.p[0], e2 = g.p[2] - g.p[0];
    const double det = e1.x() * e2.y() - e1.y() * e2.x();  // = 2*area, > 0 (CCW)
    g.area = 0.5 * det;
    g.grad[0] = Vec2(g.p[1].y() - g.p[2].y(), g.p[2].x() - g.p[1].x()) / det;
    g.grad[1] = Vec2(g.p[2].y() - g.p[0].y(), g.p[0].x() - g.p[2].x()) / det;
    g.grad[2] = Vec2(g.p[0].y() - g.p[1].y(), g.p[1].x() - g.p[0].x()) / det;
    return g;
}

// Local edge k (opposite vertex k) as (a,b) in global min->max orientation,
// expressed through local vertex indices.
void local_edge_orientation(const Mesh2D& m, int t, int k, int& a_loc, int& b_loc) {
    a_loc = (k + 1) % 3;
    b_loc = (k + 2) % 3;
    if (m.tri_edge_sign[t][k] < 0) std::swap(a_loc, b_loc);
}

}  // namespace

DofMap build_dof_map(const Mesh2D& m, const CohomologyBasis& basis, const Excitation& exc) {
    exc.validate(m.conductor_count);
    if (static_cast<int>(basis.generators.size()) != m.conductor_count)
        throw FemError("build_dof_map: generator count does not match conductor count");

    DofMap dm;
    const int nn = static_cast<int>(m.nodes.size());
    const int ne = static_cast<int>(m.edges.size());
    dm.edge_dof.assign(ne, -1);
    dm.phi_dof.assign(nn, -1);
    dm.hw_dof.assign(nn, -1);

    // A node is conductor-interior iff no incident triangle is insulator.
    std::vector<char> touches_insulator(nn, 0), in_mesh(nn, 0);
    for (const auto& t : m.triangles)
        for (int v : t.v) {
            in_mesh[v] = 1;
            if (t.region == kInsulator) touches_insulator[v] = 1;
        }

    // Potential reference: smallest node id on the outer boundary.
    dm.gauge_node = nn;
    for (int e : m.outer_boundary_edges()) dm.gauge_node = std::min(dm.gauge_node, m.edges[e].a);
    if (dm.gauge_node == nn) throw FemError("build_dof_map: mesh has no outer boundary");

    int next = 0;
    for (int e = 0; e < ne; ++e)
        if (is_conductor_interior_edge(m, e)) dm.edge_dof[e] = next++;
    dm.n_edge_dofs = next;
    for (int v = 0; v < nn; ++v)
        if (in_mesh[v] && touches_insulator[v] && v != dm.gauge_node) dm.phi_dof[v] = next++;
    dm.n_phi_dofs = next - dm.n_edge_dofs;
    for (int v = 0; v < nn; ++v)
        if (in_mesh[v] && !touches_insulator[v]) dm.hw_dof[v] = next++;
    dm.n_hw_dofs = next - dm.n_edge_dofs - dm.n_phi_dofs;
    dm.n_free = next;
    int fixed_hw = 0;
    for (int v = 0; v < nn; ++v)
        if (in_mesh[v] && touches_insulator[v]) ++fixed_hw;
    dm.n_fixed = fixed_hw + 1;  // insulator-side axial values plus the gauge node

    dm.edge_terms.assign(ne, {});
    dm.edge_const.assign(ne, cplx{0.0, 0.0});
    for (int e = 0; e < ne; ++e) {
        if (dm.edge_dof[e] >= 0) {
            dm.edge_terms[e].push_back({dm.edge_dof[e], 1.0});
            continue;
        }
        const auto& ed = m.edges[e];
        if (dm.phi_dof[ed.b] >= 0) dm.edge_terms[e].push_back({dm.phi_dof[ed.b], 1.0});
        if (dm.phi_dof[ed.a] >= 0) dm.edge_terms[e].push_back({dm.phi_dof[ed.a], -1.0});
        cplx c{0.0, 0.0};
        for (int i = 0; i < m.conductor_count; ++i) {
            const int g = basis.generators[i](e);
            if (g != 0) c += exc.currents[i] * static_cast<double>(g);
        }
        dm.edge_const[e] = c;
    }
    return dm;
}

AssembledOperator assemble(const Mesh2D& m, const HelixParams& h, const MaterialSpec& mat,
                           const DofMap& dm, const Excitation& exc) {
    h.validate();
    mat.validate();
    exc.validate(m.conductor_count);

    AssembledOperator op;
    op.bM.assign(dm.n_free, cplx{0.0, 0.0});
    op.bK.assign(dm.n_free, cplx{0.0, 0.0});
    std::vector<Triplet> tm, tk;
    tm.reserve(36 * m.triangles.size());

    const int nt = static_cast<int>(m.triangles.size());
    for (int t = 0; t < nt; ++t) {
        const TriGeom g = tri_geom(m, t);
        const bool conductor = m.triangles[t].region >= 0;

        // Curl of each local basis function, constant on the triangle:
        // edges give (0,0,2 grad_a x grad_b), axial nodes give
        // (d lambda/dv, -d lambda/du, 0).
        std::array<Vec3, 6> crl;
        std::array<std::array<int, 2>, 3> eo;  // (a_loc, b_loc) per local edge
        for (int k = 0; k < 3; ++k) {
            local_edge_orientation(m, t, k, eo[k][0], eo[k][1]);
            const Vec2& ga = g.grad[eo[k][0]];
            const Vec2& gb = g.grad[eo[k][1]];
            crl[k] = Vec3(0.0, 0.0, 2.0 * (ga.x() * gb.y() - ga.y() * gb.x()));
            crl[3 + k] = Vec3(g.grad[k].y(), -g.grad[k].x(), 0.0);
        }

        std::array<std::array<double, 6>, 6> Mloc{}, Kloc{};
        Mat3 rho_bar = Mat3::Zero();
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const auto& L = TriQuadrature::bary[q];
            const double wq = TriQuadrature::weights[q] * g.area;
            Vec2 xq = L[0] * g.p[0] + L[1] * g.p[1] + L[2] * g.p[2];
            const Vec3 p_uvw(xq.x(), xq.y(), 0.0);
            const Mat3 mu = permeability_tensor(p_uvw, h, mat);
            if (conductor) rho_bar += wq * resistivity_tensor(p_uvw, h, mat);

            std::array<Vec3, 6> phi;
            for (int k = 0; k < 3; ++k) {
                const int a = eo[k][0], b = eo[k][1];
                const Vec2 w2 = L[a] * g.grad[b] - L[b] * g.grad[a];
                phi[k] = Vec3(w2.x(), w2.y(), 0.0);
                phi[3 + k] = Vec3(0.0, 0.0, L[k]);
            }
            for (int i = 0; i < 6; ++i) {
                const Vec3 mphi = mu * phi[i];
                for (int j = 0; j <= i; ++j) Mloc[i][j] += wq * mphi.dot(phi[j]);
            }
        }
        if (conductor)
            for (int i = 0; i < 6; ++i) {
                const Vec3 rc = rho_bar * crl[i];
                for (int j = 0; j <= i; ++j) Kloc[i][j] += rc.dot(crl[j]);
            }
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                Mloc[i][j] = Mloc[j][i];
                Kloc[i][j] = Kloc[j][i];
            }

        // Scatter through the per-entity expressions.
        std::array<DofTerm, 3> hw_terms;
        std::array<std::size_t, 3> hw_count{};
        for (int k = 0; k < 3; ++k) {
            const int d = dm.hw_dof[m.triangles[t].v[k]];
            if (d >= 0) {
                hw_terms[k] = {d, 1.0};
                hw_count[k] = 1;
            }
        }
        auto terms_of = [&](int i) -> std::pair<const DofTerm*, std::size_t> {
            if (i < 3) {
                const auto& v = dm.edge_terms[m.tri_edges[t][i]];
                return {v.data(), v.size()};
            }
            return {&hw_terms[i - 3], hw_count[i - 3]};
        };
        auto const_of = [&](int i) -> cplx {
            return i < 3 ? dm.edge_const[m.tri_edges[t][i]] : cplx{0.0, 0.0};
        };

        for (int i = 0; i < 6; ++i) {
            auto [ti, ni] = terms_of(i);
            if (ni == 0 && const_of(i) == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < 6; ++j) {
                const double mv = Mloc[i][j], kv = Kloc[i][j];
                if (mv == 0.0 && kv == 0.0) continue;
                auto [tj, nj] = terms_of(j);
                const cplx cj = const_of(j);
                for (std::size_t a = 0; a < ni; ++a) {
                    for (std::size_t b = 0; b < nj; ++b) {
                        const double w = ti[a].coeff * tj[b].coeff;
                        if (mv != 0.0) tm.push_back({ti[a].dof, tj[b].dof, cplx{w * mv, 0.0}});
                        if (kv != 0.0 && conductor)
                            tk.push_back({ti[a].dof, tj[b].dof, cplx{w * kv, 0.0}});
                    }
                    if (cj != cplx{0.0, 0.0}) {
                        op.bM[ti[a].dof] += ti[a].coeff * mv * cj;
                        if (conductor) op.bK[ti[a].dof] += ti[a].coeff * kv * cj;
                    }
                }
            }
        }
    }

    op.M = SparseComplex(dm.n_free, dm.n_free, std::move(tm));
    op.K = SparseComplex(dm.n_free, dm.n_free, std::move(tk));
    return op;
}

SparseComplex AssembledOperator::system_at(double omega) const {
    std::vector<Triplet> trips;
    trips.reserve(M.nonzeros() + K.nonzeros());
    const cplx jw{0.0, omega};
    for (int r = 0; r < M.rows(); ++r)
        for (std::int64_t k = M.row_ptr()[r]; k < M.row_ptr()[r + 1]; ++k)
            trips.push_back({r, M.col_ind()[k], jw * M.values()[k]});
    for (int r = 0; r < K.rows(); ++r)
        for (std::int64_t k = K.row_ptr()[r]; k < K.row_ptr()[r + 1]; ++k)
            trips.push_back({r, K.col_ind()[k], K.values()[k]});
    return SparseComplex(M.rows(), M.cols(), std::move(trips));
}

std::vector<cplx> AssembledOperator::rhs_at(double omega) const {
    const cplx jw{0.0, omega};
    std::vector<cplx> b(bM.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = -(jw * bM[i] + bK[i]);
    return b;
}

std::array<cplx, 3> element_edge_circulations(const Mesh2D& m, const DofMap& dm, int tri,
                                              const std::vector<cplx>& x) {
    std::array<cplx, 3> c;
    for (int k = 0; k < 3; ++k) {
        const int e = m.tri_edges[tri][k];
        cplx v = dm.edge_const[e];
        for (const auto& t : dm.edge_terms[e]) v += t.coeff * x[t.dof];
        c[k] = v;
    }
    return c;
}

std::array<cplx, 3> element_hw_values(const Mesh2D& m, const DofMap& dm, int tri,
                                      const std::vector<cplx>& x) {
    std::array<cplx, 3> h;
    for (int k = 0; k < 3; ++k) {
        const int d = dm.hw_dof[m.triangles[tri].v[k]];
        h[k] = d >= 0 ? x[d] : cplx{0.0, 0.0};
    }
    return h;
}

Vec3c element_curl(const Mesh2D& m, int tri, const std::array<cplx, 3>& edge_circ,
                   const std::array<cplx, 3>& hw_nodes) {
    const TriGeom g = tri_geom(m, tri);
    cplx du{0.0, 0.0}, dv{0.0, 0.0};  // gradient of the axial component
    for (int k = 0; k < 3; ++k) {
        du += hw_nodes[k] * g.grad[k].x();
        dv += hw_nodes[k] * g.grad[k].y();
    }
    cplx cz{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        int a, b;
        local_edge_orientation(m, tri, k, a, b);
        cz += edge_circ[k] *
              (2.0 * (g.grad[a].x() * g.grad[b].y() - g.grad[a].y() * g.grad[b].x()));
    }
    return Vec3c(dv, -du, cz);
}

}  // namespace helifem
