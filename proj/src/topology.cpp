#include "helifem/topology.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>

namespace helifem {

namespace {

double loop_signed_area(const Mesh2D& m, const std::vector<int>& nodes) {
    double a = 0.0;
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = m.nodes[nodes[i]];
        const Vec2& q = m.nodes[nodes[(i + 1) % n]];
        a += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * a;
}

HomologyLoop make_loop(const Mesh2D& m, int conductor, const std::vector<int>& edge_ids) {
    HomologyLoop loop;
    loop.conductor = conductor;
    loop.nodes = chain_edge_loop(m, edge_ids);
    if (loop_signed_area(m, loop.nodes) < 0.0)
        std::reverse(loop.nodes.begin(), loop.nodes.end());
    const std::size_t n = loop.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int a = loop.nodes[i], b = loop.nodes[(i + 1) % n];
        const int e = m.edge_index(a, b);
        if (e == -1) throw TopologyError("loop edge missing from mesh");
        loop.edge_ids.push_back(e);
        loop.edge_dir.push_back(a < b ? +1 : -1);
    }
    return loop;
}

// +1 when triangle t contains the directed edge (min -> max) of edge e in its
// CCW cycle, i.e. t lies to the left of the oriented edge.
int side_sign(const Mesh2D& m, int t, int e) {
    for (int k = 0; k < 3; ++k)
        if (m.tri_edges[t][k] == e) return m.tri_edge_sign[t][k];
    throw TopologyError("edge not incident to triangle");
}

}  // namespace

std::vector<HomologyLoop> boundary_loops(const Mesh2D& m) {
    if (m.conductor_count < 1) throw TopologyError("mesh has no conductors");
    std::vector<HomologyLoop> loops;
    for (int c = 0; c < m.conductor_count; ++c) {
        const auto ifc = m.interface_edges(c);
        if (ifc.empty()) throw TopologyError("conductor " + std::to_string(c) + " has no boundary");
        try {
            loops.push_back(make_loop(m, c, ifc));
        } catch (const MeshError& e) {
            throw TopologyError("conductor " + std::to_string(c) + ": " + e.what());
        }
    }
    return loops;
}

HomologyLoop outer_boundary_loop(const Mesh2D& m) {
    return make_loop(m, -1, m.outer_boundary_edges());
}

std::vector<Cochain1> raw_cohomology(const Mesh2D& m) {
    const int nt = static_cast<int>(m.triangles.size());
    const int ncond = m.conductor_count;
    // dual graph nodes: insulator triangles [0, nt), holes [nt, nt+ncond),
    // exterior nt+ncond
    const int exterior = nt + ncond;

    struct DualEdge { int to; int primal; };
    std::vector<std::vector<DualEdge>> adj(nt + ncond + 1);
    auto dual_of = [&](int tri) {
        if (tri == -1) return exterior;
        const int r = m.triangles[tri].region;
        return r == kInsulator ? tri : nt + r;
    };
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
        const auto& ed = m.edges[e];
        const int d0 = dual_of(ed.tri[0]);
        const int d1 = dual_of(ed.tri[1]);
        if (d0 >= nt && d1 >= nt) continue;  // no conductor/conductor or hole/exterior links
        if (d0 == d1) continue;              // conductor-interior edge
        adj[d0].push_back({d1, static_cast<int>(e)});
        adj[d1].push_back({d0, static_cast<int>(e)});
    }

    std::vector<Cochain1> cuts;
    for (int c = 0; c < ncond; ++c) {
        // BFS shortest dual path hole_c -> exterior
        std::vector<int> prev(adj.size(), -2), prev_edge(adj.size(), -1);
        std::queue<int> q;
        q.push(nt + c);
        prev[nt + c] = -1;
        while (!q.empty() && prev[exterior] == -2) {
            const int x = q.front();
            q.pop();
            for (const auto& de : adj[x]) {
                if (prev[de.to] != -2) continue;
                if (de.to >= nt && de.to != exterior) continue;  // don't route through other holes
                prev[de.to] = x;
                prev_edge[de.to] = de.primal;
                q.push(de.to);
            }
        }
        if (prev[exterior] == -2)
            throw TopologyError("insulator is disconnected: no cut path for conductor " +
                                std::to_string(c));

        Cochain1 cut;
        int node = exterior;
        while (prev[node] != -1) {
            const int e = prev_edge[node];
            const int from = prev[node];
            // crossing "from -> node"; sign +1 when moving into the left side
            int delta;
            if (node < nt)
                delta = side_sign(m, node, e);
            else  // into the exterior (or a hole; holes are excluded above)
                delta = -side_sign(m, from, e);
            cut.coeff[e] += delta;
            if (cut.coeff[e] == 0) cut.coeff.erase(e);
            node = from;
        }
        cuts.push_back(std::move(cut));
    }
    return cuts;
}

long long circulation(const Cochain1& c, const HomologyLoop& loop) {
    long long s = 0;
    for (std::size_t k = 0; k < loop.edge_ids.size(); ++k)
        s += static_cast<long long>(loop.edge_dir[k]) * c(loop.edge_ids[k]);
    return s;
}

long long coboundary_on_triangle(const Mesh2D& m, const Cochain1& c, int tri) {
    long long s = 0;
    for (int k = 0; k < 3; ++k)
        s += static_cast<long long>(m.tri_edge_sign[tri][k]) * c(m.tri_edges[tri][k]);
    return s;
}

CohomologyBasis align_basis(const Mesh2D& m, const std::vector<HomologyLoop>& loops,
                            const std::vector<Cochain1>& raw) {
    const int n = static_cast<int>(loops.size());
    if (static_cast<int>(raw.size()) != n)
        throw TopologyError("align_basis: loop/cochain count mismatch");

    std::vector<std::vector<long long>> P0(n, std::vector<long long>(n));
    Eigen::MatrixXd P0d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            P0[i][j] = circulation(raw[j], loops[i]);
            P0d(i, j) = static_cast<double>(P0[i][j]);
        }

    // integer inverse: invert in doubles, round, then verify exactly
    const double det = P0d.determinant();
    if (std::llround(std::abs(det)) != 1)
        throw TopologyError("raw pairing matrix is not unimodular (|det| = " +
                            std::to_string(det) + ")");
    Eigen::MatrixXd Qd = P0d.inverse();
    std::vector<std::vector<long long>> Q(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Q[i][j] = std::llround(Qd(i, j));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long long s = 0;
            for (int k = 0; k < n; ++k) s += P0[i][k] * Q[k][j];
            if (s != (i == j ? 1 : 0))
                throw TopologyError("integer inverse verification failed");
        }

    CohomologyBasis basis;
    for (int j = 0; j < n; ++j) {
        Cochain1 g;
        for (int mth = 0; mth < n; ++mth) {
            if (Q[mth][j] == 0) continue;
            for (const auto& [e, v] : raw[mth].coeff) {
                g.coeff[e] += static_cast<int>(Q[mth][j]) * v;
                if (g.coeff[e] == 0) g.coeff.erase(e);
            }
        }
        basis.generators.push_back(std::move(g));
    }
    basis.pairing.assign(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            basis.pairing[i][j] = circulation(basis.generators[j], loops[i]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (basis.pairing[i][j] != (i == j ? 1 : 0))
                throw TopologyError("aligned pairing is not the identity");
    (void)m;
    return basis;
}

CohomologyBasis build_cohomology_basis(const Mesh2D& m) {
    const auto loops = boundary_loops(m);
    return align_basis(m, loops, raw_cohomology(m));
}

}  // namespace helifem
