#include "helifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace helifem {

namespace {
double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}
}  // namespace

double Mesh2D::triangle_area(int t) const {
    const auto& tr = triangles[t];
    return signed_area(nodes[tr.v[0]], nodes[tr.v[1]], nodes[tr.v[2]]);
}

Vec2 Mesh2D::centroid(int t) const {
    const auto& tr = triangles[t];
    return (nodes[tr.v[0]] + nodes[tr.v[1]] + nodes[tr.v[2]]) / 3.0;
}

int Mesh2D::edge_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = edge_lookup_.find({a, b});
    return it == edge_lookup_.end() ? -1 : it->second;
}

void Mesh2D::finalize() {
    const int nn = static_cast<int>(nodes.size());
    conductor_count = 0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        auto& tr = triangles[t];
        for (int k = 0; k < 3; ++k)
            if (tr.v[k] < 0 || tr.v[k] >= nn)
                throw MeshError("triangle " + std::to_string(t) + " references node " +
                                std::to_string(tr.v[k]) + " out of range");
        const double a = signed_area(nodes[tr.v[0]], nodes[tr.v[1]], nodes[tr.v[2]]);
        if (a == 0.0)
            throw MeshError("triangle " + std::to_string(t) + " is degenerate");
        if (a < 0.0) std::swap(tr.v[1], tr.v[2]);
        if (tr.region < kInsulator)
            throw MeshError("triangle " + std::to_string(t) + " has invalid region tag");
        conductor_count = std::max(conductor_count, tr.region + 1);
    }

    // Derive edges, deterministic order: sorted by (min node, max node).
    std::map<std::pair<int, int>, std::array<int, 2>> adj;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tr = triangles[t];
        for (int k = 0; k < 3; ++k) {
            int a = tr.v[(k + 1) % 3], b = tr.v[(k + 2) % 3];
            if (a > b) std::swap(a, b);
            auto [it, fresh] = adj.try_emplace({a, b}, std::array<int, 2>{static_cast<int>(t), -1});
            if (!fresh) {
                if (it->second[1] != -1)
                    throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                    ") shared by more than two triangles");
                it->second[1] = static_cast<int>(t);
            }
        }
    }
    edges.clear();
    edge_lookup_.clear();
    edges.reserve(adj.size());
    for (const auto& [key, tris] : adj) {
        edge_lookup_[key] = static_cast<int>(edges.size());
        edges.push_back({key.first, key.second, tris});
    }

    tri_edges.assign(triangles.size(), {});
    tri_edge_sign.assign(triangles.size(), {});
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tr = triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tr.v[(k + 1) % 3], b = tr.v[(k + 2) % 3];
            tri_edges[t][k] = edge_index(a, b);
            tri_edge_sign[t][k] = (a < b) ? +1 : -1;
        }
    }

    validate();
}

std::vector<int> Mesh2D::interface_edges(int conductor) const {
    std::vector<int> out;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& ed = edges[e];
        if (ed.tri[1] == -1) continue;
        const int r0 = triangles[ed.tri[0]].region, r1 = triangles[ed.tri[1]].region;
        if ((r0 == conductor && r1 == kInsulator) || (r1 == conductor && r0 == kInsulator))
            out.push_back(static_cast<int>(e));
    }
    return out;
}

std::vector<int> Mesh2D::outer_boundary_edges() const {
    std::vector<int> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].tri[1] == -1) out.push_back(static_cast<int>(e));
    return out;
}

std::vector<int> chain_edge_loop(const Mesh2D& m, const std::vector<int>& edge_ids) {
    if (edge_ids.empty()) throw MeshError("chain_edge_loop: empty edge set");
    std::map<int, std::vector<int>> node_edges;
    for (int e : edge_ids) {
        node_edges[m.edges[e].a].push_back(e);
        node_edges[m.edges[e].b].push_back(e);
    }
    for (const auto& [n, es] : node_edges)
        if (es.size() != 2)
            throw MeshError("boundary loop: node " + std::to_string(n) + " has degree " +
                            std::to_string(es.size()));
    std::vector<int> loop;
    std::set<int> used;
    int node = node_edges.begin()->first;
    const int start = node;
    do {
        loop.push_back(node);
        int next_edge = -1;
        for (int e : node_edges[node])
            if (!used.count(e)) { next_edge = e; break; }
        if (next_edge == -1) throw MeshError("boundary loop: open chain");
        used.insert(next_edge);
        node = (m.edges[next_edge].a == node) ? m.edges[next_edge].b : m.edges[next_edge].a;
    } while (node != start);
    if (used.size() != edge_ids.size())
        throw MeshError("boundary edges form more than one loop");
    return loop;
}

void Mesh2D::validate() const {
    if (triangles.empty()) throw MeshError("mesh has no triangles");

    // Conductors may not touch each other or the outer boundary.
    for (const auto& ed : edges) {
        if (ed.tri[1] == -1) {
            if (triangles[ed.tri[0]].region != kInsulator)
                throw MeshError("conductor triangle on the outer boundary");
            continue;
        }
        const int r0 = triangles[ed.tri[0]].region, r1 = triangles[ed.tri[1]].region;
        if (r0 != r1 && r0 != kInsulator && r1 != kInsulator)
            throw MeshError("conductors " + std::to_string(r0) + " and " + std::to_string(r1) +
                            " share an edge");
    }

    // Edge-connectivity of every region.
    std::vector<int> comp(triangles.size(), -1);
    int ncomp = 0;
    for (std::size_t seed = 0; seed < triangles.size(); ++seed) {
        if (comp[seed] != -1) continue;
        const int region = triangles[seed].region;
        std::queue<int> q;
        q.push(static_cast<int>(seed));
        comp[seed] = ncomp;
        while (!q.empty()) {
            const int t = q.front();
            q.pop();
            for (int e : tri_edges[t]) {
                const auto& ed = edges[e];
                const int other = (ed.tri[0] == t) ? ed.tri[1] : ed.tri[0];
                if (other != -1 && comp[other] == -1 && triangles[other].region == region) {
                    comp[other] = ncomp;
                    q.push(other);
                }
            }
        }
        ++ncomp;
    }
    std::map<int, std::set<int>> region_comps;
    for (std::size_t t = 0; t < triangles.size(); ++t)
        region_comps[triangles[t].region].insert(comp[t]);
    for (const auto& [r, cs] : region_comps)
        if (cs.size() != 1)
            throw MeshError("region " + std::to_string(r) + " has " +
                            std::to_string(cs.size()) + " components");
    for (int c = 0; c < conductor_count; ++c)
        if (!region_comps.count(c))
            throw MeshError("conductor ids are not contiguous: missing " + std::to_string(c));

    // One closed outer boundary loop; one closed loop per conductor.
    chain_edge_loop(*this, outer_boundary_edges());
    for (int c = 0; c < conductor_count; ++c) chain_edge_loop(*this, interface_edges(c));

    // Input boundary lines (if any) must be actual boundary edges.
    for (const auto& bl : boundary_lines) {
        const int e = edge_index(bl[0], bl[1]);
        if (e == -1 || edges[e].tri[1] != -1)
            throw MeshError("boundary line (" + std::to_string(bl[0]) + "," + std::to_string(bl[1]) +
                            ") is not a mesh boundary edge");
    }
}

MeshStats Mesh2D::stats() const {
    MeshStats s;
    s.node_count = static_cast<int>(nodes.size());
    s.triangle_count = static_cast<int>(triangles.size());
    s.edge_count = static_cast<int>(edges.size());
    s.min_angle_deg = 180.0;
    s.max_aspect_ratio = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tr = triangles[t];
        double lmin = 1e300, lmax = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = nodes[tr.v[k]], b = nodes[tr.v[(k + 1) % 3]], c = nodes[tr.v[(k + 2) % 3]];
            const double ang = std::acos(std::clamp((b - a).normalized().dot((c - a).normalized()), -1.0, 1.0));
            s.min_angle_deg = std::min(s.min_angle_deg, ang * 180.0 / M_PI);
            const double l = (b - a).norm();
            lmin = std::min(lmin, l);
            lmax = std::max(lmax, l);
        }
        s.max_aspect_ratio = std::max(s.max_aspect_ratio, lmax / lmin);
        s.region_triangles[tr.region]++;
    }
    return s;
}

}  // namespace helifem
