#include "helifem/mesher.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace helifem {

namespace {

struct DTri {
    std::array<int, 3> v{-1, -1, -1};   // CCW
    std::array<int, 3> n{-1, -1, -1};   // neighbor opposite v[k]
    bool alive = false;
};

inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// incircle determinant; > 0 when d is strictly inside the circumcircle of CCW abc
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double ad2 = adx * adx + ady * ady;
    const double bd2 = bdx * bdx + bdy * bdy;
    const double cd2 = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
           ad2 * (bdx * cdy - cdx * bdy);
}

struct SegKey {
    int a, b;
    SegKey(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}
    bool operator<(const SegKey& o) const { return a < o.a || (a == o.a && b < o.b); }
    bool operator==(const SegKey& o) const { return a == o.a && b == o.b; }
};

class Triangulator {
  public:
    Triangulator(const SymmetryCell& cell, const MesherOptions& opt)
        : cell_(cell), opt_(opt) {}

    Mesh2D run();

  private:
    const SymmetryCell& cell_;
    const MesherOptions& opt_;

    std::vector<Vec2> pts_;
    std::vector<DTri> tris_;
    std::vector<int> free_tris_;
    std::vector<int> last_created_;  // triangles made by the latest insert_point
    int last_tri_ = 0;
    EnvelopePolygon shield_poly_;
    double shield_r_in_ = 0.0;  // inscribed radius of the shield polygon

    std::set<SegKey> segments_;
    // uniform grid over segment bounding region for encroachment queries
    std::unordered_map<std::int64_t, std::vector<SegKey>> seg_grid_;
    double grid_h_ = 0.0;
    double domain_scale_ = 0.0;

    std::int64_t cell_key(double x, double y) const {
        const auto cx = static_cast<std::int64_t>(std::floor(x / grid_h_));
        const auto cy = static_cast<std::int64_t>(std::floor(y / grid_h_));
        return cx * 2000003 + cy;
    }
    void grid_add(const SegKey& s) {
        const Vec2 mid = 0.5 * (pts_[s.a] + pts_[s.b]);
        seg_grid_[cell_key(mid.x(), mid.y())].push_back(s);
    }

    int new_tri(int a, int b, int c) {
        int t;
        if (!free_tris_.empty()) {
            t = free_tris_.back();
            free_tris_.pop_back();
        } else {
            t = static_cast<int>(tris_.size());
            tris_.emplace_back();
        }
        tris_[t] = {{a, b, c}, {-1, -1, -1}, true};
        return t;
    }

    void link(int t, int k, int nb) {
        tris_[t].n[k] = nb;
        if (nb != -1) {
            for (int j = 0; j < 3; ++j) {
                const auto& o = tris_[nb];
                const int a = o.v[(j + 1) % 3], b = o.v[(j + 2) % 3];
                const int a2 = tris_[t].v[(k + 1) % 3], b2 = tris_[t].v[(k + 2) % 3];
                if ((a == a2 && b == b2) || (a == b2 && b == a2)) {
                    tris_[nb].n[j] = t;
                    break;
                }
            }
        }
    }

    int locate(const Vec2& p) const;
    bool is_constraint(int a, int b) const { return segments_.count(SegKey(a, b)) != 0; }
    int insert_point(const Vec2& p, bool* ok = nullptr);

    void insert_initial();
    void recover_segment(int a, int b, int depth);
    void recover_all();
    void split_segment(const SegKey& s);
    std::vector<SegKey> encroached_by(const Vec2& p) const;
    void refine();

    bool has_edge(int a, int b) const;
    bool tri_in_domain(int t) const;
    Vec2 circumcenter(int t, double* radius) const;

    Mesh2D extract() const;
};

int Triangulator::locate(const Vec2& p) const {
    int t = last_tri_;
    if (t < 0 || t >= static_cast<int>(tris_.size()) || !tris_[t].alive) t = -1;
    if (t == -1) {
        for (std::size_t i = 0; i < tris_.size(); ++i)
            if (tris_[i].alive) { t = static_cast<int>(i); break; }
    }
    int steps = 0;
    const int max_steps = static_cast<int>(tris_.size()) + 16;
    while (steps++ < max_steps) {
        const DTri& tr = tris_[t];
        int next = -1;
        for (int k = 0; k < 3; ++k) {
            const Vec2& a = pts_[tr.v[(k + 1) % 3]];
            const Vec2& b = pts_[tr.v[(k + 2) % 3]];
            if (orient2d(a, b, p) < 0.0) {
                next = tr.n[k];
                break;
            }
        }
        if (next == -1) return t;
        t = next;
        if (t == -1) break;
    }
    // walk failed (numerical corner); exhaustive fallback
    for (std::size_t i = 0; i < tris_.size(); ++i) {
        if (!tris_[i].alive) continue;
        const DTri& tr = tris_[i];
        bool inside = true;
        for (int k = 0; k < 3 && inside; ++k)
            if (orient2d(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], p) < -1e-18)
                inside = false;
        if (inside) return static_cast<int>(i);
    }
    throw MesherError("point location failed");
}

int Triangulator::insert_point(const Vec2& p, bool* ok) {
    if (ok) *ok = true;
    last_created_.clear();
    const int t0 = locate(p);

    // grow cavity of triangles whose circumcircle contains p, never crossing
    // a constraint segment
    std::vector<int> cavity;
    std::unordered_set<int> in_cavity;
    std::deque<int> work{t0};
    in_cavity.insert(t0);
    while (!work.empty()) {
        const int t = work.front();
        work.pop_front();
        cavity.push_back(t);
        const DTri& tr = tris_[t];
        for (int k = 0; k < 3; ++k) {
            const int nb = tr.n[k];
            if (nb == -1 || in_cavity.count(nb)) continue;
            if (is_constraint(tr.v[(k + 1) % 3], tr.v[(k + 2) % 3])) continue;
            const DTri& o = tris_[nb];
            if (incircle(pts_[o.v[0]], pts_[o.v[1]], pts_[o.v[2]], p) > 0.0) {
                in_cavity.insert(nb);
                work.push_back(nb);
            }
        }
    }

    // cavity walls (CCW as seen from inside): hull edges, edges to non-cavity
    // triangles, and constraint edges with both sides in the cavity
    struct BEdge { int a, b, outer; };
    std::vector<BEdge> boundary;
    for (int t : cavity) {
        const DTri& tr = tris_[t];
        for (int k = 0; k < 3; ++k) {
            const int nb = tr.n[k];
            const int a = tr.v[(k + 1) % 3], b = tr.v[(k + 2) % 3];
            if (nb != -1 && in_cavity.count(nb) && !is_constraint(a, b)) continue;
            boundary.push_back({a, b, nb});
        }
    }

    // degeneracy guards: abort if p coincides with a wall vertex or the star
    // from p would fold over a wall
    for (const BEdge& e : boundary) {
        if ((pts_[e.a] - p).norm() < 1e-9 * domain_scale_ ||
            (pts_[e.b] - p).norm() < 1e-9 * domain_scale_) {
            if (ok) { *ok = false; return (pts_[e.a] - p).norm() < (pts_[e.b] - p).norm() ? e.a : e.b; }
            throw MesherError("duplicate point insertion");
        }
        if (orient2d(pts_[e.a], pts_[e.b], p) <= 0.0) {
            if (ok) { *ok = false; return -1; }
            throw MesherError("cavity is not star-shaped around insertion point");
        }
    }

    const int pi = static_cast<int>(pts_.size());
    pts_.push_back(p);
    for (int t : cavity) {
        tris_[t].alive = false;
        free_tris_.push_back(t);
    }

    std::unordered_map<int, int> by_first;  // wall start vertex -> new tri
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const BEdge& e : boundary) {
        if (e.outer != -1 && in_cavity.count(e.outer))
            // would need twin pairing; cannot happen for closed constraint loops
            throw MesherError("cavity wrapped around a constraint chain");
        const int t = new_tri(pi, e.a, e.b);
        created.push_back(t);
        last_created_.push_back(t);
        link(t, 0, e.outer);
        if (by_first.count(e.a)) throw MesherError("cavity wall is not a simple loop");
        by_first[e.a] = t;
    }
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const BEdge& e = boundary[i];
        const int t = created[i];
        auto it = by_first.find(e.b);
        if (it == by_first.end()) throw MesherError("cavity wall is not closed");
        tris_[t].n[1] = it->second;   // neighbor opposite e.a shares edge (b, p)
        tris_[it->second].n[2] = t;   // and reciprocally opposite its b-vertex
    }
    last_tri_ = created.empty() ? last_tri_ : created.front();
    return pi;
}

bool Triangulator::has_edge(int a, int b) const {
    // scan triangles incident to a by walking the full list is too slow; use
    // a local search around the last known triangle of a via cavity-free scan.
    // Triangle counts here are moderate; a global pass amortized over recovery
    // passes is acceptable.
    for (const auto& tr : tris_) {
        if (!tr.alive) continue;
        for (int k = 0; k < 3; ++k) {
            const int x = tr.v[k], y = tr.v[(k + 1) % 3];
            if ((x == a && y == b) || (x == b && y == a)) return true;
        }
    }
    return false;
}

void Triangulator::insert_initial() {
    const double R = cell_.shield_radius * 8.0;
    domain_scale_ = cell_.shield_radius;
    shield_poly_.points = cell_.shield;
    shield_r_in_ = cell_.shield_radius * std::cos(M_PI / cell_.shield.size());
    pts_ = {{-R, -R}, {R, -R}, {R, R}, {-R, R}};
    const int t0 = new_tri(0, 1, 2);
    const int t1 = new_tri(0, 2, 3);
    link(t0, 1, t1);  // edge (2,0)
    tris_[t1].n[2] = t0;

    auto insert_polygon = [this](const std::vector<Vec2>& poly, std::vector<int>& ids) {
        ids.clear();
        for (const auto& p : poly) {
            bool ok;
            ids.push_back(insert_point(p, &ok));
        }
    };

    double max_seg = 0.0;
    std::vector<std::vector<int>> polys_ids;
    std::vector<const std::vector<Vec2>*> polys;
    polys.push_back(&cell_.shield);
    for (const auto& c : cell_.conductors) polys.push_back(&c.points);
    for (const auto* poly : polys) {
        std::vector<int> ids;
        insert_polygon(*poly, ids);
        polys_ids.push_back(ids);
        const std::size_t n = poly->size();
        for (std::size_t i = 0; i < n; ++i)
            max_seg = std::max(max_seg, ((*poly)[i] - (*poly)[(i + 1) % n]).norm());
    }
    grid_h_ = std::max(max_seg, 1e-6 * domain_scale_);
    for (const auto& ids : polys_ids) {
        const std::size_t n = ids.size();
        for (std::size_t i = 0; i < n; ++i) {
            const SegKey s(ids[i], ids[(i + 1) % n]);
            if (s.a == s.b) continue;
            segments_.insert(s);
            grid_add(s);
        }
    }
}

void Triangulator::recover_segment(int a, int b, int depth) {
    if (has_edge(a, b)) return;
    if (depth > opt_.max_split_depth)
        throw MesherError("constraint edge not recoverable within split depth limit");
    const SegKey parent(a, b);
    segments_.erase(parent);
    const Vec2 mid = 0.5 * (pts_[a] + pts_[b]);
    bool ok;
    const int m = insert_point(mid, &ok);
    if (!ok) throw MesherError("constraint recovery hit a coincident vertex");
    const SegKey s1(a, m), s2(m, b);
    segments_.insert(s1);
    segments_.insert(s2);
    grid_add(s1);
    grid_add(s2);
    recover_segment(a, m, depth + 1);
    recover_segment(m, b, depth + 1);
}

void Triangulator::recover_all() {
    // inserting split points may knock out other recovered segments (cavity
    // walls stop at constraints, but a segment not yet re-discovered isn't
    // protected), so iterate to a fixed point
    for (int pass = 0; pass < 64; ++pass) {
        std::vector<SegKey> missing;
        std::set<SegKey> present;
        for (const auto& tr : tris_) {
            if (!tr.alive) continue;
            for (int k = 0; k < 3; ++k)
                present.insert(SegKey(tr.v[k], tr.v[(k + 1) % 3]));
        }
        for (const auto& s : segments_)
            if (!present.count(s)) missing.push_back(s);
        if (missing.empty()) return;
        for (const auto& s : missing) recover_segment(s.a, s.b, 0);
    }
    throw MesherError("constraint recovery did not converge");
}

std::vector<SegKey> Triangulator::encroached_by(const Vec2& p) const {
    std::vector<SegKey> out;
    const auto cx = static_cast<std::int64_t>(std::floor(p.x() / grid_h_));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y() / grid_h_));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            const auto it = seg_grid_.find((cx + dx) * 2000003 + (cy + dy));
            if (it == seg_grid_.end()) continue;
            for (const SegKey& s : it->second) {
                if (!segments_.count(s)) continue;  // stale grid entry (split parent)
                if ((p - pts_[s.a]).dot(p - pts_[s.b]) < 0.0) out.push_back(s);
            }
        }
    }
    return out;
}

void Triangulator::split_segment(const SegKey& s) {
    segments_.erase(s);
    const Vec2 mid = 0.5 * (pts_[s.a] + pts_[s.b]);
    bool ok;
    const int m = insert_point(mid, &ok);
    if (!ok) {
        segments_.insert(s);  // too short to split further
        return;
    }
    const SegKey s1(s.a, m), s2(m, s.b);
    segments_.insert(s1);
    segments_.insert(s2);
    grid_add(s1);
    grid_add(s2);
}

Vec2 Triangulator::circumcenter(int t, double* radius) const {
    const Vec2 a = pts_[tris_[t].v[0]], b = pts_[tris_[t].v[1]], c = pts_[tris_[t].v[2]];
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    const Vec2 cc = a + Vec2{ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2} / d;
    if (radius) *radius = (cc - a).norm();
    return cc;
}

bool Triangulator::tri_in_domain(int t) const {
    for (int k = 0; k < 3; ++k)
        if (tris_[t].v[k] < 4) return false;  // touches the super square
    const Vec2 g = (pts_[tris_[t].v[0]] + pts_[tris_[t].v[1]] + pts_[tris_[t].v[2]]) / 3.0;
    const double r = g.norm();
    if (r < shield_r_in_) return true;
    if (r >= cell_.shield_radius) return false;
    return shield_poly_.contains(g);  // thin ring between polygon and circle
}

void Triangulator::refine() {
    const double min_angle = opt_.min_angle_deg * M_PI / 180.0;
    const double sin_min = std::sin(min_angle);

    std::deque<int> queue;
    for (std::size_t t = 0; t < tris_.size(); ++t)
        if (tris_[t].alive) queue.push_back(static_cast<int>(t));

    while (!queue.empty()) {
        if (pts_.size() > opt_.max_vertices)
            throw MesherError("refinement exceeded vertex budget");
        const int t = queue.front();
        queue.pop_front();
        if (t >= static_cast<int>(tris_.size()) || !tris_[t].alive) continue;
        if (!tri_in_domain(t)) continue;

        double R;
        const Vec2 cc = circumcenter(t, &R);
        // smallest angle is opposite the shortest edge; sin = l / (2R)
        double lmin = 1e300;
        for (int k = 0; k < 3; ++k)
            lmin = std::min(lmin, (pts_[tris_[t].v[(k + 1) % 3]] - pts_[tris_[t].v[(k + 2) % 3]]).norm());
        const bool too_big = R > opt_.target_h;
        const bool bad_angle = lmin / (2.0 * R) < sin_min;
        if (!too_big && !bad_angle) continue;

        auto encroached = encroached_by(cc);
        if (!encroached.empty()) {
            for (const auto& s : encroached) {
                split_segment(s);
                for (int nt : last_created_) queue.push_back(nt);
            }
            queue.push_back(t);  // re-examine after the splits
        } else {
            if (cc.norm() >= cell_.shield_radius ||
                (cc.norm() >= shield_r_in_ && !shield_poly_.contains(cc)))
                continue;  // center fell outside the domain; give up on t
            bool ok;
            insert_point(cc, &ok);
            if (!ok) continue;  // coincident/degenerate insertion; give up on t
            for (int nt : last_created_) queue.push_back(nt);
        }
    }
}

Mesh2D Triangulator::extract() const {
    Mesh2D mesh;
    std::vector<int> remap(pts_.size(), -1);

    EnvelopePolygon shield_poly;
    shield_poly.points = cell_.shield;

    // bounding boxes for fast conductor classification
    struct BBox { double x0, y0, x1, y1; };
    std::vector<BBox> boxes;
    for (const auto& c : cell_.conductors) {
        BBox b{1e300, 1e300, -1e300, -1e300};
        for (const auto& p : c.points) {
            b.x0 = std::min(b.x0, p.x());
            b.y0 = std::min(b.y0, p.y());
            b.x1 = std::max(b.x1, p.x());
            b.y1 = std::max(b.y1, p.y());
        }
        boxes.push_back(b);
    }

    for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (!tris_[t].alive) continue;
        bool super = false;
        for (int k = 0; k < 3; ++k)
            if (tris_[t].v[k] < 4) super = true;
        if (super) continue;
        const Vec2 g = (pts_[tris_[t].v[0]] + pts_[tris_[t].v[1]] + pts_[tris_[t].v[2]]) / 3.0;
        if (g.norm() >= cell_.shield_radius || !shield_poly.contains(g)) continue;

        Triangle tr;
        for (int k = 0; k < 3; ++k) {
            const int v = tris_[t].v[k];
            if (remap[v] == -1) {
                remap[v] = static_cast<int>(mesh.nodes.size());
                mesh.nodes.push_back(pts_[v]);
            }
            tr.v[k] = remap[v];
        }
        tr.region = kInsulator;
        for (std::size_t c = 0; c < cell_.conductors.size(); ++c) {
            const BBox& b = boxes[c];
            if (g.x() < b.x0 || g.x() > b.x1 || g.y() < b.y0 || g.y() > b.y1) continue;
            if (cell_.conductors[c].contains(g)) {
                tr.region = cell_.conductors[c].conductor_id;
                break;
            }
        }
        mesh.triangles.push_back(tr);
    }

    mesh.finalize();
    for (int e : mesh.outer_boundary_edges())
        mesh.boundary_lines.push_back({mesh.edges[e].a, mesh.edges[e].b});

    // No centroid may sit on a constraint segment (tag ambiguity guard).
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec2 g = mesh.centroid(static_cast<int>(t));
        for (const SegKey& s : encroached_by(g)) {
            const Vec2 a = pts_[s.a], b = pts_[s.b];
            const Vec2 d = b - a;
            const double h = std::abs(d.x() * (g.y() - a.y()) - d.y() * (g.x() - a.x())) / d.norm();
            if (h < 1e-12)
                throw MesherError("triangle centroid lies on a constraint edge");
        }
    }
    return mesh;
}

Mesh2D Triangulator::run() {
    insert_initial();
    recover_all();
    refine();
    recover_all();  // refinement must not have lost constraints; cheap re-check
    return extract();
}

}  // namespace

Mesh2D generate_mesh(const SymmetryCell& cell, const MesherOptions& opt) {
    if (!(opt.target_h > 0.0)) throw std::invalid_argument("generate_mesh: target_h must be > 0");
    if (cell.shield.empty()) throw std::invalid_argument("generate_mesh: empty symmetry cell");
    Triangulator tr(cell, opt);
    return tr.run();
}

}  // namespace helifem
