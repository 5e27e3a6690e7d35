#include "helifem/section.hpp"

#include <cmath>
#include <stdexcept>

namespace helifem {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 rotate(const Vec2& p, double ang) {
    const double c = std::cos(ang), s = std::sin(ang);
    return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

}  // namespace

void LayerSpec::validate() const {
    if (!(radius >= 0.0)) throw std::invalid_argument("LayerSpec: radius must be >= 0");
    if (count < 1) throw std::invalid_argument("LayerSpec: count must be >= 1");
    if (!(conductor_radius > 0.0)) throw std::invalid_argument("LayerSpec: conductor_radius must be > 0");
}

int CablePlan::conductor_count() const {
    int n = 0;
    for (const auto& l : layers) n += l.count;
    return n;
}

void CablePlan::validate() const {
    helix.validate();
    materials.validate();
    if (layers.empty()) throw std::invalid_argument("CablePlan: no layers");
    for (const auto& l : layers) {
        l.validate();
        if (!(shield_radius > l.radius + l.conductor_radius))
            throw std::invalid_argument("CablePlan: shield_radius too small for layer reach");
    }
}

double EnvelopePolygon::area() const {
    double a = 0.0;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) a += cross2(points[i], points[(i + 1) % n]);
    return 0.5 * a;
}

bool EnvelopePolygon::contains(const Vec2& p) const {
    bool inside = false;
    const std::size_t n = points.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = points[i];
        const Vec2& b = points[j];
        if ((a.y() > p.y()) != (b.y() > p.y()) &&
            p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
            inside = !inside;
    }
    return inside;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const double v = cross2(q - p, r - p);
        const double eps = 1e-18;
        if (v > eps) return 1;
        if (v < -eps) return -1;
        return 0;
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on_seg = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
               std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
    };
    if (o1 == 0 && on_seg(a, b, c)) return true;
    if (o2 == 0 && on_seg(a, b, d)) return true;
    if (o3 == 0 && on_seg(c, d, a)) return true;
    if (o4 == 0 && on_seg(c, d, b)) return true;
    return false;
}

bool EnvelopePolygon::is_simple() const {
    const std::size_t n = points.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip segments sharing a vertex
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(points[i], points[(i + 1) % n],
                                   points[j], points[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

double envelope_g(const LayerSpec& layer, const HelixParams& h, double t, const Vec2& p) {
    const double th = h.chirality * h.alpha * t + layer.phase;
    const Vec2 c{layer.radius * std::cos(th), layer.radius * std::sin(th)};
    return (p - c).squaredNorm() + h.beta * h.beta * t * t -
           layer.conductor_radius * layer.conductor_radius;
}

double envelope_dg_dt(const LayerSpec& layer, const HelixParams& h, double t, const Vec2& p) {
    const double th = h.chirality * h.alpha * t + layer.phase;
    const double ra = layer.radius * h.alpha;
    const Vec2 gp{-h.chirality * ra * std::sin(th), h.chirality * ra * std::cos(th)};
    return -2.0 * (p - Vec2{layer.radius * std::cos(th), layer.radius * std::sin(th)}).dot(gp) +
           2.0 * h.beta * h.beta * t;
}

double envelope_t_max(const LayerSpec& layer, const HelixParams& h) {
    const double ra = layer.radius * h.alpha;
    if (ra == 0.0) return 0.0;
    const double b = h.beta;
    return layer.conductor_radius * ra / (b * std::sqrt(ra * ra + b * b));
}

std::vector<Vec2> envelope_points(const LayerSpec& layer, const HelixParams& h, double t) {
    layer.validate();
    h.validate();
    const double rc = layer.conductor_radius, b = h.beta;
    const double ra = layer.radius * h.alpha;
    const double th = h.chirality * h.alpha * t + layer.phase;
    const Vec2 center{layer.radius * std::cos(th), layer.radius * std::sin(th)};
    const double R2 = rc * rc - b * b * t * t;
    if (R2 < 0.0) return {};

    if (ra == 0.0) {
        // Untwisted or centered conductor: only the t = 0 slice contributes and
        // degenerates to a full circle; report its extreme points on the
        // diameter through the phase direction.
        if (t != 0.0) return {};
        const Vec2 dir{std::cos(layer.phase), std::sin(layer.phase)};
        return {center + rc * dir, center - rc * dir};
    }

    // Line normal is the horizontal helix tangent; signed offset beta^2 t / |gamma'|.
    const double d = b * b * t / ra;
    const double half2 = R2 - d * d;
    if (half2 < 0.0) return {};
    const Vec2 normal{-h.chirality * std::sin(th), h.chirality * std::cos(th)};
    const Vec2 tangent{std::cos(th), std::sin(th)};
    const Vec2 foot = center + d * normal;
    if (half2 == 0.0) return {foot};
    const double half = std::sqrt(half2);
    return {foot + half * tangent, foot - half * tangent};
}

EnvelopePolygon envelope_polygon(const LayerSpec& layer, const HelixParams& h, int samples) {
    layer.validate();
    h.validate();
    if (samples < 16) throw std::invalid_argument("envelope_polygon: samples must be >= 16");

    EnvelopePolygon poly;
    poly.layer_id = -1;
    const double rc = layer.conductor_radius;
    const Vec2 center{layer.radius * std::cos(layer.phase), layer.radius * std::sin(layer.phase)};

    const double t_max = envelope_t_max(layer, h);
    if (t_max == 0.0) {
        // Straight (or centered) conductor: plain circle.
        for (int i = 0; i < samples; ++i) {
            const double a = 2.0 * M_PI * i / samples;
            poly.points.push_back(center + rc * Vec2{std::cos(a), std::sin(a)});
        }
        return poly;
    }

    // Sweep t with cosine clustering near the branch tangency points +-t_max.
    std::vector<Vec2> upper, lower;
    for (int j = 0; j < samples; ++j) {
        const double t = -t_max * std::cos(M_PI * j / (samples - 1));
        auto pts = envelope_points(layer, h, t);
        if (pts.empty()) continue;
        upper.push_back(pts.front());
        lower.push_back(pts.back());
    }
    // Stitch: upper branch forward, lower branch reversed, dropping duplicate
    // points where the branches meet.
    auto push = [&poly](const Vec2& p) {
        if (!poly.points.empty() && (p - poly.points.back()).norm() < 1e-12) return;
        poly.points.push_back(p);
    };
    for (const auto& p : upper) push(p);
    for (auto it = lower.rbegin(); it != lower.rend(); ++it) push(*it);
    while (poly.points.size() > 1 && (poly.points.front() - poly.points.back()).norm() < 1e-12)
        poly.points.pop_back();

    if (poly.area() < 0.0)
        std::reverse(poly.points.begin(), poly.points.end());
    if (!poly.is_simple())
        throw std::runtime_error("envelope_polygon: self-intersecting envelope (twist too strong for conductor radius)");
    return poly;
}

SymmetryCell build_symmetry_cell(const CablePlan& plan, int samples) {
    plan.validate();
    SymmetryCell cell;
    cell.shield_radius = plan.shield_radius;

    int cid = 0;
    for (std::size_t li = 0; li < plan.layers.size(); ++li) {
        const LayerSpec& layer = plan.layers[li];
        EnvelopePolygon base = envelope_polygon(layer, plan.helix, samples);
        base.layer_id = static_cast<int>(li);
        for (int j = 0; j < layer.count; ++j) {
            EnvelopePolygon p = base;
            const double ang = 2.0 * M_PI * j / layer.count;
            if (j > 0)
                for (auto& pt : p.points) pt = rotate(pt, ang);
            p.conductor_id = cid++;
            cell.conductors.push_back(std::move(p));
        }
    }

    // Shield circle polygon.
    const int ns = std::max(128, samples);
    for (int i = 0; i < ns; ++i) {
        const double a = 2.0 * M_PI * i / ns;
        cell.shield.push_back(plan.shield_radius * Vec2{std::cos(a), std::sin(a)});
    }

    // Pairwise disjointness (exact segment tests) and strict containment in shield.
    for (std::size_t i = 0; i < cell.conductors.size(); ++i) {
        const auto& a = cell.conductors[i];
        for (const auto& pt : a.points)
            if (pt.norm() >= plan.shield_radius)
                throw std::runtime_error("build_symmetry_cell: conductor reaches the shield");
        for (std::size_t j = i + 1; j < cell.conductors.size(); ++j) {
            const auto& b = cell.conductors[j];
            if (a.contains(b.points.front()) || b.contains(a.points.front()))
                throw std::runtime_error("build_symmetry_cell: overlapping conductors");
            const std::size_t na = a.points.size(), nb = b.points.size();
            for (std::size_t s = 0; s < na; ++s)
                for (std::size_t t = 0; t < nb; ++t)
                    if (segments_intersect(a.points[s], a.points[(s + 1) % na],
                                           b.points[t], b.points[(t + 1) % nb]))
                        throw std::runtime_error("build_symmetry_cell: overlapping conductors");
        }
    }
    return cell;
}

}  // namespace helifem
