#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "helifem/geometry.hpp"

// Exact symmetry-cell cross-section at z=0. Each twisted conductor is the
// sweep of a sphere of radius r_c along a helix; its cut at z=0 is the
// envelope of the family of circles obtained by slicing the spheres. The
// envelope condition g = 0, dg/dt = 0 reduces to circle/line intersections
// solvable in closed form per sweep parameter t.

namespace helifem {

using Vec2 = Eigen::Vector2d;

struct LayerSpec {
    double radius = 0.0;            // layer radius r [m], >= 0
    int count = 1;                  // conductors in the layer
    double phase = 0.0;             // phase offset [rad]
    double conductor_radius = 5e-3; // r_c [m], > 0

    void validate() const;
};

struct CablePlan {
    HelixParams helix;
    std::vector<LayerSpec> layers;
    double shield_radius = 0.0;     // PEC shield [m]
    MaterialSpec materials;

    int conductor_count() const;
    void validate() const;
};

struct EnvelopePolygon {
    std::vector<Vec2> points;   // closed CCW, last point != first
    int conductor_id = -1;
    int layer_id = -1;

    double area() const;                     // signed (positive when CCW)
    bool contains(const Vec2& p) const;      // crossing test
    bool is_simple() const;                  // no self-intersection
};

struct SymmetryCell {
    std::vector<EnvelopePolygon> conductors;
    std::vector<Vec2> shield;   // CCW circle polygon
    double shield_radius = 0.0;
};

// Envelope points at sweep parameter t for the conductor at the layer's phase
// offset. 0, 1 or 2 points; empty when the slice at t does not reach z=0.
// Degenerate case r*alpha = 0: only t = 0 contributes (the full circle); the
// function then reports the two extreme points on the line y' = 0 through the
// center, and polygon construction falls back to a plain circle.
std::vector<Vec2> envelope_points(const LayerSpec& layer, const HelixParams& h, double t);

// g(t, x, y) and dg/dt from the sphere-sweep definition, for verification.
double envelope_g(const LayerSpec& layer, const HelixParams& h, double t, const Vec2& p);
double envelope_dg_dt(const LayerSpec& layer, const HelixParams& h, double t, const Vec2& p);

// Largest |t| for which envelope points exist.
double envelope_t_max(const LayerSpec& layer, const HelixParams& h);

// Closed CCW polygon for the conductor at the layer's phase offset.
// samples >= 16. Throws on self-intersection (layer too strongly twisted).
EnvelopePolygon envelope_polygon(const LayerSpec& layer, const HelixParams& h, int samples = 256);

// All conductor polygons (rotated copies per layer) plus the shield circle.
// Throws if polygons overlap each other or reach the shield.
SymmetryCell build_symmetry_cell(const CablePlan& plan, int samples = 256);

// True when segments ab and cd properly intersect or touch.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace helifem
