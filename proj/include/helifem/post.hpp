#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helifem/fem.hpp"

// Derived quantities from a solved dof vector: point evaluation of H and
// J = curl H, Cartesian back-transforms, ohmic losses per unit length, line
// sampling, CSV and legacy VTK export.
//
// Power convention: currents are amplitude phasors, so time-averaged loss
// carries the 1/2 factor.

namespace helifem {

struct PostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveResult {
    const Mesh2D* mesh = nullptr;
    HelixParams helix;
    MaterialSpec materials;
    Excitation excitation;
    DofMap dofmap;
    std::vector<cplx> x;  // free dof values

    double loss_per_length = 0.0;            // W/m
    std::vector<double> conductor_losses;    // W/m, one per conductor
};

// Attach losses to a raw solution vector.
SolveResult make_result(const Mesh2D& m, const HelixParams& h, const MaterialSpec& mat,
                        const Excitation& exc, DofMap dofmap, std::vector<cplx> x);

// Triangle containing p, by neighbor walk with exhaustive fallback; -1 when
// outside the mesh (within tolerance tol on barycentric coordinates).
int locate_triangle(const Mesh2D& m, const Vec2& p, double tol = 1e-12);

// Field evaluation in mesh (u,v) coordinates.
Vec3c eval_H_uvw(const SolveResult& res, const Vec2& p);
Vec3c eval_J_uvw(const SolveResult& res, const Vec2& p);

// Cartesian fields at the z=0 plane (x=u, y=v there).
struct CartesianFields {
    Vec3c H;
    Vec3c J;
};
CartesianFields to_cartesian_fields(const SolveResult& res, const Vec2& p);

// P' = 1/2 sum over conductor triangles of Re[(rho_uvw curl H) . conj(curl H)],
// same quadrature as assembly.
double losses(const SolveResult& res, std::vector<double>* per_conductor = nullptr);

// Circulation-based current recovery per conductor (should reproduce the
// imposed currents to roundoff).
std::vector<cplx> recovered_currents(const SolveResult& res);

struct LineSamplePoint {
    double s = 0.0;  // arc position along the segment [m]
    Vec3c H;         // Cartesian
    double J_mag = 0.0;
};

struct LineSample {
    Vec2 p0, p1;
    std::vector<LineSamplePoint> points;
};

LineSample sample_line(const SolveResult& res, const Vec2& p0, const Vec2& p1, int n);

// columns: s, Re/Im of H_x, H_y, H_z, |J|
void write_line_csv(const LineSample& ls, std::ostream& out);

// Legacy VTK ASCII unstructured grid; cell data |J_w|, Re/Im J_w; point data
// Re/Im of the Cartesian H components.
void export_vtk(const SolveResult& res, std::ostream& out);
void export_vtk_file(const SolveResult& res, const std::string& path);

}  // namespace helifem
