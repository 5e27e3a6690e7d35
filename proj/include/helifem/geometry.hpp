#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

// Helicoidal coordinate maps and the anisotropic pullback material tensors
// that carry the 3D-to-2D reduction. All functions are pure and thread-safe.
//
// Conventions: Cartesian coordinates (x,y,z), helicoidal coordinates (u,v,w).
// The twist rate is k = chirality * alpha / beta; a point at radius r advances
// by angle k*dz per unit length. J denotes the Jacobian of the inverse map
// (uvw -> xyz); det J = 1 identically.

namespace helifem {

using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;

struct HelixParams {
    double alpha = 0.0;   // turns per 2*pi (dimensionless, >= 0)
    double beta = 1.0;    // longitudinal length per 2*pi [m], > 0
    int chirality = +1;   // +1 right-handed, -1 left-handed

    double twist() const { return chirality * alpha / beta; }

    void validate() const {
        if (!(beta > 0.0)) throw std::invalid_argument("HelixParams: beta must be > 0");
        if (!(alpha >= 0.0)) throw std::invalid_argument("HelixParams: alpha must be >= 0");
        if (chirality != 1 && chirality != -1)
            throw std::invalid_argument("HelixParams: chirality must be +1 or -1");
    }
};

struct MaterialSpec {
    double resistivity = 1.72e-8;     // [Ohm m], conductors
    double permeability = 4.0e-7 * M_PI;  // [H/m], everywhere

    void validate() const {
        if (!(resistivity > 0.0)) throw std::invalid_argument("MaterialSpec: resistivity must be > 0");
        if (!(permeability > 0.0)) throw std::invalid_argument("MaterialSpec: permeability must be > 0");
    }
};

// xyz -> uvw
Vec3 to_helicoidal(const Vec3& p_xyz, const HelixParams& h);
// uvw -> xyz
Vec3 from_helicoidal(const Vec3& p_uvw, const HelixParams& h);

// Jacobian of the inverse map at p_uvw (columns: d(xyz)/du, /dv, /dw).
Mat3 jacobian_inverse_map(const Vec3& p_uvw, const HelixParams& h);

// T = J^T J. Independent of the w-component of p_uvw.
Mat3 metric_product(const Vec3& p_uvw, const HelixParams& h);
// T^{-1} = J^{-1} J^{-T}.
Mat3 metric_product_inverse(const Vec3& p_uvw, const HelixParams& h);

// rho_uvw = rho * J^T J / det J    (det J = 1)
Mat3 resistivity_tensor(const Vec3& p_uvw, const HelixParams& h, const MaterialSpec& mat);
// mu_uvw = mu * J^{-1} J^{-T} det J
Mat3 permeability_tensor(const Vec3& p_uvw, const HelixParams& h, const MaterialSpec& mat);

// H_xyz = J^{-T} H_uvw
Vec3c pullback_field(const Vec3c& H_uvw, const Vec3& p_uvw, const HelixParams& h);
// J_xyz = J / det J * J_uvw   (curl transforms as a two-form)
Vec3c pullback_current(const Vec3c& J_uvw, const Vec3& p_uvw, const HelixParams& h);

}  // namespace helifem
