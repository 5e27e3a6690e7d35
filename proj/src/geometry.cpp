#include "helifem/geometry.hpp"

#include <cmath>

namespace helifem {

Vec3 to_helicoidal(const Vec3& p, const HelixParams& h) {
    const double k = h.twist();
    const double c = std::cos(p.z() * k), s = std::sin(p.z() * k);
    return {p.x() * c + p.y() * s, -p.x() * s + p.y() * c, p.z()};
}

Vec3 from_helicoidal(const Vec3& q, const HelixParams& h) {
    const double k = h.twist();
    const double c = std::cos(q.z() * k), s = std::sin(q.z() * k);
    return {q.x() * c - q.y() * s, q.x() * s + q.y() * c, q.z()};
}

Mat3 jacobian_inverse_map(const Vec3& q, const HelixParams& h) {
    const double k = h.twist();
    const double u = q.x(), v = q.y();
    const double c = std::cos(q.z() * k), s = std::sin(q.z() * k);
    Mat3 J;
    J << c, -s, k * (-u * s - v * c),
         s,  c, k * ( u * c - v * s),
         0,  0, 1;
    return J;
}

Mat3 metric_product(const Vec3& q, const HelixParams& h) {
    const Mat3 J = jacobian_inverse_map(q, h);
    return J.transpose() * J;
}

Mat3 metric_product_inverse(const Vec3& q, const HelixParams& h) {
    // Closed form; det T = (det J)^2 = 1.
    const double k = h.twist();
    const double u = q.x(), v = q.y();
    Mat3 Tinv;
    Tinv << 1 + k * k * v * v, -k * k * u * v,    k * v,
            -k * k * u * v,    1 + k * k * u * u, -k * u,
            k * v,             -k * u,            1;
    return Tinv;
}

Mat3 resistivity_tensor(const Vec3& q, const HelixParams& h, const MaterialSpec& mat) {
    return mat.resistivity * metric_product(q, h);
}

Mat3 permeability_tensor(const Vec3& q, const HelixParams& h, const MaterialSpec& mat) {
    return mat.permeability * metric_product_inverse(q, h);
}

Vec3c pullback_field(const Vec3c& H_uvw, const Vec3& q, const HelixParams& h) {
    const Mat3 J = jacobian_inverse_map(q, h);
    Mat3 JinvT = J.inverse().transpose();
    return JinvT.cast<std::complex<double>>() * H_uvw;
}

Vec3c pullback_current(const Vec3c& J_uvw, const Vec3& q, const HelixParams& h) {
    const Mat3 J = jacobian_inverse_map(q, h);
    return J.cast<std::complex<double>>() * J_uvw;
}

}  // namespace helifem
