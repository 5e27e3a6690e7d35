#include "helifem/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace helifem {

cplx bessel_j0(cplx z) {
    const cplx q = -0.25 * z * z;
    cplx term{1.0, 0.0}, sum{1.0, 0.0};
    for (int m = 1; m < 200; ++m) {
        term *= q / static_cast<double>(m * m);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

cplx bessel_j1(cplx z) {
    const cplx q = -0.25 * z * z;
    cplx term = 0.5 * z, sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= q / static_cast<double>(m * (m + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double skin_depth(double omega, double resistivity, double permeability) {
    if (!(omega > 0.0)) throw std::invalid_argument("skin_depth: omega must be > 0");
    return std::sqrt(2.0 * resistivity / (omega * permeability));
}

namespace {

// k with k^2 = -j*omega*mu/rho, principal branch.
cplx wave_number(double omega, double resistivity, double permeability) {
    return std::sqrt(cplx{0.0, -omega * permeability / resistivity});
}

}  // namespace

cplx round_wire_impedance(double omega, double a, double resistivity, double permeability) {
    if (!(a > 0.0)) throw std::invalid_argument("round_wire_impedance: radius must be > 0");
    if (omega == 0.0) return {resistivity / (M_PI * a * a), 0.0};
    const cplx k = wave_number(omega, resistivity, permeability);
    const cplx ka = k * a;
    return resistivity * k / (2.0 * M_PI * a) * bessel_j0(ka) / bessel_j1(ka);
}

double round_wire_ac_dc_ratio(double omega, double a, double resistivity, double permeability) {
    const double rdc = resistivity / (M_PI * a * a);
    return round_wire_impedance(omega, a, resistivity, permeability).real() / rdc;
}

double round_wire_current_density(double omega, double a, double resistivity,
                                  double permeability, double r) {
    if (!(a > 0.0) || r < 0.0 || r > a)
        throw std::invalid_argument("round_wire_current_density: bad radius");
    if (omega == 0.0) return 1.0 / (M_PI * a * a);
    const cplx k = wave_number(omega, resistivity, permeability);
    return std::abs(k * bessel_j0(k * r) / (2.0 * M_PI * a * bessel_j1(k * a)));
}

double dc_loss_per_meter(const CablePlan& plan, const std::vector<cplx>& currents) {
    plan.validate();
    if (static_cast<int>(currents.size()) != plan.conductor_count())
        throw std::invalid_argument("dc_loss_per_meter: current count mismatch");
    const double rho = plan.materials.resistivity;
    const double tw = plan.helix.twist();
    double total = 0.0;
    std::size_t idx = 0;
    for (const auto& layer : plan.layers) {
        const double rc = layer.conductor_radius;
        const double stretch = std::sqrt(1.0 + tw * tw * layer.radius * layer.radius);
        const double r_per_m = rho * stretch / (M_PI * rc * rc);
        for (int c = 0; c < layer.count; ++c, ++idx)
            total += 0.5 * std::norm(currents[idx]) * r_per_m;
    }
    return total;
}

}  // namespace helifem
