#include "cspin/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cspin {

double ClassicalField::magnitude() const {
    return std::sqrt(a * a + b * b + c * c);
}

namespace {

// exp(-i (theta/2) n.sigma) = cos(theta/2) I - i sin(theta/2) n.sigma,
// written in the (down, up) basis used everywhere else.
Mat2 axis_rotation(double nx, double ny, double nz, double theta) {
    const cplx i(0.0, 1.0);
    const double ch = std::cos(0.5 * theta);
    const double sh = std::sin(0.5 * theta);
    Mat2 u;
    // sigma_z = diag(-1, +1) for (down, up); sigma_x off-diagonal;
    // sigma_y = [[0, i], [-i, 0]] in this ordering.
    u(0, 0) = ch + i * sh * nz;
    u(1, 1) = ch - i * sh * nz;
    u(0, 1) = -i * sh * nx + sh * ny;
    u(1, 0) = -i * sh * nx - sh * ny;
    return u;
}

}  // namespace

Mat2 exact_cycle(const ClassicalField& field, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("exact_cycle: tau must be > 0");
    const double mag = field.magnitude();
    if (!(mag > 0.0)) throw std::invalid_argument("exact_cycle: zero field");
    const double theta = tau * mag;
    const Mat2 u_tau =
        axis_rotation(field.b / mag, field.c / mag, field.a / mag, theta);
    const Mat2 pulse = axis_rotation(0.0, 1.0, 0.0, std::numbers::pi);
    return pulse * u_tau * pulse * u_tau;
}

Mat2 first_order_cycle(const ClassicalField& field, double tau) {
    const double mag = field.magnitude();
    if (!(mag > 0.0)) throw std::invalid_argument("first_order_cycle: zero field");
    const double theta = tau * mag;
    const double theta_p = theta - 2.0 * std::numbers::pi;
    if (std::abs(theta_p) > 0.25 * std::numbers::pi)
        throw std::invalid_argument(
            "first_order_cycle: rotation angle too far from the magic condition");
    const double ny = field.c / mag;
    // I - 2 i n_y theta' S_y; S_y = sigma_y / 2.
    Mat2 u = Mat2::identity();
    u(0, 1) += ny * theta_p;
    u(1, 0) += -ny * theta_p;
    return u;
}

SuppressionFactors effective_suppression(const ClassicalField& field, double tau,
                                         double omega, double h_bar_z) {
    (void)tau;
    const double h_oz = field.a - omega;  // full z Overhauser component
    const double denom = omega + h_bar_z;
    if (!(denom > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("effective_suppression: vanishing effective field");
    SuppressionFactors s;
    s.hybrid = std::abs(h_oz) / denom;
    s.uni_dd = std::abs(h_oz) / omega;
    s.avg_ham_coeff = std::abs(h_bar_z * field.c / denom);
    return s;
}

double predict_magic_peak(const HyperfineSet& couplings, const std::vector<double>& p_k,
                          double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("predict_magic_peak: tau must be > 0");
    if (couplings.size() != p_k.size())
        throw std::invalid_argument("predict_magic_peak: length mismatch");
    double mean_z = 0;
    for (std::size_t k = 0; k < p_k.size(); ++k)
        mean_z += couplings.couplings[k] * p_k[k];
    mean_z *= 0.5;
    return 2.0 * std::numbers::pi / tau - mean_z;
}

}  // namespace cspin
