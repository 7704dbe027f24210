#pragma once

#include "cspin/lattice.hpp"
#include "cspin/mat2.hpp"

#include <vector>

namespace cspin {

// Semiclassical cycle analysis: the Overhauser field is replaced by a static
// classical vector and the two-pulse cycle reduces to 2x2 rotations.
struct ClassicalField {
    double a = 0.0;  // effective z field: omega + mean Overhauser z
    double b = 0.0;  // transverse Overhauser x
    double c = 0.0;  // transverse Overhauser y

    double magnitude() const;
};

// Exact cycle unitary Y(pi) U_tau Y(pi) U_tau with
// U_tau = exp(-i tau (a S_z + b S_x + c S_y)).
Mat2 exact_cycle(const ClassicalField& field, double tau);

// First-order form I - 2i n_y theta' S_y near the magic condition,
// theta' = theta - 2*pi. Throws when theta is farther than pi/4 from 2*pi.
Mat2 first_order_cycle(const ClassicalField& field, double tau);

struct SuppressionFactors {
    double hybrid = 0.0;         // |h_o^z| / (omega + mean_z)
    double uni_dd = 0.0;         // |h_o^z| / omega
    double avg_ham_coeff = 0.0;  // |mean_z * h_o^y / (omega + mean_z)|
};

// h_o^z is taken as field.a - omega - h_bar_z plus the polarized mean, i.e.
// the full z Overhauser component field.a - omega.
SuppressionFactors effective_suppression(const ClassicalField& field, double tau,
                                         double omega, double h_bar_z);

// Polarization-shifted magic condition: omega_peak = 2*pi/tau - sum_k A_k p_k / 2.
double predict_magic_peak(const HyperfineSet& couplings, const std::vector<double>& p_k,
                          double tau);

}  // namespace cspin
