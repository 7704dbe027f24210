#pragma once

#include <vector>

#include "cspin/lattice.hpp"

namespace cspin {

struct DnpParams {
    double a = 1.0;        // hyperfine coupling of the addressed nuclear spin
    double tau_m = 0.05;   // mixing time
    double tau_tot = 0.05; // full cycle time >= tau_m
    int n_cycles = 0;

    void validate() const;
};

// One inject/evolve/eject cycle: p' = p + (1-p)(1 - cos(A tau_m))/2.
double dnp_cycle(double p, const DnpParams& params);

struct DnpTrain {
    std::vector<double> p_exact;        // iterated cycles, p_exact[0] = p0
    std::vector<double> p_closed_form;  // 1 - (1-p0) exp(-A^2 tau_tot^2 n / 4)
};

DnpTrain dnp_train(double p0, const DnpParams& params);

// Per-spin polarization of the filtered equal-amplitude product state:
// p_k = tanh(beta A_k^2). Small beta reproduces p_k ~ beta A_k^2.
std::vector<double> polarization_profile(double beta, const HyperfineSet& couplings);

}  // namespace cspin
