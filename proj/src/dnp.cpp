#include "cspin/dnp.hpp"

#include <cmath>
#include <stdexcept>

namespace cspin {

void DnpParams::validate() const {
    if (!(tau_m > 0.0) || tau_m > tau_tot)
        throw std::invalid_argument("dnp: require 0 < tau_m <= tau_tot");
    if (n_cycles < 0) throw std::invalid_argument("dnp: n_cycles must be >= 0");
}

double dnp_cycle(double p, const DnpParams& params) {
    params.validate();
    if (std::abs(p) > 1.0) throw std::invalid_argument("dnp_cycle: |p| > 1");
    return p + (1.0 - p) * 0.5 * (1.0 - std::cos(params.a * params.tau_m));
}

DnpTrain dnp_train(double p0, const DnpParams& params) {
    params.validate();
    DnpTrain train;
    train.p_exact.reserve(static_cast<std::size_t>(params.n_cycles) + 1);
    train.p_closed_form.reserve(static_cast<std::size_t>(params.n_cycles) + 1);
    double p = p0;
    const double rate = 0.25 * params.a * params.a * params.tau_tot * params.tau_tot;
    for (int n = 0; n <= params.n_cycles; ++n) {
        train.p_exact.push_back(p);
        train.p_closed_form.push_back(1.0 - (1.0 - p0) * std::exp(-rate * n));
        p = dnp_cycle(p, params);
    }
    return train;
}

std::vector<double> polarization_profile(double beta, const HyperfineSet& couplings) {
    if (beta < 0.0) throw std::invalid_argument("polarization_profile: beta must be >= 0");
    std::vector<double> p_k;
    p_k.reserve(couplings.size());
    for (double a : couplings.couplings) p_k.push_back(std::tanh(beta * a * a));
    return p_k;
}

}  // namespace cspin
