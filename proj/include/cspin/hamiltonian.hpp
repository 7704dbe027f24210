#pragma once

#include <vector>

#include "cspin/lattice.hpp"
#include "cspin/state.hpp"

namespace cspin {

struct HamiltonianParams {
    double omega = 0.0;  // z bias, may be negative for reversed-field segments
    HyperfineSet couplings;

    int n_bath() const { return static_cast<int>(couplings.size()); }
};

// Matrix-free H = omega*S_z + sum_k A_k S.I_k. The bath diagonal
// sum_k A_k m_k is tabulated once per coupling set; the flip-flop part is a
// fused single pass over amplitude pairs, so auxiliary memory is the table
// plus the output vector.
class Hamiltonian {
public:
    explicit Hamiltonian(HamiltonianParams params);

    void apply(const StateVector& in, StateVector& out) const;

    // Certified spectral radius bound: |omega|/2 + (3/4) sum_k A_k.
    double spectral_bound() const;

    const HamiltonianParams& params() const { return params_; }
    SpinRegister reg() const { return SpinRegister{params_.n_bath()}; }

private:
    HamiltonianParams params_;
    std::vector<double> bath_diag_;  // sum_k A_k m_k per bath configuration
};

StateVector apply_h(const HamiltonianParams& params, const StateVector& psi);

double spectral_bound(const HamiltonianParams& params);

// Dense test oracle, N <= 6. Row-major 2^(N+1) square matrix.
std::vector<cplx> dense_matrix(const HamiltonianParams& params);

}  // namespace cspin
