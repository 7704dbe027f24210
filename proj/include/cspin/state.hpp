#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cspin/lattice.hpp"
#include "cspin/mat2.hpp"

namespace cspin {

// Bit layout of the (N+1)-spin register: bit k in [0, N) is bath spin k,
// bit N is the central spin. Bit value 1 encodes m = +1/2.
struct SpinRegister {
    int n_bath = 0;

    std::size_t bath_dim() const { return std::size_t(1) << n_bath; }
    std::size_t dim() const { return std::size_t(1) << (n_bath + 1); }
};

using StateVector = std::vector<cplx>;

enum class CentralSpinState { Up, Down, X, Y };

// Amplitudes (a_down, a_up) of the benchmark central-spin states.
std::array<cplx, 2> central_amplitudes(CentralSpinState s);

struct BathPreparation {
    enum class Mode { HaarRandom, ProductRandom, ProductUp, PolarizedFilter };

    Mode mode = Mode::HaarRandom;
    std::optional<std::uint64_t> seed;         // random modes
    double beta = 0.0;                         // PolarizedFilter
    std::shared_ptr<BathPreparation> base;     // PolarizedFilter

    static BathPreparation haar(std::uint64_t seed);
    static BathPreparation product_random(std::uint64_t seed);
    static BathPreparation product_up();
    static BathPreparation polarized(BathPreparation base, double beta);
};

// Bath-only state of dimension 2^N. The polarized filter multiplies each
// basis amplitude by exp(beta * sum_k A_k^2 m_k) and renormalizes.
StateVector prepare_bath(const SpinRegister& reg, const BathPreparation& bath,
                         const HyperfineSet& couplings);

// Full product state |central> (x) |bath>, unit norm.
StateVector prepare(const SpinRegister& reg, CentralSpinState central,
                    const BathPreparation& bath, const HyperfineSet& couplings);

StateVector compose(const std::array<cplx, 2>& central, const StateVector& bath);

struct Polarization {
    std::vector<double> p_k;  // 2<I_k^z> per bath spin
    double p_mean = 0.0;
};

Polarization measure_polarization(const StateVector& psi, const SpinRegister& reg);

// Partial trace over the bath: rho[s,s'] = sum_j psi[s*2^N+j] conj(psi[s'*2^N+j]).
Mat2 reduce_central(const StateVector& psi, const SpinRegister& reg);

struct BetaResult {
    double beta = 0.0;
    double p_mean = 0.0;
};

// Bisection on beta until |p_mean(beta) - target| < 1e-3.
BetaResult tune_beta_for_p(double target_p, const BathPreparation& base,
                           const HyperfineSet& couplings, const SpinRegister& reg);

double norm(const StateVector& psi);
void normalize(StateVector& psi);

}  // namespace cspin
