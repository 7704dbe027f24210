#include "cspin/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cspin/rng.hpp"

namespace cspin {

std::array<cplx, 2> central_amplitudes(CentralSpinState s) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (s) {
        case CentralSpinState::Up: return {cplx(0.0), cplx(1.0)};
        case CentralSpinState::Down: return {cplx(1.0), cplx(0.0)};
        case CentralSpinState::X: return {cplx(r), cplx(r)};
        case CentralSpinState::Y: return {cplx(0.0, r), cplx(r)};
    }
    throw std::invalid_argument("unknown central spin state");
}

BathPreparation BathPreparation::haar(std::uint64_t seed) {
    BathPreparation b;
    b.mode = Mode::HaarRandom;
    b.seed = seed;
    return b;
}

BathPreparation BathPreparation::product_random(std::uint64_t seed) {
    BathPreparation b;
    b.mode = Mode::ProductRandom;
    b.seed = seed;
    return b;
}

BathPreparation BathPreparation::product_up() {
    BathPreparation b;
    b.mode = Mode::ProductUp;
    return b;
}

BathPreparation BathPreparation::polarized(BathPreparation base, double beta) {
    if (beta < 0.0) throw std::invalid_argument("polarized filter: beta must be >= 0");
    BathPreparation b;
    b.mode = Mode::PolarizedFilter;
    b.beta = beta;
    b.base = std::make_shared<BathPreparation>(std::move(base));
    return b;
}

double norm(const StateVector& psi) {
    double s = 0;
    for (const cplx& a : psi) s += std::norm(a);
    return std::sqrt(s);
}

void normalize(StateVector& psi) {
    const double n = norm(psi);
    if (!(n > 0.0)) throw std::runtime_error("cannot normalize a zero state");
    const double inv = 1.0 / n;
    for (cplx& a : psi) a *= inv;
}

namespace {

StateVector haar_bath(const SpinRegister& reg, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector psi(reg.bath_dim());
    for (cplx& a : psi) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = cplx(re, im);
    }
    normalize(psi);
    return psi;
}

// Product of equatorial single-spin states (|up> + e^{i phi_k} |down>)/sqrt(2).
// Every bath spin has p_k = 0 and equal-modulus amplitudes, so the polarized
// filter acts on it in closed form.
StateVector product_random_bath(const SpinRegister& reg, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    std::vector<cplx> down_amp(reg.n_bath);
    for (int k = 0; k < reg.n_bath; ++k)
        down_amp[k] = std::polar(1.0, uni(rng));

    StateVector psi(reg.bath_dim());
    const double scale = std::pow(0.5, 0.5 * reg.n_bath);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        cplx a = scale;
        for (int k = 0; k < reg.n_bath; ++k)
            if (!((j >> k) & 1)) a *= down_amp[k];
        psi[j] = a;
    }
    return psi;
}

StateVector product_up_bath(const SpinRegister& reg) {
    StateVector psi(reg.bath_dim());
    psi[reg.bath_dim() - 1] = 1.0;  // all bath bits set
    return psi;
}

void apply_polarized_filter(StateVector& psi, const SpinRegister& reg,
                            const HyperfineSet& couplings, double beta) {
    // Diagonal weight exp(beta * sum_k A_k^2 m_k), m_k = +-1/2.
    for (std::size_t j = 0; j < psi.size(); ++j) {
        double w = 0;
        for (int k = 0; k < reg.n_bath; ++k) {
            const double a2 = couplings.couplings[k] * couplings.couplings[k];
            w += ((j >> k) & 1) ? 0.5 * a2 : -0.5 * a2;
        }
        psi[j] *= std::exp(beta * w);
    }
    normalize(psi);
}

}  // namespace

StateVector prepare_bath(const SpinRegister& reg, const BathPreparation& bath,
                         const HyperfineSet& couplings) {
    if (static_cast<int>(couplings.size()) != reg.n_bath)
        throw std::invalid_argument("coupling count does not match register size");
    switch (bath.mode) {
        case BathPreparation::Mode::HaarRandom:
            if (!bath.seed) throw std::invalid_argument("HaarRandom bath requires a seed");
            return haar_bath(reg, *bath.seed);
        case BathPreparation::Mode::ProductRandom:
            if (!bath.seed) throw std::invalid_argument("ProductRandom bath requires a seed");
            return product_random_bath(reg, *bath.seed);
        case BathPreparation::Mode::ProductUp:
            return product_up_bath(reg);
        case BathPreparation::Mode::PolarizedFilter: {
            if (!bath.base) throw std::invalid_argument("PolarizedFilter requires a base preparation");
            StateVector psi = prepare_bath(reg, *bath.base, couplings);
            if (bath.beta != 0.0) apply_polarized_filter(psi, reg, couplings, bath.beta);
            return psi;
        }
    }
    throw std::invalid_argument("unknown bath preparation mode");
}

StateVector compose(const std::array<cplx, 2>& central, const StateVector& bath) {
    StateVector psi(2 * bath.size());
    for (std::size_t j = 0; j < bath.size(); ++j) {
        psi[j] = central[0] * bath[j];
        psi[bath.size() + j] = central[1] * bath[j];
    }
    return psi;
}

StateVector prepare(const SpinRegister& reg, CentralSpinState central,
                    const BathPreparation& bath, const HyperfineSet& couplings) {
    return compose(central_amplitudes(central), prepare_bath(reg, bath, couplings));
}

Polarization measure_polarization(const StateVector& psi, const SpinRegister& reg) {
    const double n = norm(psi);
    if (std::abs(n - 1.0) > 1e-8)
        throw std::invalid_argument("measure_polarization: state is not unit norm");
    Polarization pol;
    pol.p_k.assign(reg.n_bath, 0.0);
    const bool full = psi.size() == reg.dim();
    if (!full && psi.size() != reg.bath_dim())
        throw std::invalid_argument("measure_polarization: dimension mismatch");
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]);
        if (w == 0.0) continue;
        for (int k = 0; k < reg.n_bath; ++k)
            pol.p_k[k] += ((i >> k) & 1) ? w : -w;
    }
    for (double p : pol.p_k) pol.p_mean += p;
    if (reg.n_bath > 0) pol.p_mean /= reg.n_bath;
    return pol;
}

Mat2 reduce_central(const StateVector& psi, const SpinRegister& reg) {
    if (psi.size() != reg.dim())
        throw std::invalid_argument("reduce_central: dimension mismatch");
    const std::size_t half = reg.bath_dim();
    cplx r00 = 0, r11 = 0, r01 = 0;
    for (std::size_t j = 0; j < half; ++j) {
        const cplx d = psi[j];
        const cplx u = psi[half + j];
        r00 += d * std::conj(d);
        r11 += u * std::conj(u);
        r01 += d * std::conj(u);
    }
    Mat2 rho;
    rho(0, 0) = r00;
    rho(0, 1) = r01;
    rho(1, 0) = std::conj(r01);
    rho(1, 1) = r11;
    return rho;
}

BetaResult tune_beta_for_p(double target_p, const BathPreparation& base,
                           const HyperfineSet& couplings, const SpinRegister& reg) {
    if (target_p < 0.0 || target_p >= 1.0)
        throw std::invalid_argument("tune_beta_for_p: target must be in [0, 1)");

    auto p_of = [&](double beta) {
        const BathPreparation prep =
            beta == 0.0 ? base : BathPreparation::polarized(base, beta);
        const StateVector psi = prepare_bath(reg, prep, couplings);
        return measure_polarization(psi, reg).p_mean;
    };

    if (target_p == 0.0) return {0.0, p_of(0.0)};

    double lo = 0.0, hi = 1.0;
    double p_hi = p_of(hi);
    int grow = 0;
    while (p_hi < target_p) {
        hi *= 2.0;
        p_hi = p_of(hi);
        if (++grow > 60)
            throw std::runtime_error("tune_beta_for_p: target polarization unreachable");
    }
    double p_mid = p_hi, mid = hi;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        p_mid = p_of(mid);
        if (std::abs(p_mid - target_p) < 1e-3) break;
        (p_mid < target_p ? lo : hi) = mid;
    }
    if (std::abs(p_mid - target_p) >= 1e-3)
        throw std::runtime_error("tune_beta_for_p: bisection did not converge");
    return {mid, p_mid};
}

}  // namespace cspin
