#include "cspin/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace cspin {

Hamiltonian::Hamiltonian(HamiltonianParams params) : params_(std::move(params)) {
    if (!std::isfinite(params_.omega))
        throw std::invalid_argument("hamiltonian: omega must be finite");
    const int n = params_.n_bath();
    const std::size_t half = std::size_t(1) << n;
    bath_diag_.resize(half);
    for (std::size_t j = 0; j < half; ++j) {
        double d = 0;
        for (int k = 0; k < n; ++k)
            d += ((j >> k) & 1) ? 0.5 * params_.couplings.couplings[k]
                                : -0.5 * params_.couplings.couplings[k];
        bath_diag_[j] = d;
    }
}

double Hamiltonian::spectral_bound() const {
    double sum = 0;
    for (double a : params_.couplings.couplings) sum += a;
    return 0.5 * std::abs(params_.omega) + 0.75 * sum;
}

void Hamiltonian::apply(const StateVector& in, StateVector& out) const {
    const int n = params_.n_bath();
    const std::size_t half = std::size_t(1) << n;
    if (in.size() != 2 * half)
        throw std::invalid_argument("apply_h: dimension mismatch");
    out.resize(in.size());

    const cplx* p0 = in.data();         // central spin down
    const cplx* p1 = in.data() + half;  // central spin up
    cplx* o0 = out.data();
    cplx* o1 = out.data() + half;
    const double* diag = bath_diag_.data();
    const double omega = params_.omega;
    const double* a = params_.couplings.couplings.data();

    // Fused single pass: each output pair (o0[j], o1[j]) accumulates its
    // diagonal term and every flip-flop contribution A_k/2 from the opposite
    // central-spin half at bath index j^(1<<k). Block size keeps the
    // accumulators in L1 while the k-streams walk the vector sequentially.
    const std::size_t block = half < 256 ? half : 256;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bs = 0; bs < static_cast<std::ptrdiff_t>(half);
         bs += static_cast<std::ptrdiff_t>(block)) {
        const std::size_t base = static_cast<std::size_t>(bs);
        cplx acc0[256], acc1[256];
        for (std::size_t i = 0; i < block; ++i) {
            const double d = omega + diag[base + i];
            acc0[i] = -0.5 * d * p0[base + i];
            acc1[i] = 0.5 * d * p1[base + i];
        }
        for (int k = 0; k < n; ++k) {
            const std::size_t bk = std::size_t(1) << k;
            const double hk = 0.5 * a[k];
            if (bk >= block) {
                const std::size_t src = base ^ bk;
                if (base & bk) {
                    // bath bit k is 1 across the block: down-half output,
                    // S_- I_k^+ sends (up, bit 0) to (down, bit 1)
                    const cplx* s = p1 + src;
                    for (std::size_t i = 0; i < block; ++i) acc0[i] += hk * s[i];
                } else {
                    const cplx* s = p0 + src;
                    for (std::size_t i = 0; i < block; ++i) acc1[i] += hk * s[i];
                }
            } else {
                for (std::size_t i0 = 0; i0 < block; i0 += 2 * bk) {
                    const cplx* s1 = p0 + base + i0 + bk;  // bit-0 run reads bit-1 partner
                    const cplx* s0 = p1 + base + i0;
                    for (std::size_t i = 0; i < bk; ++i) {
                        acc1[i0 + i] += hk * s1[i];
                        acc0[i0 + bk + i] += hk * s0[i];
                    }
                }
            }
        }
        for (std::size_t i = 0; i < block; ++i) {
            o0[base + i] = acc0[i];
            o1[base + i] = acc1[i];
        }
    }
}

StateVector apply_h(const HamiltonianParams& params, const StateVector& psi) {
    Hamiltonian h(params);
    StateVector out;
    h.apply(psi, out);
    return out;
}

double spectral_bound(const HamiltonianParams& params) {
    return Hamiltonian(params).spectral_bound();
}

std::vector<cplx> dense_matrix(const HamiltonianParams& params) {
    const int n = params.n_bath();
    if (n > 6) throw std::invalid_argument("dense_matrix: N <= 6 only");
    const std::size_t half = std::size_t(1) << n;
    const std::size_t dim = 2 * half;
    std::vector<cplx> h(dim * dim, cplx(0.0));
    const auto& a = params.couplings.couplings;

    for (std::size_t i = 0; i < dim; ++i) {
        const int s = static_cast<int>((i >> n) & 1);
        const double ms = s ? 0.5 : -0.5;
        double d = params.omega * ms;
        for (int k = 0; k < n; ++k) {
            const double mk = ((i >> k) & 1) ? 0.5 : -0.5;
            d += a[static_cast<std::size_t>(k)] * ms * mk;
        }
        h[i * dim + i] = d;
        for (int k = 0; k < n; ++k) {
            const int bk = static_cast<int>((i >> k) & 1);
            if (bk == s) continue;  // flip-flop needs opposite central and bath bits
            const std::size_t j = i ^ (half | (std::size_t(1) << k));
            h[i * dim + j] = 0.5 * a[static_cast<std::size_t>(k)];
        }
    }
    return h;
}

}  // namespace cspin
