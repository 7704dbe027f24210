#include "cspin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cspin {

double fidelity(const Mat2& rho0, const Mat2& rho_t) {
    for (const Mat2* rho : {&rho0, &rho_t})
        if (std::abs(rho->trace() - cplx(1.0)) > 1e-6)
            throw std::invalid_argument("fidelity: density matrix trace is not 1");
    cplx f = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) f += rho0(a, b) * rho_t(b, a);
    return f.real();
}

std::vector<double> worst_case(const std::array<std::vector<double>, 4>& traces) {
    const std::size_t n = traces[0].size();
    for (const auto& t : traces)
        if (t.size() != n) throw std::invalid_argument("worst_case: grid mismatch");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::min({traces[0][i], traces[1][i], traces[2][i], traces[3][i]});
    return out;
}

Crossing t_threshold(const std::vector<double>& times, const std::vector<double>& series,
                     double level) {
    if (times.empty() || times.size() != series.size())
        throw std::invalid_argument("t_threshold: empty or mismatched trace");
    if (series[0] < level) return {times[0], false, times.back()};
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] < level) {
            const double f0 = series[i - 1], f1 = series[i];
            const double w = (f0 - level) / (f0 - f1);
            return {times[i - 1] + w * (times[i] - times[i - 1]), false, times.back()};
        }
    }
    return {times.back(), true, times.back()};
}

std::size_t Spectrum::peak_bin() const {
    if (magnitude.empty()) throw std::runtime_error("empty spectrum");
    return static_cast<std::size_t>(
        std::max_element(magnitude.begin(), magnitude.end()) - magnitude.begin());
}

double Spectrum::peak_half_height_width() const {
    const std::size_t p = peak_bin();
    const double half = 0.5 * magnitude[p];
    std::size_t lo = p, hi = p;
    while (lo > 0 && magnitude[lo] > half) --lo;
    while (hi + 1 < magnitude.size() && magnitude[hi] > half) ++hi;

    auto interp = [&](std::size_t a, std::size_t b) {
        // crossing of the half level between bins a and b
        const double ma = magnitude[a], mb = magnitude[b];
        if (ma == mb) return omega[a];
        const double w = (ma - half) / (ma - mb);
        return omega[a] + w * (omega[b] - omega[a]);
    };
    const double left = lo == p ? omega[p] : interp(lo + 1, lo);
    const double right = hi == p ? omega[p] : interp(hi - 1, hi);
    return right - left;
}

Spectrum spectrum(const std::vector<double>& times, const std::vector<double>& series,
                  SpectrumWindow window) {
    const std::size_t n = series.size();
    if (n < 2 || times.size() != n)
        throw std::invalid_argument("spectrum: need a uniformly sampled series");
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("spectrum: non-uniform time grid");

    double mean = 0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (window == SpectrumWindow::Hann)
            w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n - 1)));
        x[i] = (series[i] - mean) * w;
    }

    Spectrum sp;
    const std::size_t n_bins = n / 2 + 1;
    sp.omega.resize(n_bins);
    sp.magnitude.resize(n_bins);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    for (std::size_t b = 0; b < n_bins; ++b) {
        cplx acc = 0;
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(b) /
                             static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::polar(1.0, phase * static_cast<double>(i));
        sp.omega[b] = base * static_cast<double>(b);
        sp.magnitude[b] = std::abs(acc);
    }
    return sp;
}

OverhauserStats overhauser_stats(const HyperfineSet& couplings,
                                 const std::vector<double>& p_k) {
    if (couplings.size() != p_k.size())
        throw std::invalid_argument("overhauser_stats: length mismatch");
    OverhauserStats st;
    double var_z = 0, sum_sq = 0;
    for (std::size_t k = 0; k < p_k.size(); ++k) {
        if (std::abs(p_k[k]) > 1.0 + 1e-12)
            throw std::invalid_argument("overhauser_stats: |p_k| > 1");
        const double a = couplings.couplings[k];
        st.mean_z += a * p_k[k];
        var_z += a * a * (1.0 - p_k[k] * p_k[k]);
        sum_sq += a * a;
    }
    st.mean_z *= 0.5;
    st.fluct_z = 0.5 * std::sqrt(std::max(0.0, var_z));
    st.fluct_xy = 0.5 * std::sqrt(sum_sq);
    return st;
}

}  // namespace cspin
