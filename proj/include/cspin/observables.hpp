#pragma once

#include <vector>

#include "cspin/lattice.hpp"
#include "cspin/mat2.hpp"

namespace cspin {

// F = Tr(rho0 rho_t); both arguments hermitian with unit trace.
double fidelity(const Mat2& rho0, const Mat2& rho_t);

// Pointwise minimum over the four per-state series (identical time grids).
std::vector<double> worst_case(const std::array<std::vector<double>, 4>& traces);

struct Crossing {
    double time = 0.0;    // first crossing below the level, linearly interpolated
    bool censored = false;
    double t_max = 0.0;   // horizon used when censored
};

Crossing t_threshold(const std::vector<double>& times, const std::vector<double>& series,
                     double level = 0.9);

enum class SpectrumWindow { None, Hann };

struct Spectrum {
    std::vector<double> omega;      // angular frequency, 2*pi*bin/duration
    std::vector<double> magnitude;  // DFT magnitude of the mean-subtracted series

    std::size_t peak_bin() const;
    // Width (in angular frequency) of the dominant peak at half its height.
    double peak_half_height_width() const;
};

Spectrum spectrum(const std::vector<double>& times, const std::vector<double>& series,
                  SpectrumWindow window = SpectrumWindow::None);

struct OverhauserStats {
    double mean_z = 0.0;   // sum_k A_k p_k / 2
    double fluct_z = 0.0;  // sqrt(sum_k A_k^2 (1 - p_k^2)) / 2
    double fluct_xy = 0.0; // sqrt(sum_k A_k^2) / 2
};

OverhauserStats overhauser_stats(const HyperfineSet& couplings,
                                 const std::vector<double>& p_k);

}  // namespace cspin
