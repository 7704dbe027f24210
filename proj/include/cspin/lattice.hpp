#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cspin {

// Geometry and envelope of the hyperfine coupling map. Widths and shifts are
// measured in units of the lattice spacing.
struct LatticeSpec {
    int nx = 4;
    int ny = 5;
    double width_x = 1.5;
    double width_y = 2.0;
    double shift_x = 0.1;
    double shift_y = 0.2;
    bool exponent_half = true;  // exp(-d^2/2) when true, exp(-d^2) otherwise
    double amplitude = 1.0;

    // "normal" or "narrow" coupling-width presets.
    static LatticeSpec preset(const std::string& name);

    void validate() const;
};

struct HyperfineSet {
    std::vector<double> couplings;                         // A_k > 0
    std::vector<std::pair<double, double>> site_coords;    // row-major, x fastest

    std::size_t size() const { return couplings.size(); }
};

struct CouplingStats {
    double min = 0;
    double max = 0;
    double sum = 0;
    double sum_sq = 0;
    double t_star = 0;  // 1/sqrt(sum_k A_k^2) for a spin-1/2 bath
};

// Centered grid: x in {-(nx-1)/2, ..., +(nx-1)/2}, y likewise.
std::vector<std::pair<double, double>> build_sites(const LatticeSpec& spec);

HyperfineSet compute_couplings(const LatticeSpec& spec);

CouplingStats coupling_stats(const HyperfineSet& set);

}  // namespace cspin
