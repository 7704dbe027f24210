#include "cspin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspin {

LatticeSpec LatticeSpec::preset(const std::string& name) {
    LatticeSpec spec;
    if (name == "normal") {
        spec.width_x = 1.5;
        spec.width_y = 2.0;
    } else if (name == "narrow") {
        spec.width_x = 1.5 / std::sqrt(2.0);
        spec.width_y = std::sqrt(2.0);
    } else {
        throw std::invalid_argument("unknown lattice preset: " + name);
    }
    return spec;
}

void LatticeSpec::validate() const {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("lattice site counts must be >= 1");
    if (!(width_x > 0.0) || !(width_y > 0.0))
        throw std::invalid_argument("lattice widths must be strictly positive");
    if (!(amplitude > 0.0))
        throw std::invalid_argument("coupling amplitude must be positive");
}

std::vector<std::pair<double, double>> build_sites(const LatticeSpec& spec) {
    spec.validate();
    std::vector<std::pair<double, double>> coords;
    coords.reserve(static_cast<std::size_t>(spec.nx) * spec.ny);
    const double cx = 0.5 * (spec.nx - 1);
    const double cy = 0.5 * (spec.ny - 1);
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            coords.emplace_back(ix - cx, iy - cy);
    return coords;
}

HyperfineSet compute_couplings(const LatticeSpec& spec) {
    HyperfineSet set;
    set.site_coords = build_sites(spec);
    set.couplings.reserve(set.site_coords.size());
    const double scale = spec.exponent_half ? 0.5 : 1.0;
    for (const auto& [x, y] : set.site_coords) {
        const double dx = (x - spec.shift_x) / spec.width_x;
        const double dy = (y - spec.shift_y) / spec.width_y;
        set.couplings.push_back(spec.amplitude * std::exp(-(dx * dx + dy * dy) * scale));
    }
    return set;
}

CouplingStats coupling_stats(const HyperfineSet& set) {
    if (set.couplings.empty())
        throw std::invalid_argument("coupling_stats: empty hyperfine set");
    CouplingStats stats;
    stats.min = *std::min_element(set.couplings.begin(), set.couplings.end());
    stats.max = *std::max_element(set.couplings.begin(), set.couplings.end());
    for (double a : set.couplings) {
        stats.sum += a;
        stats.sum_sq += a * a;
    }
    stats.t_star = 1.0 / std::sqrt(stats.sum_sq);
    return stats;
}

}  // namespace cspin
