#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cspin/lattice.hpp"
#include "cspin/sequences.hpp"
#include "cspin/state.hpp"

namespace cspin {

// One structured config document drives every scenario; unknown scenarios and
// malformed fields are configuration errors (CLI exit code 2).
struct ExperimentConfig {
    int schema_version = 1;
    std::string scenario;  // fid | dd | omega-sweep | t09-map | dnp | theory-check

    std::string lattice_preset = "normal";       // "" = use explicit lattice
    std::optional<LatticeSpec> lattice;

    double tau = 0.05;
    SequenceKind sequence = SequenceKind::UniDD;

    std::string bath_base = "haar";              // haar | product-random | product-up
    std::vector<double> target_p;                // polarization targets (fid, dd)
    std::vector<double> beta_values;             // beta grid (t09-map)
    std::vector<double> omega_values;            // omega grid (sweeps)

    double dt = 0.3;         // fid sampling interval
    double t_max = 100.0;    // trace horizon / censoring cap
    int sample_stride = 1;   // record every n-th cycle boundary
    double tolerance = 1e-12;

    std::uint64_t master_seed = 1;
    int realizations = 1;
    int threads = 1;
    std::string out_dir = "out";

    // dnp scenario
    double dnp_a = 1.0, dnp_tau_m = 0.05, dnp_tau_tot = 0.05, dnp_beta = 1.0;
    int dnp_cycles = 1000;

    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    LatticeSpec resolved_lattice() const;
    BathPreparation base_preparation(std::uint64_t seed) const;
};

struct SweepRow {
    std::size_t index = 0;
    double omega = 0.0;
    double beta = 0.0;
    double p_mean = 0.0;
    double t09 = 0.0;
    bool censored = false;
    int cycles = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;   // emitted to a timing sidecar, not the results CSV
    std::string error;      // nonempty marks a failed point
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::uint64_t> seed_table;
};

// Runs worker(point_index, derived_seed) over [0, n_points) on `threads`
// workers. Results are ordered by point index and per-point seeds depend only
// on the master seed and index, so the output is independent of scheduling.
// Worker exceptions are isolated into error rows.
SweepResult execute_grid(std::size_t n_points, std::uint64_t master_seed, int threads,
                         const std::function<SweepRow(std::size_t, std::uint64_t)>& worker);

// ---- scenarios -----------------------------------------------------------

int run_scenario(const ExperimentConfig& config);

void run_fid(const ExperimentConfig& config);
void run_dd(const ExperimentConfig& config);
void run_omega_sweep(const ExperimentConfig& config);
void run_t09_map(const ExperimentConfig& config);
void run_dnp_scenario(const ExperimentConfig& config);
void run_theory_check(const ExperimentConfig& config);

// ---- emission ------------------------------------------------------------

std::string format_csv_field(const std::string& raw);
std::string format_double(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const std::vector<std::uint64_t>& seed_table, double wall_seconds,
                    bool partial = false);

void write_trace_csv(const std::filesystem::path& path, const FidelityTrace& trace);

std::vector<std::string> list_scenarios();

}  // namespace cspin
