#include "cspin/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cspin/dnp.hpp"
#include "cspin/observables.hpp"
#include "cspin/rng.hpp"
#include "cspin/theory.hpp"

namespace cspin {

using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "cspin 0.1.0";
constexpr const char* kRngName = "std::mt19937_64; per-point seeds via splitmix64";

std::atomic<bool> g_cancelled{false};

void handle_signal(int) { g_cancelled.store(true); }

void install_signal_handlers() {
    static bool done = false;
    if (done) return;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    done = true;
}

LatticeSpec lattice_from_json(const json& j) {
    LatticeSpec spec;
    if (j.contains("preset")) spec = LatticeSpec::preset(j.at("preset").get<std::string>());
    if (j.contains("nx")) spec.nx = j.at("nx").get<int>();
    if (j.contains("ny")) spec.ny = j.at("ny").get<int>();
    if (j.contains("width_x")) spec.width_x = j.at("width_x").get<double>();
    if (j.contains("width_y")) spec.width_y = j.at("width_y").get<double>();
    if (j.contains("shift_x")) spec.shift_x = j.at("shift_x").get<double>();
    if (j.contains("shift_y")) spec.shift_y = j.at("shift_y").get<double>();
    if (j.contains("exponent_half")) spec.exponent_half = j.at("exponent_half").get<bool>();
    if (j.contains("amplitude")) spec.amplitude = j.at("amplitude").get<double>();
    return spec;
}

json lattice_to_json(const LatticeSpec& spec) {
    return json{{"nx", spec.nx},
                {"ny", spec.ny},
                {"width_x", spec.width_x},
                {"width_y", spec.width_y},
                {"shift_x", spec.shift_x},
                {"shift_y", spec.shift_y},
                {"exponent_half", spec.exponent_half},
                {"amplitude", spec.amplitude}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.schema_version = j.value("schema_version", 1);
        if (c.schema_version != 1)
            throw std::invalid_argument("config: unsupported schema_version");
        c.scenario = j.at("scenario").get<std::string>();
        if (j.contains("lattice")) {
            if (j.at("lattice").is_string()) {
                c.lattice_preset = j.at("lattice").get<std::string>();
            } else {
                c.lattice_preset.clear();
                c.lattice = lattice_from_json(j.at("lattice"));
            }
        }
        if (j.contains("sequence")) {
            const json& s = j.at("sequence");
            if (s.contains("kind")) c.sequence = sequence_kind_from_string(s.at("kind"));
            if (s.contains("tau")) c.tau = s.at("tau").get<double>();
        }
        if (j.contains("bath")) {
            const json& b = j.at("bath");
            if (b.contains("base")) c.bath_base = b.at("base").get<std::string>();
            if (b.contains("target_p")) c.target_p = b.at("target_p").get<std::vector<double>>();
            if (b.contains("beta_values"))
                c.beta_values = b.at("beta_values").get<std::vector<double>>();
        }
        if (j.contains("time")) {
            const json& t = j.at("time");
            if (t.contains("dt")) c.dt = t.at("dt").get<double>();
            if (t.contains("t_max")) c.t_max = t.at("t_max").get<double>();
            if (t.contains("sample_stride")) c.sample_stride = t.at("sample_stride").get<int>();
            if (t.contains("tolerance")) c.tolerance = t.at("tolerance").get<double>();
        }
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            if (g.contains("omega_values"))
                c.omega_values = g.at("omega_values").get<std::vector<double>>();
            if (g.contains("beta_values"))
                c.beta_values = g.at("beta_values").get<std::vector<double>>();
        }
        if (j.contains("seeds")) {
            const json& s = j.at("seeds");
            if (s.contains("master")) c.master_seed = s.at("master").get<std::uint64_t>();
            if (s.contains("realizations")) c.realizations = s.at("realizations").get<int>();
        }
        if (j.contains("threads")) c.threads = j.at("threads").get<int>();
        if (j.contains("output")) c.out_dir = j.at("output").get<std::string>();
        if (j.contains("dnp")) {
            const json& d = j.at("dnp");
            if (d.contains("a")) c.dnp_a = d.at("a").get<double>();
            if (d.contains("tau_m")) c.dnp_tau_m = d.at("tau_m").get<double>();
            if (d.contains("tau_tot")) c.dnp_tau_tot = d.at("tau_tot").get<double>();
            if (d.contains("n_cycles")) c.dnp_cycles = d.at("n_cycles").get<int>();
            if (d.contains("beta")) c.dnp_beta = d.at("beta").get<double>();
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (c.realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
    if (c.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    if (!(c.tau > 0.0)) throw std::invalid_argument("config: sequence.tau must be > 0");
    if (!(c.dt > 0.0)) throw std::invalid_argument("config: time.dt must be > 0");
    if (!(c.t_max > 0.0)) throw std::invalid_argument("config: time.t_max must be > 0");
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["schema_version"] = schema_version;
    j["scenario"] = scenario;
    if (!lattice_preset.empty())
        j["lattice"] = lattice_preset;
    else
        j["lattice"] = lattice_to_json(*lattice);
    j["sequence"] = {{"kind", to_string(sequence)}, {"tau", tau}};
    j["bath"] = {{"base", bath_base}, {"target_p", target_p}};
    j["time"] = {{"dt", dt},
                 {"t_max", t_max},
                 {"sample_stride", sample_stride},
                 {"tolerance", tolerance}};
    j["grid"] = {{"omega_values", omega_values}, {"beta_values", beta_values}};
    j["seeds"] = {{"master", master_seed}, {"realizations", realizations}};
    j["threads"] = threads;
    j["output"] = out_dir;
    j["dnp"] = {{"a", dnp_a},
                {"tau_m", dnp_tau_m},
                {"tau_tot", dnp_tau_tot},
                {"n_cycles", dnp_cycles},
                {"beta", dnp_beta}};
    return j.dump(2);
}

LatticeSpec ExperimentConfig::resolved_lattice() const {
    if (!lattice_preset.empty()) return LatticeSpec::preset(lattice_preset);
    if (!lattice) throw std::invalid_argument("config: no lattice given");
    return *lattice;
}

BathPreparation ExperimentConfig::base_preparation(std::uint64_t seed) const {
    if (bath_base == "haar") return BathPreparation::haar(seed);
    if (bath_base == "product-random") return BathPreparation::product_random(seed);
    if (bath_base == "product-up") return BathPreparation::product_up();
    throw std::invalid_argument("config: unknown bath.base: " + bath_base);
}

SweepResult execute_grid(std::size_t n_points, std::uint64_t master_seed, int threads,
                         const std::function<SweepRow(std::size_t, std::uint64_t)>& worker) {
    install_signal_handlers();
    SweepResult result;
    result.rows.resize(n_points);
    result.seed_table.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        result.seed_table[i] = derive_seed(master_seed, i);

    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_points || g_cancelled.load()) return;
            const auto start = std::chrono::steady_clock::now();
            try {
                result.rows[i] = worker(i, result.seed_table[i]);
            } catch (const std::exception& e) {
                result.rows[i] = SweepRow{};
                result.rows[i].error = e.what();
            }
            result.rows[i].index = i;
            result.rows[i].seed = result.seed_table[i];
            result.rows[i].wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
        }
    };

    const int n_threads = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(n_points, 1));
    if (n_threads <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    return result;
}

// ---- emission --------------------------------------------------------------

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char ch : raw) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_csv_field(row[i]);
        }
        out << "\r\n";
    };
    emit_row(header);
    for (const auto& row : rows) emit_row(row);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.rows.size());
    for (const SweepRow& r : result.rows) {
        rows.push_back({std::to_string(r.index), format_double(r.omega),
                        format_double(r.beta), format_double(r.p_mean),
                        format_double(r.t09), r.censored ? "1" : "0",
                        std::to_string(r.cycles), std::to_string(r.seed), r.error});
    }
    write_csv(path, {"index", "omega", "beta", "p_mean", "t09", "censored", "cycles",
                     "seed", "error"},
              rows);
}

void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const std::vector<std::uint64_t>& seed_table, double wall_seconds,
                    bool partial) {
    json j;
    j["tool"] = kToolVersion;
    j["rng"] = kRngName;
    j["config"] = json::parse(config.to_json_text());
    j["master_seed"] = config.master_seed;
    j["seed_table"] = seed_table;
    j["wall_seconds"] = wall_seconds;
    j["partial"] = partial;
    j["notes"] = {"spectra are computed from the X-state fidelity series by default",
                  "timings are written to a sidecar so result CSVs are reproducible"};
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << j.dump(2) << "\n";
}

void write_trace_csv(const std::filesystem::path& path, const FidelityTrace& trace) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.times.size());
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        rows.push_back({format_double(trace.times[i]), format_double(trace.per_state[0][i]),
                        format_double(trace.per_state[1][i]),
                        format_double(trace.per_state[2][i]),
                        format_double(trace.per_state[3][i]), format_double(trace.worst[i])});
    }
    write_csv(path, {"t", "f_up", "f_down", "f_x", "f_y", "f_worst"}, rows);
}

std::vector<std::string> list_scenarios() {
    return {"fid", "dd", "omega-sweep", "t09-map", "dnp", "theory-check"};
}

// ---- scenario helpers ------------------------------------------------------

namespace {

struct PreparedBath {
    StateVector state;
    double beta = 0.0;
    double p_mean = 0.0;
};

PreparedBath bath_for_target_p(const ExperimentConfig& config, double target_p,
                               std::uint64_t seed, const HyperfineSet& couplings,
                               const SpinRegister& reg) {
    PreparedBath out;
    if (target_p >= 1.0) {
        out.state = prepare_bath(reg, BathPreparation::product_up(), couplings);
        out.beta = std::numeric_limits<double>::infinity();
    } else if (target_p <= 0.0) {
        out.state = prepare_bath(reg, config.base_preparation(seed), couplings);
    } else {
        const BathPreparation base = config.base_preparation(seed);
        const BetaResult tuned = tune_beta_for_p(target_p, base, couplings, reg);
        out.beta = tuned.beta;
        out.state = prepare_bath(reg, BathPreparation::polarized(base, tuned.beta), couplings);
    }
    out.p_mean = measure_polarization(out.state, reg).p_mean;
    return out;
}

PreparedBath bath_for_beta(const ExperimentConfig& config, double beta, std::uint64_t seed,
                           const HyperfineSet& couplings, const SpinRegister& reg) {
    PreparedBath out;
    out.beta = beta;
    const BathPreparation base = config.base_preparation(seed);
    const BathPreparation prep =
        beta > 0.0 ? BathPreparation::polarized(base, beta) : base;
    out.state = prepare_bath(reg, prep, couplings);
    out.p_mean = measure_polarization(out.state, reg).p_mean;
    return out;
}

std::string p_label(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", p);
    return buf;
}

double magic_omega(double tau) { return 2.0 * std::numbers::pi / tau; }

SweepRow t09_point(const ExperimentConfig& config, double omega, double beta,
                   std::uint64_t seed, const HyperfineSet& couplings,
                   const SpinRegister& reg) {
    const PreparedBath bath = bath_for_beta(config, beta, seed, couplings, reg);
    SequenceSpec seq;
    seq.kind = config.sequence == SequenceKind::FID ? SequenceKind::UniDD : config.sequence;
    seq.tau = config.tau;
    seq.omega = omega;
    const Schedule probe = compile({seq.kind, seq.tau, 1, omega});
    const double cycle_t = probe.total_duration();
    seq.cycles = std::max(1, static_cast<int>(std::ceil(config.t_max / cycle_t)));
    const Schedule schedule = compile(seq);

    HamiltonianParams params{omega, couplings};
    RunOptions opts;
    opts.tolerance = config.tolerance;
    opts.sample_stride = config.sample_stride;
    opts.early_stop_level = 0.9;
    const FidelityTrace trace = run_all_states(schedule, params, bath.state, opts);
    const Crossing crossing = t_threshold(trace.times, trace.worst, 0.9);

    SweepRow row;
    row.omega = omega;
    row.beta = beta;
    row.p_mean = bath.p_mean;
    row.t09 = crossing.censored ? config.t_max : crossing.time;
    row.censored = crossing.censored;
    row.cycles = seq.cycles;
    return row;
}

}  // namespace

void run_fid(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const LatticeSpec lattice = config.resolved_lattice();
    const HyperfineSet couplings = compute_couplings(lattice);
    const SpinRegister reg{static_cast<int>(couplings.size())};
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    std::vector<double> targets = config.target_p;
    if (targets.empty()) targets = {0.0, 0.6, 1.0};
    const int cycles = std::max(1, static_cast<int>(std::round(config.t_max / config.dt)));
    const Schedule schedule = compile({SequenceKind::FID, config.dt, cycles, 0.0});

    std::vector<std::uint64_t> seed_table;
    std::vector<std::vector<std::string>> summary;
    std::size_t point = 0;
    for (double target : targets) {
        for (int r = 0; r < config.realizations; ++r, ++point) {
            const std::uint64_t seed = derive_seed(config.master_seed, point);
            seed_table.push_back(seed);
            const PreparedBath bath = bath_for_target_p(config, target, seed, couplings, reg);
            HamiltonianParams params{0.0, couplings};
            RunOptions opts;
            opts.tolerance = config.tolerance;
            const FidelityTrace trace = run_all_states(schedule, params, bath.state, opts);

            const std::string tag = "p" + p_label(target) + "_r" + std::to_string(r);
            write_trace_csv(dir / ("fid_trace_" + tag + ".csv"), trace);

            const Spectrum sp = spectrum(trace.times, trace.per_state[2]);
            std::vector<std::vector<std::string>> sp_rows;
            for (std::size_t b = 0; b < sp.omega.size(); ++b)
                sp_rows.push_back({format_double(sp.omega[b]), format_double(sp.magnitude[b])});
            write_csv(dir / ("fid_spectrum_" + tag + ".csv"), {"omega", "magnitude"}, sp_rows);

            const Polarization pol =
                measure_polarization(bath.state, reg);
            const OverhauserStats ov = overhauser_stats(couplings, pol.p_k);
            summary.push_back({tag, format_double(target), format_double(bath.p_mean),
                               format_double(bath.beta), format_double(ov.mean_z),
                               format_double(ov.fluct_z),
                               format_double(sp.omega[sp.peak_bin()])});
        }
    }
    write_csv(dir / "fid_summary.csv",
              {"run", "target_p", "p_mean", "beta", "overhauser_mean_z",
               "overhauser_fluct_z", "spectrum_peak_omega"},
              summary);
    write_manifest(dir, config, seed_table,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count());
}

void run_dd(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    struct DdRun {
        std::string tag;
        std::string preset;
        double omega_offset;  // relative to the (possibly shifted) magic value
        double target_p;
        SequenceKind kind;
    };
    std::vector<DdRun> runs;
    for (const std::string& preset : {"normal", "narrow"}) {
        for (double off : {0.0, 1.0, -1.0, 2.0, -2.0})
            runs.push_back({"unidd_" + preset + "_off" + p_label(off), preset, off, 0.0,
                            SequenceKind::UniDD});
        for (double p : {0.0, 0.6, 1.0})
            runs.push_back({"hybrid_" + preset + "_p" + p_label(p), preset, 0.0, p,
                            SequenceKind::UniDD});
        runs.push_back({"fid_" + preset, preset, 0.0, 0.0, SequenceKind::FID});
    }

    std::vector<std::uint64_t> seed_table;
    std::vector<std::vector<std::string>> summary;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const DdRun& rn = runs[i];
        const std::uint64_t seed = derive_seed(config.master_seed, i);
        seed_table.push_back(seed);

        const HyperfineSet couplings = compute_couplings(LatticeSpec::preset(rn.preset));
        const SpinRegister reg{static_cast<int>(couplings.size())};
        const PreparedBath bath = bath_for_target_p(config, rn.target_p, seed, couplings, reg);

        // Re-match the magic condition against the polarized Overhauser mean.
        const Polarization pol = measure_polarization(bath.state, reg);
        const double omega = rn.kind == SequenceKind::FID
                                 ? 0.0
                                 : predict_magic_peak(couplings, pol.p_k, config.tau) +
                                       rn.omega_offset;

        SequenceSpec seq{rn.kind, rn.kind == SequenceKind::FID ? config.dt : config.tau, 1,
                         omega};
        const double cycle_t = compile({seq.kind, seq.tau, 1, omega}).total_duration();
        seq.cycles = std::max(1, static_cast<int>(std::ceil(config.t_max / cycle_t)));

        HamiltonianParams params{omega, couplings};
        RunOptions opts;
        opts.tolerance = config.tolerance;
        opts.sample_stride = config.sample_stride;
        const FidelityTrace trace =
            run_all_states(compile(seq), params, bath.state, opts);
        write_trace_csv(dir / ("dd_trace_" + rn.tag + ".csv"), trace);

        const Crossing crossing = t_threshold(trace.times, trace.worst, 0.9);
        summary.push_back({rn.tag, rn.preset, format_double(omega),
                           format_double(rn.omega_offset), format_double(bath.p_mean),
                           format_double(trace.worst.back()),
                           format_double(crossing.censored ? config.t_max : crossing.time),
                           crossing.censored ? "1" : "0"});
    }
    write_csv(dir / "dd_summary.csv",
              {"run", "preset", "omega", "omega_offset", "p_mean", "f_worst_final", "t09",
               "censored"},
              summary);
    write_manifest(dir, config, seed_table,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count());
}

void run_omega_sweep(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    const HyperfineSet couplings = compute_couplings(config.resolved_lattice());
    const SpinRegister reg{static_cast<int>(couplings.size())};

    std::vector<double> omegas = config.omega_values;
    if (omegas.empty())
        for (int i = -5; i <= 4; ++i) omegas.push_back(magic_omega(config.tau) + i);
    const double beta = config.beta_values.empty() ? 0.0 : config.beta_values.front();

    const std::size_t n = omegas.size() * static_cast<std::size_t>(config.realizations);
    const SweepResult result = execute_grid(
        n, config.master_seed, config.threads, [&](std::size_t i, std::uint64_t seed) {
            const double omega = omegas[i / static_cast<std::size_t>(config.realizations)];
            return t09_point(config, omega, beta, seed, couplings, reg);
        });
    write_sweep_csv(dir / "omega_sweep.csv", result);
    std::vector<std::vector<std::string>> timing;
    for (const SweepRow& r : result.rows)
        timing.push_back({std::to_string(r.index), format_double(r.wall_ms)});
    write_csv(dir / "timings.csv", {"index", "wall_ms"}, timing);
    write_manifest(dir, config, result.seed_table,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count(),
                   g_cancelled.load());
}

void run_t09_map(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    const HyperfineSet couplings = compute_couplings(config.resolved_lattice());
    const SpinRegister reg{static_cast<int>(couplings.size())};

    std::vector<double> omegas = config.omega_values;
    if (omegas.empty())
        for (int i = -7; i <= 2; ++i) omegas.push_back(std::round(magic_omega(config.tau)) + i);
    std::vector<double> betas = config.beta_values;
    if (betas.empty()) betas = {0.0, 10.0, 25.0, 60.0};
    if (omegas.empty() || betas.empty())
        throw std::invalid_argument("t09-map: empty grid");

    const std::size_t reals = static_cast<std::size_t>(config.realizations);
    const std::size_t n = omegas.size() * betas.size() * reals;
    const SweepResult result = execute_grid(
        n, config.master_seed, config.threads, [&](std::size_t i, std::uint64_t seed) {
            const std::size_t point = i / reals;
            const double omega = omegas[point % omegas.size()];
            const double beta = betas[point / omegas.size()];
            return t09_point(config, omega, beta, seed, couplings, reg);
        });
    write_sweep_csv(dir / "t09_map.csv", result);

    // beta -> p inset: measured mean polarization per beta row.
    std::vector<std::vector<std::string>> inset;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        const std::uint64_t seed = derive_seed(config.master_seed, b * omegas.size() * reals);
        const PreparedBath bath = bath_for_beta(config, betas[b], seed, couplings, reg);
        inset.push_back({format_double(betas[b]), format_double(bath.p_mean)});
    }
    write_csv(dir / "beta_to_p.csv", {"beta", "p_mean"}, inset);

    std::vector<std::vector<std::string>> timing;
    for (const SweepRow& r : result.rows)
        timing.push_back({std::to_string(r.index), format_double(r.wall_ms)});
    write_csv(dir / "timings.csv", {"index", "wall_ms"}, timing);
    write_manifest(dir, config, result.seed_table,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count(),
                   g_cancelled.load());
}

void run_dnp_scenario(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    DnpParams params{config.dnp_a, config.dnp_tau_m, config.dnp_tau_tot, config.dnp_cycles};
    const DnpTrain train = dnp_train(0.0, params);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 0; n < train.p_exact.size(); ++n)
        rows.push_back({std::to_string(n), format_double(train.p_exact[n]),
                        format_double(train.p_closed_form[n])});
    write_csv(dir / "dnp_train.csv", {"n", "p_exact", "p_closed_form"}, rows);

    // Per-spin profile with the three polarization conventions side by side.
    const HyperfineSet couplings = compute_couplings(config.resolved_lattice());
    const std::vector<double> p_k = polarization_profile(config.dnp_beta, couplings);
    std::vector<std::vector<std::string>> prof;
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        const double a2 = couplings.couplings[k] * couplings.couplings[k];
        prof.push_back({std::to_string(k), format_double(couplings.couplings[k]),
                        format_double(p_k[k]),
                        format_double(1.0 - std::exp(-config.dnp_beta * a2)),
                        format_double(std::tanh(0.5 * config.dnp_beta * a2))});
    }
    write_csv(dir / "dnp_profile.csv",
              {"k", "a_k", "p_tanh_beta_a2", "p_one_minus_exp", "p_tanh_half"}, prof);
    write_manifest(dir, config, {},
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count());
}

void run_theory_check(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    const double tau = config.tau;
    const double omega_m = magic_omega(tau);

    std::vector<std::vector<std::string>> rows;
    // Fixed field axis; only the rotation angle detunes from 2*pi by eps, so
    // the deviation from the first-order form scales as eps^2.
    const ClassicalField scaling_field{0.95 * omega_m, 2.0, 3.0};
    const double tau_magic = 2.0 * std::numbers::pi / scaling_field.magnitude();
    for (double eps = 1e-1; eps > 0.8e-3; eps *= 0.5) {
        const double dev = phase_distance(
            exact_cycle(scaling_field, tau_magic * (1.0 + eps)),
            first_order_cycle(scaling_field, tau_magic * (1.0 + eps)));
        rows.push_back({format_double(eps), format_double(dev)});
    }
    write_csv(dir / "theory_scaling.csv", {"eps", "deviation"}, rows);

    const HyperfineSet couplings = compute_couplings(config.resolved_lattice());
    std::vector<std::vector<std::string>> sup;
    for (double target : {0.0, 0.3, 0.6, 0.9}) {
        std::vector<double> p_k(couplings.size(), target);
        const OverhauserStats ov = overhauser_stats(couplings, p_k);
        const ClassicalField field{omega_m + ov.mean_z + ov.fluct_z, ov.fluct_xy,
                                   ov.fluct_xy};
        const SuppressionFactors s =
            effective_suppression(field, tau, omega_m, ov.mean_z);
        sup.push_back({format_double(target), format_double(ov.mean_z),
                       format_double(s.hybrid), format_double(s.uni_dd),
                       format_double(s.avg_ham_coeff)});
    }
    write_csv(dir / "theory_suppression.csv",
              {"p", "mean_z", "hybrid_factor", "unidd_factor", "avg_ham_coeff"}, sup);
    write_manifest(dir, config, {},
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count());
}

int run_scenario(const ExperimentConfig& config) {
    if (config.scenario == "fid") run_fid(config);
    else if (config.scenario == "dd") run_dd(config);
    else if (config.scenario == "omega-sweep") run_omega_sweep(config);
    else if (config.scenario == "t09-map") run_t09_map(config);
    else if (config.scenario == "dnp") run_dnp_scenario(config);
    else if (config.scenario == "theory-check") run_theory_check(config);
    else throw std::invalid_argument("unknown scenario: " + config.scenario);
    return 0;
}

}  // namespace cspin
