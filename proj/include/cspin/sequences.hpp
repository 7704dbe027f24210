#pragma once

#include <map>
#include <string>

#include "cspin/chebyshev.hpp"
#include "cspin/hamiltonian.hpp"

namespace cspin {

enum class SequenceKind { FID, UniDD, SUniDD, CUniDD };

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& name);

struct SequenceSpec {
    SequenceKind kind = SequenceKind::UniDD;
    double tau = 0.05;   // pulse delay (FID: sampling interval)
    int cycles = 1;      // L
    double omega = 0.0;  // bias for forward segments
};

struct Segment {
    enum class Type { Evolve, PulseY };
    Type type = Type::Evolve;
    double duration = 0.0;  // Evolve only
    int omega_sign = +1;    // Evolve only
};

struct Schedule {
    SequenceSpec spec;
    std::vector<Segment> segments;
    // Sample marks are "number of segments executed"; fidelities are recorded
    // stroboscopically at cycle boundaries.
    std::vector<std::size_t> sample_marks;

    double total_duration() const;
    int pulse_count() const;
};

// Segment order realizes the operator products right-to-left: the rightmost
// evolution acts on the state first.
Schedule compile(const SequenceSpec& spec);

// Central-spin rotation exp(-i pi S_y): (a_up, a_down) -> (-a_down, a_up).
void apply_pulse_y(StateVector& psi, const SpinRegister& reg);

// Plans are cached per (radius, duration) and reused across the thousands of
// identical pulse-delay segments of a schedule.
class PlanCache {
public:
    explicit PlanCache(double tolerance = 1e-12) : tolerance_(tolerance) {}
    const PropagatorPlan& get(double radius, double duration);
    double tolerance() const { return tolerance_; }

private:
    double tolerance_;
    std::map<std::pair<double, double>, PropagatorPlan> plans_;
};

struct SingleStateTrace {
    std::vector<double> times;
    std::vector<double> fidelity;
    double max_norm_error = 0.0;
};

// One initial state through the schedule; fidelity against reduce_central of
// the initial state at every sample mark.
SingleStateTrace run(const Schedule& schedule, const HamiltonianParams& params,
                     const StateVector& psi0, PlanCache& plans);

struct FidelityTrace {
    std::vector<double> times;
    std::array<std::vector<double>, 4> per_state;  // Up, Down, X, Y
    std::vector<double> worst;
    double max_norm_error = 0.0;
};

// Production path: evolves the two central basis states over one shared bath
// realization and reconstructs all four benchmark fidelities by linearity.
// sample_stride > 1 keeps every stride-th mark; early_stop_level, when set,
// aborts once the worst-case fidelity first drops below it (plus one extra
// recorded sample for interpolation).
struct RunOptions {
    double tolerance = 1e-12;
    int sample_stride = 1;
    double early_stop_level = -1.0;
};

FidelityTrace run_all_states(const Schedule& schedule, const HamiltonianParams& params,
                             const StateVector& bath, const RunOptions& opts = {});

}  // namespace cspin
