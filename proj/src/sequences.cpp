#include "cspin/sequences.hpp"

#include <cmath>
#include <stdexcept>

namespace cspin {

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::FID: return "fid";
        case SequenceKind::UniDD: return "uni-dd";
        case SequenceKind::SUniDD: return "suni-dd";
        case SequenceKind::CUniDD: return "cuni-dd";
    }
    return "?";
}

SequenceKind sequence_kind_from_string(const std::string& name) {
    if (name == "fid") return SequenceKind::FID;
    if (name == "uni-dd") return SequenceKind::UniDD;
    if (name == "suni-dd") return SequenceKind::SUniDD;
    if (name == "cuni-dd") return SequenceKind::CUniDD;
    throw std::invalid_argument("unknown sequence kind: " + name);
}

double Schedule::total_duration() const {
    double t = 0;
    for (const Segment& s : segments)
        if (s.type == Segment::Type::Evolve) t += s.duration;
    return t;
}

int Schedule::pulse_count() const {
    int n = 0;
    for (const Segment& s : segments)
        if (s.type == Segment::Type::PulseY) ++n;
    return n;
}

namespace {

void emit_evolve(std::vector<Segment>& out, double tau, int sign) {
    out.push_back({Segment::Type::Evolve, tau, sign});
}

void emit_pulse(std::vector<Segment>& out) {
    out.push_back({Segment::Type::PulseY, 0.0, +1});
}

// One symmetrized cycle (operator order U' Y U' U Y U, rightmost first),
// with all segment biases multiplied by `flip`.
void emit_suni_cycle(std::vector<Segment>& out, double tau, int flip) {
    emit_evolve(out, tau, flip);
    emit_pulse(out);
    emit_evolve(out, tau, flip);
    emit_evolve(out, tau, -flip);
    emit_pulse(out);
    emit_evolve(out, tau, -flip);
}

}  // namespace

Schedule compile(const SequenceSpec& spec) {
    if (!(spec.tau > 0.0)) throw std::invalid_argument("compile: tau must be > 0");
    if (spec.cycles < 1) throw std::invalid_argument("compile: cycles must be >= 1");

    Schedule sch;
    sch.spec = spec;
    for (int c = 0; c < spec.cycles; ++c) {
        switch (spec.kind) {
            case SequenceKind::FID:
                emit_evolve(sch.segments, spec.tau, +1);
                break;
            case SequenceKind::UniDD:
                emit_evolve(sch.segments, spec.tau, +1);
                emit_pulse(sch.segments);
                emit_evolve(sch.segments, spec.tau, +1);
                emit_pulse(sch.segments);
                break;
            case SequenceKind::SUniDD:
                emit_suni_cycle(sch.segments, spec.tau, +1);
                break;
            case SequenceKind::CUniDD:
                // C2 = C1' Y C1' C1 Y C1 with C1 the symmetrized cycle and
                // C1' its bias-negated version; rightmost block acts first.
                emit_suni_cycle(sch.segments, spec.tau, +1);
                emit_pulse(sch.segments);
                emit_suni_cycle(sch.segments, spec.tau, +1);
                emit_suni_cycle(sch.segments, spec.tau, -1);
                emit_pulse(sch.segments);
                emit_suni_cycle(sch.segments, spec.tau, -1);
                break;
        }
        sch.sample_marks.push_back(sch.segments.size());
    }
    return sch;
}

void apply_pulse_y(StateVector& psi, const SpinRegister& reg) {
    const std::size_t half = reg.bath_dim();
    if (psi.size() != 2 * half)
        throw std::invalid_argument("apply_pulse_y: dimension mismatch");
    cplx* down = psi.data();
    cplx* up = psi.data() + half;
    for (std::size_t j = 0; j < half; ++j) {
        const cplx t = down[j];
        down[j] = up[j];
        up[j] = -t;
    }
}

const PropagatorPlan& PlanCache::get(double radius, double duration) {
    const auto key = std::make_pair(radius, duration);
    auto it = plans_.find(key);
    if (it == plans_.end())
        it = plans_.emplace(key, plan(radius, duration, tolerance_)).first;
    return it->second;
}

namespace {

// Walks the schedule applying every segment to each vector in `states`;
// `on_mark` is invoked at each retained sample mark and may return false to
// stop early.
template <typename OnMark>
void execute(const Schedule& schedule, const HamiltonianParams& params,
             std::vector<StateVector*> states, PlanCache& plans, int sample_stride,
             const OnMark& on_mark) {
    const SpinRegister reg{params.n_bath()};
    const Hamiltonian h_fwd(params);
    std::unique_ptr<Hamiltonian> h_rev;  // built only for reversed-bias segments
    const double radius = h_fwd.spectral_bound();
    ChebyshevWorkspace ws;

    std::size_t mark_idx = 0;
    std::size_t next_mark = mark_idx < schedule.sample_marks.size()
                                ? schedule.sample_marks[mark_idx]
                                : SIZE_MAX;
    double t = 0;
    int retained = 0;
    for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
        const Segment& seg = schedule.segments[i];
        try {
            if (seg.type == Segment::Type::PulseY) {
                for (StateVector* psi : states) apply_pulse_y(*psi, reg);
            } else {
                const Hamiltonian* h = &h_fwd;
                if (seg.omega_sign < 0) {
                    if (!h_rev) {
                        HamiltonianParams rev = params;
                        rev.omega = -rev.omega;
                        h_rev = std::make_unique<Hamiltonian>(std::move(rev));
                    }
                    h = h_rev.get();
                }
                const PropagatorPlan& p = plans.get(radius, seg.duration);
                for (StateVector* psi : states) propagate(p, *h, *psi, &ws);
                t += seg.duration;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("segment " + std::to_string(i) + ": " + e.what());
        }
        while (i + 1 == next_mark) {
            const bool keep = (mark_idx % static_cast<std::size_t>(sample_stride)) == 0 ||
                              mark_idx + 1 == schedule.sample_marks.size();
            if (keep && !on_mark(t)) return;
            ++mark_idx;
            next_mark = mark_idx < schedule.sample_marks.size()
                            ? schedule.sample_marks[mark_idx]
                            : SIZE_MAX;
            ++retained;
        }
    }
    (void)retained;
}

double fidelity_against(const Mat2& rho0, const Mat2& rho_t) {
    cplx f = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) f += rho0(a, b) * rho_t(b, a);
    return f.real();
}

}  // namespace

SingleStateTrace run(const Schedule& schedule, const HamiltonianParams& params,
                     const StateVector& psi0, PlanCache& plans) {
    const SpinRegister reg{params.n_bath()};
    if (psi0.size() != reg.dim())
        throw std::invalid_argument("run: state dimension does not match couplings");

    const Mat2 rho0 = reduce_central(psi0, reg);
    StateVector psi = psi0;
    SingleStateTrace trace;
    execute(schedule, params, {&psi}, plans, 1, [&](double t) {
        trace.times.push_back(t);
        trace.fidelity.push_back(fidelity_against(rho0, reduce_central(psi, reg)));
        trace.max_norm_error = std::max(trace.max_norm_error, std::abs(norm(psi) - 1.0));
        return true;
    });
    return trace;
}

FidelityTrace run_all_states(const Schedule& schedule, const HamiltonianParams& params,
                             const StateVector& bath, const RunOptions& opts) {
    const SpinRegister reg{params.n_bath()};
    if (bath.size() != reg.bath_dim())
        throw std::invalid_argument("run_all_states: bath dimension mismatch");

    StateVector phi_d = compose({cplx(1.0), cplx(0.0)}, bath);
    StateVector phi_u = compose({cplx(0.0), cplx(1.0)}, bath);
    const std::size_t half = reg.bath_dim();

    constexpr std::array<CentralSpinState, 4> kStates = {
        CentralSpinState::Up, CentralSpinState::Down, CentralSpinState::X,
        CentralSpinState::Y};
    std::array<std::array<cplx, 2>, 4> amps;
    std::array<Mat2, 4> rho0;
    for (int s = 0; s < 4; ++s) {
        amps[s] = central_amplitudes(kStates[s]);
        rho0[s](0, 0) = amps[s][0] * std::conj(amps[s][0]);
        rho0[s](0, 1) = amps[s][0] * std::conj(amps[s][1]);
        rho0[s](1, 0) = amps[s][1] * std::conj(amps[s][0]);
        rho0[s](1, 1) = amps[s][1] * std::conj(amps[s][1]);
    }

    FidelityTrace trace;
    PlanCache plans(opts.tolerance);
    execute(schedule, params, {&phi_d, &phi_u}, plans, opts.sample_stride,
            [&](double t) {
                // Cross Gram blocks M_ss'[a,b] = sum_j phi_s[a,j] conj(phi_s'[b,j]);
                // every initial central state is a linear combination of the two
                // evolved basis trajectories.
                Mat2 m_dd, m_uu, m_du;
                const cplx* d = phi_d.data();
                const cplx* u = phi_u.data();
                for (std::size_t j = 0; j < half; ++j) {
                    const cplx d0 = d[j], d1 = d[half + j];
                    const cplx u0 = u[j], u1 = u[half + j];
                    m_dd(0, 0) += d0 * std::conj(d0);
                    m_dd(0, 1) += d0 * std::conj(d1);
                    m_dd(1, 1) += d1 * std::conj(d1);
                    m_uu(0, 0) += u0 * std::conj(u0);
                    m_uu(0, 1) += u0 * std::conj(u1);
                    m_uu(1, 1) += u1 * std::conj(u1);
                    m_du(0, 0) += d0 * std::conj(u0);
                    m_du(0, 1) += d0 * std::conj(u1);
                    m_du(1, 0) += d1 * std::conj(u0);
                    m_du(1, 1) += d1 * std::conj(u1);
                }
                m_dd(1, 0) = std::conj(m_dd(0, 1));
                m_uu(1, 0) = std::conj(m_uu(0, 1));

                trace.times.push_back(t);
                double worst = 2.0;
                for (int s = 0; s < 4; ++s) {
                    const cplx ad = amps[s][0], au = amps[s][1];
                    Mat2 rho_t;
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) {
                            const cplx m_ud_ab = std::conj(m_du(b, a));
                            rho_t(a, b) = std::norm(ad) * m_dd(a, b) +
                                          ad * std::conj(au) * m_du(a, b) +
                                          au * std::conj(ad) * m_ud_ab +
                                          std::norm(au) * m_uu(a, b);
                        }
                    const double f = fidelity_against(rho0[s], rho_t);
                    trace.per_state[s].push_back(f);
                    worst = std::min(worst, f);
                }
                trace.worst.push_back(worst);
                trace.max_norm_error =
                    std::max({trace.max_norm_error, std::abs(norm(phi_d) - 1.0),
                              std::abs(norm(phi_u) - 1.0)});
                return !(opts.early_stop_level >= 0.0 && worst < opts.early_stop_level);
            });
    return trace;
}

}  // namespace cspin
