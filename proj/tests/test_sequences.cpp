#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "cspin/observables.hpp"
#include "cspin/sequences.hpp"
#include "cspin/state.hpp"

using namespace cspin;

namespace {

HyperfineSet couplings_of(std::initializer_list<double> a) {
    HyperfineSet set;
    set.couplings = a;
    return set;
}

StateVector random_bath(std::size_t dim, std::uint64_t seed) {
    StateVector psi(dim);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    for (auto& v : psi) v = {nd(gen), nd(gen)};
    normalize(psi);
    return psi;
}

Eigen::MatrixXcd dense_h(const HamiltonianParams& params) {
    const auto h = dense_matrix(params);
    const auto dim = static_cast<Eigen::Index>(std::sqrt(double(h.size())) + 0.5);
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = h[std::size_t(r * dim + c)];
    return m;
}

Eigen::MatrixXcd dense_expm(const HamiltonianParams& params, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_h(params));
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd dense_pulse(int n_bath) {
    const Eigen::Index half = Eigen::Index(1) << n_bath;
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2 * half, 2 * half);
    for (Eigen::Index j = 0; j < half; ++j) {
        y(j, half + j) = 1.0;    // new down = old up
        y(half + j, j) = -1.0;   // new up = -old down
    }
    return y;
}

}  // namespace

TEST_CASE("compile: segment counts and durations per kind") {
    const Schedule fid = compile({SequenceKind::FID, 0.4, 3, 0.0});
    CHECK(fid.pulse_count() == 0);
    CHECK(fid.segments.size() == 3);
    CHECK(fid.total_duration() == doctest::Approx(1.2));
    CHECK(fid.sample_marks.size() == 3);

    const Schedule uni = compile({SequenceKind::UniDD, 0.05, 1, 126.0});
    CHECK(uni.pulse_count() == 2);
    CHECK(uni.total_duration() == doctest::Approx(0.1));
    CHECK(uni.segments[0].type == Segment::Type::Evolve);
    CHECK(uni.segments[1].type == Segment::Type::PulseY);

    const Schedule suni = compile({SequenceKind::SUniDD, 0.05, 1, 126.0});
    CHECK(suni.pulse_count() == 2);
    CHECK(suni.total_duration() == doctest::Approx(0.2));
    // forward pair first, reversed pair second
    CHECK(suni.segments[0].omega_sign == +1);
    CHECK(suni.segments[5].omega_sign == -1);

    const Schedule cuni = compile({SequenceKind::CUniDD, 0.05, 1, 126.0});
    CHECK(cuni.total_duration() == doctest::Approx(0.8));  // 16 tau
    // C2 = C1' Y C1' C1 Y C1: two symmetrized-cycle pulses per block plus the
    // two joining pulses
    CHECK(cuni.pulse_count() == 10);

    const Schedule multi = compile({SequenceKind::UniDD, 0.05, 7, 126.0});
    CHECK(multi.total_duration() == doctest::Approx(0.7));
    CHECK(multi.sample_marks.size() == 7);
}

TEST_CASE("compile rejects invalid specs") {
    CHECK_THROWS(compile({SequenceKind::UniDD, 0.0, 1, 126.0}));
    CHECK_THROWS(compile({SequenceKind::UniDD, -0.1, 1, 126.0}));
    CHECK_THROWS(compile({SequenceKind::UniDD, 0.05, 0, 126.0}));
}

TEST_CASE("CUniDD is the bias-negated composition of symmetrized cycles") {
    const Schedule c1 = compile({SequenceKind::SUniDD, 0.07, 1, 10.0});
    const Schedule c2 = compile({SequenceKind::CUniDD, 0.07, 1, 10.0});
    const std::size_t n = c1.segments.size();
    REQUIRE(c2.segments.size() == 2 * (2 * n + 1));
    auto check_block = [&](std::size_t offset, int flip) {
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(c2.segments[offset + i].type == c1.segments[i].type);
            CHECK(c2.segments[offset + i].duration ==
                  doctest::Approx(c1.segments[i].duration));
            if (c1.segments[i].type == Segment::Type::Evolve)
                CHECK(c2.segments[offset + i].omega_sign == flip * c1.segments[i].omega_sign);
        }
    };
    check_block(0, +1);                       // C1 acts first
    CHECK(c2.segments[n].type == Segment::Type::PulseY);
    check_block(n + 1, +1);                   // C1 again
    check_block(2 * n + 1, -1);               // C1'
    CHECK(c2.segments[3 * n + 1].type == Segment::Type::PulseY);
    check_block(3 * n + 2, -1);               // C1'
}

TEST_CASE("sequence kind names round-trip") {
    for (auto k : {SequenceKind::FID, SequenceKind::UniDD, SequenceKind::SUniDD,
                   SequenceKind::CUniDD})
        CHECK(sequence_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(sequence_kind_from_string("cpmg"));
}

TEST_CASE("pulse flips Up to Down and squares to minus one") {
    const SpinRegister reg{3};
    const auto couplings = couplings_of({0.5, 0.7, 0.9});
    auto psi = prepare(reg, CentralSpinState::Up, BathPreparation::haar(4), couplings);
    const auto initial = psi;
    apply_pulse_y(psi, reg);
    // |up>|b> -> -|down>|b> under exp(-i pi S_y) in this convention
    for (std::size_t j = 0; j < reg.bath_dim(); ++j) {
        CHECK(std::abs(psi[j] - initial[reg.bath_dim() + j]) < 1e-15);
        CHECK(std::abs(psi[reg.bath_dim() + j]) < 1e-15);
    }
    apply_pulse_y(psi, reg);
    for (std::size_t i = 0; i < psi.size(); ++i)
        CHECK(std::abs(psi[i] + initial[i]) < 1e-15);
    CHECK(std::abs(norm(psi) - 1.0) < 1e-14);
}

TEST_CASE("pulse conjugates the reduced density matrix by the 2x2 rotation") {
    const SpinRegister reg{4};
    auto psi = random_bath(reg.dim(), 17);
    const Mat2 before = reduce_central(psi, reg);
    apply_pulse_y(psi, reg);
    const Mat2 after = reduce_central(psi, reg);
    Mat2 y;  // rows/cols (down, up)
    y(0, 1) = 1.0;
    y(1, 0) = -1.0;
    const Mat2 expected = y * before * y.dagger();
    for (int i = 0; i < 4; ++i) CHECK(std::abs(after.m[i] - expected.m[i]) < 1e-13);
}

TEST_CASE("FID on the fully polarized eigenstate holds fidelity 1") {
    const auto couplings = couplings_of({0.6, 0.4, 0.8});
    const SpinRegister reg{3};
    const auto psi0 =
        prepare(reg, CentralSpinState::Up, BathPreparation::product_up(), couplings);
    PlanCache plans(1e-13);
    const auto trace = run(compile({SequenceKind::FID, 0.5, 20, 0.0}),
                           {0.0, couplings}, psi0, plans);
    REQUIRE(trace.times.size() == 20);
    for (double f : trace.fidelity) CHECK(f == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("UniDD trace matches a dense segment-by-segment oracle at N=3") {
    const auto couplings = couplings_of({0.9, 0.5, 0.7});
    const HamiltonianParams params{8.0, couplings};
    const SpinRegister reg{3};
    const auto bath = random_bath(reg.bath_dim(), 23);
    const Schedule schedule = compile({SequenceKind::UniDD, 0.3, 10, params.omega});

    const auto trace = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, -1.0});

    const Eigen::MatrixXcd u_tau = dense_expm(params, 0.3);
    const Eigen::MatrixXcd y = dense_pulse(3);
    const Eigen::MatrixXcd cycle = y * u_tau * y * u_tau;

    for (int s = 0; s < 4; ++s) {
        const auto state = static_cast<CentralSpinState>(s);
        const auto psi0 = compose(central_amplitudes(state), bath);
        Eigen::VectorXcd v(16);
        for (int i = 0; i < 16; ++i) v(i) = psi0[std::size_t(i)];
        const Mat2 rho0 = reduce_central(psi0, reg);
        for (std::size_t c = 0; c < 10; ++c) {
            v = cycle * v;
            StateVector cur(16);
            for (int i = 0; i < 16; ++i) cur[std::size_t(i)] = v(i);
            const double f = fidelity(rho0, reduce_central(cur, reg));
            CHECK(std::abs(trace.per_state[s][c] - f) < 1e-10);
        }
    }
}

TEST_CASE("SUniDD and CUniDD reversed segments use the negated bias") {
    // execute a one-cycle SUniDD against a dense oracle including the
    // reversed-bias evolutions
    const auto couplings = couplings_of({0.8, 0.35});
    const HamiltonianParams fwd{3.0, couplings};
    HamiltonianParams rev = fwd;
    rev.omega = -rev.omega;
    const SpinRegister reg{2};
    const auto bath = random_bath(reg.bath_dim(), 31);
    const double tau = 0.2;

    const Eigen::MatrixXcd u = dense_expm(fwd, tau);
    const Eigen::MatrixXcd ub = dense_expm(rev, tau);
    const Eigen::MatrixXcd y = dense_pulse(2);
    const Eigen::MatrixXcd cycle = ub * y * ub * u * y * u;

    const auto trace = run_all_states(compile({SequenceKind::SUniDD, tau, 1, fwd.omega}),
                                      fwd, bath, RunOptions{1e-13, 1, -1.0});
    const auto psi0 = compose(central_amplitudes(CentralSpinState::X), bath);
    Eigen::VectorXcd v(8);
    for (int i = 0; i < 8; ++i) v(i) = psi0[std::size_t(i)];
    v = cycle * v;
    StateVector cur(8);
    for (int i = 0; i < 8; ++i) cur[std::size_t(i)] = v(i);
    const double f = fidelity(reduce_central(psi0, reg), reduce_central(cur, reg));
    CHECK(std::abs(trace.per_state[2][0] - f) < 1e-11);
}

TEST_CASE("pair evolution agrees with four independent single-state runs") {
    const auto couplings = couplings_of({0.7, 0.4, 0.9});
    const HamiltonianParams params{5.0, couplings};
    const SpinRegister reg{3};
    const auto bath = random_bath(reg.bath_dim(), 41);
    const Schedule schedule = compile({SequenceKind::UniDD, 0.25, 8, params.omega});

    const auto combined = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, -1.0});

    constexpr std::array<CentralSpinState, 4> kStates = {
        CentralSpinState::Up, CentralSpinState::Down, CentralSpinState::X,
        CentralSpinState::Y};
    for (int s = 0; s < 4; ++s) {
        PlanCache plans(1e-13);
        const auto single =
            run(schedule, params, compose(central_amplitudes(kStates[std::size_t(s)]), bath), plans);
        REQUIRE(single.times.size() == combined.times.size());
        for (std::size_t i = 0; i < single.times.size(); ++i)
            CHECK(std::abs(single.fidelity[i] - combined.per_state[s][i]) < 1e-11);
    }
    for (std::size_t i = 0; i < combined.times.size(); ++i) {
        double w = 2.0;
        for (int s = 0; s < 4; ++s) w = std::min(w, combined.per_state[s][i]);
        CHECK(combined.worst[i] == doctest::Approx(w).epsilon(1e-14));
    }
}

TEST_CASE("recorded fidelities are invariant under a global phase of the bath") {
    const auto couplings = couplings_of({0.6, 0.8});
    const HamiltonianParams params{4.0, couplings};
    const SpinRegister reg{2};
    auto bath = random_bath(reg.bath_dim(), 51);
    const Schedule schedule = compile({SequenceKind::UniDD, 0.2, 5, params.omega});
    const auto a = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, -1.0});
    for (auto& v : bath) v *= std::polar(1.0, 1.234);
    const auto b = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, -1.0});
    for (std::size_t i = 0; i < a.worst.size(); ++i)
        CHECK(a.worst[i] == doctest::Approx(b.worst[i]).epsilon(1e-12));
}

TEST_CASE("sample stride keeps every n-th mark plus the final one") {
    const auto couplings = couplings_of({0.5, 0.9});
    const HamiltonianParams params{2.0, couplings};
    const auto bath = random_bath(4, 61);
    const Schedule schedule = compile({SequenceKind::UniDD, 0.1, 10, params.omega});
    const auto full = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, -1.0});
    const auto strided = run_all_states(schedule, params, bath, RunOptions{1e-13, 4, -1.0});
    REQUIRE(full.times.size() == 10);
    REQUIRE(strided.times.size() == 4);  // marks 0, 4, 8 and the final mark 9
    CHECK(strided.times[0] == doctest::Approx(full.times[0]));
    CHECK(strided.times[1] == doctest::Approx(full.times[4]));
    CHECK(strided.times[2] == doctest::Approx(full.times[8]));
    CHECK(strided.times.back() == doctest::Approx(full.times.back()));
    CHECK(strided.worst.back() == doctest::Approx(full.worst.back()).epsilon(1e-12));
}

TEST_CASE("early stop truncates once the worst fidelity crosses the level") {
    const auto couplings = compute_couplings(LatticeSpec::preset("normal"));
    HyperfineSet small;
    small.couplings.assign(couplings.couplings.begin(), couplings.couplings.begin() + 6);
    const HamiltonianParams params{0.0, small};
    const SpinRegister reg{6};
    const auto bath = random_bath(reg.bath_dim(), 71);
    const Schedule schedule = compile({SequenceKind::FID, 0.1, 60, 0.0});
    const auto full = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, -1.0});
    const auto stopped = run_all_states(schedule, params, bath, RunOptions{1e-13, 1, 0.9});
    REQUIRE(!stopped.worst.empty());
    CHECK(stopped.worst.back() < 0.9);
    for (std::size_t i = 0; i + 1 < stopped.worst.size(); ++i)
        CHECK(stopped.worst[i] >= 0.9);
    CHECK(stopped.times.size() <= full.times.size());
}

TEST_CASE("hybrid protocol compiles to the identical pulse program") {
    const SequenceSpec spec{SequenceKind::UniDD, 0.05, 4, 126.0};
    const Schedule a = compile(spec);
    const Schedule b = compile(spec);  // bath preparation plays no role here
    REQUIRE(a.segments.size() == b.segments.size());
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        CHECK(a.segments[i].type == b.segments[i].type);
        CHECK(a.segments[i].duration == b.segments[i].duration);
        CHECK(a.segments[i].omega_sign == b.segments[i].omega_sign);
    }
    CHECK(a.sample_marks == b.sample_marks);
}
