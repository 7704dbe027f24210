#pragma once

#include <functional>

#include "cspin/hamiltonian.hpp"

namespace cspin {

// exp(-iHt) ~ sum_n c_n T_n(H/R) with c_n = (2 - delta_n0) (-i)^n J_n(R t).
struct PropagatorPlan {
    double radius = 0.0;
    double t_step = 0.0;
    double tolerance = 1e-12;
    int order = 0;                // truncation order K
    std::vector<cplx> coeffs;     // c_0 .. c_K
};

PropagatorPlan plan(double radius, double t_step, double tolerance = 1e-12);
PropagatorPlan plan(const HamiltonianParams& params, double t_step,
                    double tolerance = 1e-12);

// Scratch vectors reused across steps so long trajectories allocate once.
struct ChebyshevWorkspace {
    StateVector t_prev, t_cur, t_next;
};

// In-place psi <- exp(-iH t_step) psi. Throws if the post-step norm drifts by
// more than 1e3 * tolerance (an invalid spectral bound).
void propagate(const PropagatorPlan& plan, const Hamiltonian& h, StateVector& psi,
               ChebyshevWorkspace* ws = nullptr);

// Repeated fixed-dt propagation; sink is called after each step with
// (step index, time, state).
using SampleSink = std::function<void(int, double, const StateVector&)>;
StateVector evolve_sampled(const HamiltonianParams& params, StateVector psi,
                           double dt, int n_steps, const SampleSink& sink,
                           double tolerance = 1e-12);

}  // namespace cspin
