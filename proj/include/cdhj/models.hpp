#pragma once

#include "cdhj/contact_core.hpp"

/// Bundled example systems: the falling parachute with quadratic drag, the
/// linearly damped harmonic oscillator, the (damped) free particle, and the
/// trivial identity-step discrete Hamiltonians.
namespace cdhj {

// ---------------------------------------------------------------------------
// Parachute (1-D, unit time step)
// ---------------------------------------------------------------------------

struct ParachuteParams {
    double lambda = -0.01; // drag shape parameter, nonzero
    double m = 1.0;        // mass
    double g = 10.0;       // gravity
};

/// Right discrete Hamiltonian of the parachute,
///   H+(q, p, s) = (p + 2 lambda s)^2 / (2m) + (m g / (2 lambda)) (e^{2 lambda q} - 1),
/// with analytic slot partials.
DiscreteHamiltonianModel parachute_right_hamiltonian(const ParachuteParams& params);

/// Closed form of one right step of the parachute:
///   p' = (m / (2 lambda)) (1 - m g e^{2 lambda q} / p) - 2 lambda s
///   q' = (p' + 2 lambda s) / m
///   s' = s + p' q' - H+(q, p', s).
/// The implicit right equation is linear in p', so this is exact.  Throws
/// DegenerateStep when p = 0.
ContactState parachute_closed_form_step(const ParachuteParams& params,
                                        const ContactState& x);

/// Gap in the parachute's per-step s-identity
///   s' - s = (p'^2 - 4 lambda^2 s^2) / (2m) - (m g / (2 lambda)) (e^{2 lambda q} - 1),
/// which holds exactly for consecutive states of the scheme.
double parachute_s_identity_gap(const ParachuteParams& params, const ContactState& x,
                                const ContactState& x_next);

// ---------------------------------------------------------------------------
// Damped harmonic oscillator (any dimension; bundled defaults are 1-D)
// ---------------------------------------------------------------------------

/// L = |v|^2/2 - omega^2 |q|^2/2 - gamma s, H = |p|^2/2 + omega^2 |q|^2/2
/// + gamma s, and the midpoint discrete Lagrangian
///   L_d(q0, q1, s0) = h L((q0+q1)/2, (q1-q0)/h, s0).
struct DampedOscillatorModels {
    ContinuousLagrangianModel lagrangian;
    ContinuousHamiltonianModel hamiltonian;
    DiscreteLagrangianModel discrete;
};

DampedOscillatorModels damped_oscillator_models(double omega, double gamma, double h,
                                                std::size_t dim = 1);

// ---------------------------------------------------------------------------
// Free particle and relatives
// ---------------------------------------------------------------------------

/// H = |p|^2 / 2.
ContinuousHamiltonianModel free_particle_hamiltonian(std::size_t dim = 1);

/// L_d(q0, q1, s0) = |q1 - q0|^2 / (2h).
DiscreteLagrangianModel free_particle_discrete(double h, std::size_t dim = 1);

/// L_d(q0, q1, s0) = |q1 - q0|^2 / (2h) - h gamma s0.
DiscreteLagrangianModel damped_free_particle_discrete(double h, double gamma,
                                                      std::size_t dim = 1);

/// H+(q, p, s) = p.q + h |p|^2 / 2 (the exact right Hamiltonian of the free
/// particle's discrete Lagrangian).
DiscreteHamiltonianModel free_particle_right(double h, std::size_t dim = 1);

/// H-(p, q, s) = -p.q + h |p|^2 / 2.
DiscreteHamiltonianModel free_particle_left(double h, std::size_t dim = 1);

/// H+(q, p, s) = p.q; the right step is the identity map.
DiscreteHamiltonianModel trivial_right(std::size_t dim = 1);

/// H-(p, q, s) = -p.q; the left step is the identity map.
DiscreteHamiltonianModel trivial_left(std::size_t dim = 1);

} // namespace cdhj
