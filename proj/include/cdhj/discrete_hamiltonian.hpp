#pragma once

#include "cdhj/contact_core.hpp"

/// Right and left discrete contact Hamiltonian steppers and the Legendre
/// construction of a right discrete Hamiltonian from a discrete Lagrangian.
namespace cdhj {

/// Builds H+_d(q, p, s) = p.Psi - Ld(q, Psi, s) where Psi solves
/// p = D2Ld(q, Psi, s) (damped Newton seeded at q).  The returned model
/// carries the envelope partials
///   D1H+ = -D1Ld(q, Psi, s),  D2H+ = Psi,  D3H+ = -D3Ld(q, Psi, s).
DiscreteHamiltonianModel right_from_lagrangian(const DiscreteLagrangianModel& lagrangian);

/// One step of the right discrete Hamilton equations from (q_k, p_k, s_k):
/// solves p_k (1 - D3H+(q_k, P, s_k)) = D1H+(q_k, P, s_k) for P = p_{k+1}
/// (damped Newton seeded at p_k), then
///   q_{k+1} = D2H+(q_k, p_{k+1}, s_k),
///   s_{k+1} = s_k + p_{k+1}.q_{k+1} - H+(q_k, p_{k+1}, s_k).
/// Throws DegenerateStep when 1 - D3H+ vanishes at the root.
ContactState right_step(const DiscreteHamiltonianModel& model, const ContactState& x);

/// One step of the left discrete Hamilton equations from (q_k, p_k, s_k):
/// solves the coupled system
///   q_k = -D1H-(p_k, q_{k+1}, s_{k+1})
///   s_k = s_{k+1} - p_k.D1H-(p_k, q_{k+1}, s_{k+1}) + H-(p_k, q_{k+1}, s_{k+1})
/// for (q_{k+1}, s_{k+1}) (damped Newton seeded at (q_k, s_k)), then reads
/// off the new momentum p_{k+1} = -D2H-(p_k, q_{k+1}, s_{k+1}).
ContactState left_step(const DiscreteHamiltonianModel& model, const ContactState& x);

/// Iterates the stepper matching model.side for n steps; the result holds
/// x_0 .. x_n.  Solver failures are rethrown with the offending step index.
std::vector<ContactState> run_trajectory(const DiscreteHamiltonianModel& model,
                                         const ContactState& x0, int n);

} // namespace cdhj
