#pragma once

#include "cdhj/contact_core.hpp"

/// Continuous-time side: the contact Hamiltonian vector field, the Herglotz
/// equations in first-order form, and a fixed-step RK4 reference integrator.
namespace cdhj {

/// Vector field of the contact Hamilton equations,
///   qdot = H_p,  pdot = -(H_q + p H_s),  sdot = p.H_p - H.
/// Satisfies eta(X_H) = -H and the dissipation law dH/dt = -H_s H along flow.
Tangent contact_vector_field(const ContinuousHamiltonianModel& model,
                             const ContactState& state);

/// First-order form of the Herglotz variational equations on (q, v, s):
/// returns (qdot, vdot, sdot) = (v, a, L) where a solves
///   L_vv a = L_q + L_s L_v - L_vq v - L_vs L.
/// Throws RegularityViolated when L_vv is singular or ill conditioned.
Tangent herglotz_rhs(const ContinuousLagrangianModel& model,
                     const VelocityState& state);

struct Trajectory {
    Vec times;
    std::vector<ContactState> states;
};

/// Classic fixed-step RK4 for contact-state fields.  The result holds the
/// initial state plus n further states at times t0 + k h.
Trajectory integrate_rk4(const std::function<Tangent(const ContactState&)>& field,
                         const ContactState& x0, double h, int n, double t0 = 0.0);

/// Generic fixed-step RK4 on flat vectors, rhs = f(t, x).  Returns the node
/// values x_0 .. x_n.  Used for the Herglotz (q, v, s) system and scalar ODEs.
std::vector<Vec> rk4_flat(const std::function<Vec(double, const Vec&)>& rhs,
                          const Vec& x0, double h, int n, double t0 = 0.0);

} // namespace cdhj
