#pragma once

#include "cdhj/contact_core.hpp"

/// Discrete Herglotz variational mechanics: the s-evolution rule, the
/// discrete Herglotz (discrete Euler-Lagrange) equations, their stepper, and
/// the two discrete Legendre transforms.
///
/// Throughout, the s argument of a segment (q_k, q_{k+1}) is the accumulated
/// action s_k at the left endpoint, and the s-evolution rule is
///   s_{k+1} = s_k + L_d(q_k, q_{k+1}, s_k).
namespace cdhj {

/// Node sequence {(q_k, s_k)} produced by the discrete Lagrangian flow.
struct DiscreteCurve {
    std::vector<Vec> q;
    Vec s;
};

/// Accumulates s along fixed configuration nodes; returns s_0 .. s_N.
Vec evolve_s(const DiscreteLagrangianModel& model, const std::vector<Vec>& q_nodes,
             double s0);

/// The discrete Herglotz action: the final accumulated s_N.
double discrete_action(const DiscreteLagrangianModel& model,
                       const std::vector<Vec>& q_nodes, double s0);

/// Residual of the discrete Herglotz equations at the middle node:
///   D1Ld(q_cur, q_next, s_cur) + (1 + D3Ld(q_cur, q_next, s_cur)) *
///   D2Ld(q_prev, q_cur, s_prev)
/// with s_cur = s_prev + Ld(q_prev, q_cur, s_prev).
Vec herglotz_residual(const DiscreteLagrangianModel& model, const Vec& q_prev,
                      const Vec& q_cur, const Vec& q_next, double s_prev);

/// Advances the discrete Herglotz equations one step: returns (q_next, s_cur),
/// where q_next zeros herglotz_residual (damped Newton from the linear
/// extrapolation seed 2 q_cur - q_prev) and s_cur = s_prev + Ld(q_prev, q_cur,
/// s_prev).  Throws RegularityViolated when 1 + D3Ld degenerates or D2D2Ld is
/// singular at the accepted root, NewtonDiverged when the solve fails.
std::pair<Vec, double> del_step(const DiscreteLagrangianModel& model,
                                const Vec& q_prev, const Vec& q_cur, double s_prev);

/// Right discrete Legendre transform:
///   FL+(q0, q1, s0) = (q1, D2Ld(q0, q1, s0), s0 + Ld(q0, q1, s0)).
ContactState legendre_plus(const DiscreteLagrangianModel& model, const Vec& q0,
                           const Vec& q1, double s0);

/// Left discrete Legendre transform:
///   FL-(q0, q1, s0) = (q0, -D1Ld(q0, q1, s0) / (1 + D3Ld(q0, q1, s0)), s0).
/// Throws RegularityViolated when |1 + D3Ld| < 1e-12.
ContactState legendre_minus(const DiscreteLagrangianModel& model, const Vec& q0,
                            const Vec& q1, double s0);

/// One application of the discrete Lagrangian flow on segments:
///   (q0, q1, s0) -> (q1, q2, s1) with q2 from del_step and s1 from the
/// s-evolution rule.  Conjugate to the right Hamiltonian stepper under FL+.
struct Segment {
    Vec q0;
    Vec q1;
    double s0 = 0.0;
};
Segment lagrangian_flow_phi(const DiscreteLagrangianModel& model, const Segment& seg);

/// Runs the discrete Herglotz flow from the seed segment for n steps; the
/// result holds nodes q_0 .. q_{n+1} and the accumulated s_0 .. s_{n+1}.
DiscreteCurve del_trajectory(const DiscreteLagrangianModel& model, const Vec& q0,
                             const Vec& q1, double s0, int n);

/// Inverts the left Legendre transform: finds q1 with
/// legendre_minus(q0, q1, s0).p == p0, seeding Newton at q0.  Used to start
/// the discrete flow from contact initial data (q0, p0, s0).
Vec initial_segment_from_momentum(const DiscreteLagrangianModel& model, const Vec& q0,
                                  const Vec& p0, double s0);

} // namespace cdhj
