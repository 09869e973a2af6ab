#pragma once

#include "cdhj/contact_core.hpp"
#include "cdhj/discrete_hamiltonian.hpp"

/// Continuous and discrete Hamilton-Jacobi machinery: residuals of the HJ
/// equations, generating-function propagation along characteristics, the
/// projected node flow, and the commutation check between the two.
namespace cdhj {

// ---------------------------------------------------------------------------
// Continuous side
// ---------------------------------------------------------------------------

/// A section gamma(q) = (q, F_q(q), F(q)) of T*Q x R -> Q given by a scalar
/// generating function F.  Missing derivative evaluators fall back to
/// central finite differences.
struct Section {
    std::function<double(const Vec&)> F;
    std::function<Vec(const Vec&)> Fq;   // optional
    std::function<Mat(const Vec&)> Fqq;  // optional

    double value(const Vec& q) const;
    Vec grad(const Vec& q) const;
    Mat hess(const Vec& q) const;
};

struct ContinuousHJResult {
    double value = 0.0;
    Vec gradient;
};

/// Residual of the contact Hamilton-Jacobi equation at q:
///   value = H(q, F_q(q), F(q)),
/// together with its finite-difference gradient over q.  F solves the HJ
/// equation on a region iff both vanish there.
ContinuousHJResult continuous_hj_residual(const ContinuousHamiltonianModel& model,
                                          const Section& gamma, const Vec& q);

/// Max-norm gap between the two legs of the gamma-relatedness identity,
///   X_H(gamma(q))  vs  T gamma(X_H^gamma(q)),
/// where X_H^gamma is the projected field qdot = H_p(gamma(q)).  Zero (to
/// roundoff) exactly when F solves the HJ equation near q.
double section_relatedness_gap(const ContinuousHamiltonianModel& model,
                               const Section& gamma, const Vec& q);

// ---------------------------------------------------------------------------
// Discrete side (configuration dimension 1)
// ---------------------------------------------------------------------------

/// Tabulated generating function S on a strictly increasing 1-D node grid,
/// with exact nodal derivatives dS.  Evaluation between nodes uses cubic
/// Hermite interpolation, so both value and derivative reproduce the stored
/// nodal data exactly.  Queries outside the node span raise DomainError.
struct GeneratingFunctionGrid {
    Vec nodes;
    Vec S;
    Vec dS;

    double value(double q) const;
    double derivative(double q) const;
    double width() const;
};

/// Validates the grid invariants (matching sizes >= 2, strictly increasing
/// finite nodes, finite data) and returns the grid.
GeneratingFunctionGrid make_grid(Vec nodes, Vec S, Vec dS);

/// Samples S and dS on n uniform nodes over [q_min, q_max].
GeneratingFunctionGrid grid_from_function(const std::function<double(double)>& S,
                                          const std::function<double(double)>& dS,
                                          double q_min, double q_max, int n);

/// Residual of the right discrete Hamilton-Jacobi equation for the pair of
/// generating functions (S_k, S_{k+1}) at configuration nodes (q_k, q_{k+1}):
///   S_{k+1}(q_{k+1}) - S_k(q_k) - dS_{k+1}(q_{k+1}) q_{k+1}
///     + H+(q_k, dS_{k+1}(q_{k+1}), S_k(q_k)).
double hj_residual_right(const DiscreteHamiltonianModel& model,
                         const GeneratingFunctionGrid& S_cur,
                         const GeneratingFunctionGrid& S_next, double q_cur,
                         double q_next);

/// Left-side mirror:
///   S_{k+1}(q_{k+1}) - S_k(q_k) + dS_k(q_k) q_k
///     + H-(dS_k(q_k), q_{k+1}, S_{k+1}(q_{k+1})).
double hj_residual_left(const DiscreteHamiltonianModel& model,
                        const GeneratingFunctionGrid& S_cur,
                        const GeneratingFunctionGrid& S_next, double q_cur,
                        double q_next);

/// Pushes a generating-function grid through one right step: every node is
/// lifted to (q, dS(q), S(q)), stepped, and the images (q', s', p') form the
/// new grid.  A reversed image ordering is accepted and flipped back.
/// Throws CausticError when the node images fold (lose strict monotonicity)
/// or focally compress (image span below 0.1 of the input span), DomainError
/// when an image is non-finite.
GeneratingFunctionGrid propagate_generating_function(
    const DiscreteHamiltonianModel& model, const GeneratingFunctionGrid& grid);

/// The flow q_k -> q_{k+1} induced on configurations by the pair
/// (S_k, S_{k+1}): solves q_{k+1} = D2H+(q_k, dS_{k+1}(q_{k+1}), S_k(q_k))
/// with Newton seeded at the right-step image of the lifted node.
double projected_flow(const DiscreteHamiltonianModel& model,
                      const GeneratingFunctionGrid& S_cur,
                      const GeneratingFunctionGrid& S_next, double q_cur);

/// Max-norm commutation defect between stepping the lifted probe and lifting
/// the projected probe:
///   max over probes of | right_step(gamma_k(q)) - gamma_{k+1}(projected_flow(q)) |
/// where gamma_j(x) = (x, dS_j(x), S_j(x)).
double commutation_check(const DiscreteHamiltonianModel& model,
                         const GeneratingFunctionGrid& S_cur,
                         const GeneratingFunctionGrid& S_next, const Vec& probes);

} // namespace cdhj
