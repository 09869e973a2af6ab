#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

/// Core state types, model interfaces, derivative utilities, and the
/// coordinate-level contact-geometry primitives shared by every other part
/// of the library.  All coordinates are Darboux coordinates (q, p, s) on
/// T*Q x R with contact form eta = ds - p.dq.
namespace cdhj {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>; // dense, row-major, small n only

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Non-finite evaluation, out-of-domain interpolation query, invalid input.
struct DomainError : Error {
    using Error::Error;
};

/// 1 + D3Ld ~ 0, singular D2D2Ld, or an ill-conditioned linear solve.
struct RegularityViolated : Error {
    double condition;
    explicit RegularityViolated(const std::string& what_arg, double cond = 0.0)
        : Error(what_arg), condition(cond) {}
};

struct NewtonDiverged : Error {
    int iterations;
    double final_residual;
    NewtonDiverged(const std::string& what_arg, int iters, double resid)
        : Error(what_arg), iterations(iters), final_residual(resid) {}
};

/// The stepper's non-degeneracy condition failed (e.g. 1 - D3H+ ~ 0, or the
/// parachute closed form hit p = 0).
struct DegenerateStep : Error {
    using Error::Error;
};

/// Characteristics crossed (propagated nodes fold or focally compress).
struct CausticError : Error {
    int step_index;
    explicit CausticError(const std::string& what_arg, int step = -1)
        : Error(what_arg), step_index(step) {}
};

// ---------------------------------------------------------------------------
// State types
// ---------------------------------------------------------------------------

/// A point (q, p, s) of the extended phase space T*Q x R.
struct ContactState {
    Vec q;
    Vec p;
    double s = 0.0;
};

/// A point (q, qdot, s) of the extended velocity space TQ x R.
struct VelocityState {
    Vec q;
    Vec v;
    double s = 0.0;
};

/// Fiber element of T(T*Q x R); houses (qdot, pdot, sdot).
struct Tangent {
    Vec dq;
    Vec dp;
    double ds = 0.0;
};

bool all_finite(const Vec& x);
bool finite_state(const ContactState& x);

/// Throws DimensionMismatch / DomainError unless the state satisfies the
/// ContactState invariants (equal dims, all components finite).
void validate_state(const ContactState& x);

double dot(const Vec& a, const Vec& b);
double max_abs(const Vec& x);
Vec axpy(double a, const Vec& x, const Vec& y); // a*x + y

// ---------------------------------------------------------------------------
// Contact primitives
// ---------------------------------------------------------------------------

/// eta(t) at the state: t.ds - dot(state.p, t.dq).  Exact, no tolerance.
double contact_form_pairing(const ContactState& state, const Tangent& t);

/// The Reeb field R = d/ds in Darboux coordinates: (0_n, 0_n, 1).
Tangent reeb_field(std::size_t n);

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Central-difference step: cbrt(machine epsilon) * max(1, |xi|).
double fd_step(double xi);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h) with a fixed h.
Vec finite_difference_partials(const std::function<double(const Vec&)>& f,
                               const Vec& x, double h_fd);

/// Central-difference gradient with the per-coordinate optimal step.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x);

/// Central-difference Jacobian of a vector map, per-coordinate optimal step.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& F, const Vec& x);

// ---------------------------------------------------------------------------
// Dense linear algebra (n is small everywhere in this library)
// ---------------------------------------------------------------------------

Vec mat_vec(const Mat& A, const Vec& x);

/// Solves A x = b by partially pivoted LU.  Throws RegularityViolated when
/// the 1-norm condition estimate exceeds 1e12 or a pivot vanishes.
Vec lu_solve(Mat A, Vec b);

/// 1-norm condition number via the explicit inverse (fine for tiny n).
double condition_1norm(Mat A);

// ---------------------------------------------------------------------------
// Damped Newton
// ---------------------------------------------------------------------------

struct NewtonOptions {
    double tol = 1e-11;   // absolute residual tolerance, max norm
    int max_iter = 50;
    int max_halvings = 8; // backtracking line search
};

struct NewtonReport {
    int iterations = 0;
    double residual = 0.0;
};

/// Solves F(x) = 0 from seed x.  The Jacobian is obtained by central finite
/// differences of F.  Throws NewtonDiverged (carrying the iteration count and
/// final residual) when the tolerance is unreachable; the divergence message
/// includes the residual trace.
Vec newton_solve(const std::function<Vec(const Vec&)>& F, Vec x,
                 const NewtonOptions& opt = {}, NewtonReport* report = nullptr);

// ---------------------------------------------------------------------------
// Logging (stderr, level from CONTACT_DHJ_LOG in {error, warn, info, debug})
// ---------------------------------------------------------------------------

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();
void log_msg(LogLevel level, const std::string& msg);

// ---------------------------------------------------------------------------
// Model interfaces.  Models are immutable after construction and all
// evaluators are pure; missing analytic partials fall back to central finite
// differences of the value evaluator.
// ---------------------------------------------------------------------------

/// H(q, p, s) with partials H_q, H_p (vectors) and H_s (scalar).
struct ContinuousHamiltonianModel {
    std::size_t dim = 1;
    std::function<double(const Vec&, const Vec&, double)> value;
    std::function<Vec(const Vec&, const Vec&, double)> dq; // optional
    std::function<Vec(const Vec&, const Vec&, double)> dp; // optional
    std::function<double(const Vec&, const Vec&, double)> ds; // optional

    double H(const Vec& q, const Vec& p, double s) const;
    Vec Hq(const Vec& q, const Vec& p, double s) const;
    Vec Hp(const Vec& q, const Vec& p, double s) const;
    double Hs(const Vec& q, const Vec& p, double s) const;
};

/// L(q, v, s) with partials L_q, L_v, L_s and velocity Hessian L_vv; the
/// cross blocks L_vq, L_vs default to finite differences of L_v.
struct ContinuousLagrangianModel {
    std::size_t dim = 1;
    std::function<double(const Vec&, const Vec&, double)> value;
    std::function<Vec(const Vec&, const Vec&, double)> dq;      // optional
    std::function<Vec(const Vec&, const Vec&, double)> dv;      // optional
    std::function<double(const Vec&, const Vec&, double)> ds;   // optional
    std::function<Mat(const Vec&, const Vec&, double)> d2vv;    // optional
    std::function<Mat(const Vec&, const Vec&, double)> d2vq;    // optional
    std::function<Vec(const Vec&, const Vec&, double)> d2vs;    // optional

    double L(const Vec& q, const Vec& v, double s) const;
    Vec Lq(const Vec& q, const Vec& v, double s) const;
    Vec Lv(const Vec& q, const Vec& v, double s) const;
    double Ls(const Vec& q, const Vec& v, double s) const;
    Mat Lvv(const Vec& q, const Vec& v, double s) const;
    Mat Lvq(const Vec& q, const Vec& v, double s) const;
    Vec Lvs(const Vec& q, const Vec& v, double s) const;
};

/// L_d(q0, q1, s0) with slot partials D1, D2 (vectors), D3 (scalar) and the
/// regularity block D2D2Ld.
struct DiscreteLagrangianModel {
    std::size_t dim = 1;
    std::function<double(const Vec&, const Vec&, double)> value;
    std::function<Vec(const Vec&, const Vec&, double)> d1;   // optional
    std::function<Vec(const Vec&, const Vec&, double)> d2;   // optional
    std::function<double(const Vec&, const Vec&, double)> d3; // optional
    std::function<Mat(const Vec&, const Vec&, double)> d22;  // optional

    double Ld(const Vec& q0, const Vec& q1, double s0) const;
    Vec D1(const Vec& q0, const Vec& q1, double s0) const;
    Vec D2(const Vec& q0, const Vec& q1, double s0) const;
    double D3(const Vec& q0, const Vec& q1, double s0) const;
    Mat D2D2(const Vec& q0, const Vec& q1, double s0) const;
};

enum class Side { right, left };

/// H+_d(q_k, p_{k+1}, s_k) for side == right, H-_d(p_k, q_{k+1}, s_{k+1})
/// for side == left, with slot partials D1, D2 (vectors) and D3 (scalar).
struct DiscreteHamiltonianModel {
    Side side = Side::right;
    std::size_t dim = 1;
    std::function<double(const Vec&, const Vec&, double)> value;
    std::function<Vec(const Vec&, const Vec&, double)> d1;   // optional
    std::function<Vec(const Vec&, const Vec&, double)> d2;   // optional
    std::function<double(const Vec&, const Vec&, double)> d3; // optional

    double Hd(const Vec& a, const Vec& b, double c) const;
    Vec D1(const Vec& a, const Vec& b, double c) const;
    Vec D2(const Vec& a, const Vec& b, double c) const;
    double D3(const Vec& a, const Vec& b, double c) const;
};

} // namespace cdhj
