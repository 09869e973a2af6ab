#include "cdhj/contact_core.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace cdhj {

bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

bool finite_state(const ContactState& x) {
    return all_finite(x.q) && all_finite(x.p) && std::isfinite(x.s);
}

void validate_state(const ContactState& x) {
    if (x.q.size() != x.p.size())
        throw DimensionMismatch("contact state: dim(q) = " + std::to_string(x.q.size()) +
                                " != dim(p) = " + std::to_string(x.p.size()));
    if (x.q.empty())
        throw DimensionMismatch("contact state: empty configuration");
    if (!finite_state(x))
        throw DomainError("contact state: non-finite component");
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("dot: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

Vec axpy(double a, const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: incompatible sizes");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
    return r;
}

double contact_form_pairing(const ContactState& state, const Tangent& t) {
    validate_state(state);
    if (t.dq.size() != state.q.size() || t.dp.size() != state.p.size())
        throw DimensionMismatch("contact_form_pairing: tangent dim mismatch");
    return t.ds - dot(state.p, t.dq);
}

Tangent reeb_field(std::size_t n) {
    if (n == 0) throw DimensionMismatch("reeb_field: n must be positive");
    return Tangent{Vec(n, 0.0), Vec(n, 0.0), 1.0};
}

double fd_step(double xi) {
    static const double h0 = std::cbrt(DBL_EPSILON);
    return h0 * std::max(1.0, std::abs(xi));
}

Vec finite_difference_partials(const std::function<double(const Vec&)>& f,
                               const Vec& x, double h_fd) {
    if (!(h_fd > 0.0)) throw DomainError("finite_difference_partials: h_fd must be positive");
    Vec g(x.size());
    Vec xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h_fd;
        const double fp = f(xp);
        xp[i] = x[i] - h_fd;
        const double fm = f(xp);
        xp[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw DomainError("finite_difference_partials: non-finite evaluation at coordinate " +
                              std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h_fd);
    }
    return g;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size());
    Vec xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = fd_step(x[i]);
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw DomainError("fd_gradient: non-finite evaluation at coordinate " +
                              std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& F, const Vec& x) {
    Vec xp = x;
    Mat J;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double h = fd_step(x[j]);
        xp[j] = x[j] + h;
        const Vec Fp = F(xp);
        xp[j] = x[j] - h;
        const Vec Fm = F(xp);
        xp[j] = x[j];
        if (Fp.size() != Fm.size())
            throw DimensionMismatch("fd_jacobian: inconsistent range dimension");
        if (J.empty()) J.assign(Fp.size(), Vec(x.size(), 0.0));
        if (Fp.size() != J.size())
            throw DimensionMismatch("fd_jacobian: inconsistent range dimension");
        for (std::size_t i = 0; i < Fp.size(); ++i) {
            if (!std::isfinite(Fp[i]) || !std::isfinite(Fm[i]))
                throw DomainError("fd_jacobian: non-finite evaluation in column " +
                                  std::to_string(j));
            J[i][j] = (Fp[i] - Fm[i]) / (2.0 * h);
        }
    }
    return J;
}

Vec mat_vec(const Mat& A, const Vec& x) {
    Vec r(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i].size() != x.size()) throw DimensionMismatch("mat_vec: incompatible sizes");
        r[i] = dot(A[i], x);
    }
    return r;
}

namespace {

// Row-pivoted in-place LU; returns the permutation, throws on a zero pivot.
std::vector<std::size_t> lu_factor(Mat& A) {
    const std::size_t n = A.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (A[i].size() != n) throw DimensionMismatch("lu_factor: matrix not square");
        perm[i] = i;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        if (std::abs(A[piv][k]) == 0.0)
            throw RegularityViolated("lu_factor: zero pivot in column " + std::to_string(k),
                                     std::numeric_limits<double>::infinity());
        std::swap(A[k], A[piv]);
        std::swap(perm[k], perm[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            A[i][k] /= A[k][k];
            for (std::size_t j = k + 1; j < n; ++j) A[i][j] -= A[i][k] * A[k][j];
        }
    }
    return perm;
}

Vec lu_apply(const Mat& LU, const std::vector<std::size_t>& perm, const Vec& b) {
    const std::size_t n = LU.size();
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= LU[i][j] * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= LU[i][j] * x[j];
        x[i] /= LU[i][i];
    }
    return x;
}

double norm1(const Mat& A) {
    if (A.empty()) return 0.0;
    double m = 0.0;
    for (std::size_t j = 0; j < A[0].size(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < A.size(); ++i) col += std::abs(A[i][j]);
        m = std::max(m, col);
    }
    return m;
}

} // namespace

double condition_1norm(Mat A) {
    const std::size_t n = A.size();
    if (n == 0) return 0.0;
    const double a1 = norm1(A);
    std::vector<std::size_t> perm;
    try {
        perm = lu_factor(A);
    } catch (const RegularityViolated&) {
        return std::numeric_limits<double>::infinity();
    }
    Mat inv(n, Vec(n, 0.0));
    Vec e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vec col = lu_apply(A, perm, e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return a1 * norm1(inv);
}

Vec lu_solve(Mat A, Vec b) {
    if (A.size() != b.size()) throw DimensionMismatch("lu_solve: incompatible sizes");
    const double cond = condition_1norm(A);
    if (!(cond < 1e12)) {
        std::ostringstream os;
        os << "lu_solve: condition estimate " << cond << " exceeds 1e12";
        throw RegularityViolated(os.str(), cond);
    }
    const auto perm = lu_factor(A);
    return lu_apply(A, perm, b);
}

Vec newton_solve(const std::function<Vec(const Vec&)>& F, Vec x,
                 const NewtonOptions& opt, NewtonReport* report) {
    Vec fx = F(x);
    if (fx.size() != x.size())
        throw DimensionMismatch("newton_solve: F must map R^n to R^n");
    double res = max_abs(fx);
    std::ostringstream trace;
    trace << res;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        if (!all_finite(fx))
            throw NewtonDiverged("newton_solve: non-finite residual at iteration " +
                                 std::to_string(iter) + " (trace: " + trace.str() + ")",
                                 iter, res);
        if (res <= opt.tol) break;
        const Mat J = fd_jacobian(F, x);
        Vec rhs(fx.size());
        for (std::size_t i = 0; i < fx.size(); ++i) rhs[i] = -fx[i];
        Vec dx;
        try {
            dx = lu_solve(J, rhs);
        } catch (const RegularityViolated& e) {
            throw NewtonDiverged(std::string("newton_solve: singular Jacobian (") + e.what() +
                                 "; trace: " + trace.str() + ")", iter, res);
        }
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= opt.max_halvings; ++halving) {
            const Vec cand = axpy(alpha, dx, x);
            const Vec fcand = F(cand);
            const double rcand = all_finite(fcand)
                                     ? max_abs(fcand)
                                     : std::numeric_limits<double>::infinity();
            if (rcand < res) {
                x = cand;
                fx = fcand;
                res = rcand;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        trace << " " << res;
        if (!accepted)
            throw NewtonDiverged("newton_solve: line search stalled at iteration " +
                                 std::to_string(iter) + " (trace: " + trace.str() + ")",
                                 iter, res);
    }
    if (res > opt.tol)
        throw NewtonDiverged("newton_solve: no convergence in " + std::to_string(opt.max_iter) +
                             " iterations (trace: " + trace.str() + ")", iter, res);
    if (report) {
        report->iterations = iter;
        report->residual = res;
    }
    return x;
}

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("CONTACT_DHJ_LOG");
        if (!env) return LogLevel::warn;
        const std::string v(env);
        if (v == "error") return LogLevel::error;
        if (v == "warn") return LogLevel::warn;
        if (v == "info") return LogLevel::info;
        if (v == "debug") return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

void log_msg(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::cerr << "[contact-dhj " << names[static_cast<int>(level)] << "] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// Model accessors with finite-difference fallbacks
// ---------------------------------------------------------------------------

namespace {

Vec fd_over_first(const std::function<double(const Vec&, const Vec&, double)>& f,
                  const Vec& a, const Vec& b, double c) {
    return fd_gradient([&](const Vec& x) { return f(x, b, c); }, a);
}

Vec fd_over_second(const std::function<double(const Vec&, const Vec&, double)>& f,
                   const Vec& a, const Vec& b, double c) {
    return fd_gradient([&](const Vec& x) { return f(a, x, c); }, b);
}

double fd_over_scalar(const std::function<double(const Vec&, const Vec&, double)>& f,
                      const Vec& a, const Vec& b, double c) {
    const double h = fd_step(c);
    const double fp = f(a, b, c + h);
    const double fm = f(a, b, c - h);
    if (!std::isfinite(fp) || !std::isfinite(fm))
        throw DomainError("fd_over_scalar: non-finite evaluation");
    return (fp - fm) / (2.0 * h);
}

} // namespace

double ContinuousHamiltonianModel::H(const Vec& q, const Vec& p, double s) const {
    return value(q, p, s);
}
Vec ContinuousHamiltonianModel::Hq(const Vec& q, const Vec& p, double s) const {
    return dq ? dq(q, p, s) : fd_over_first(value, q, p, s);
}
Vec ContinuousHamiltonianModel::Hp(const Vec& q, const Vec& p, double s) const {
    return dp ? dp(q, p, s) : fd_over_second(value, q, p, s);
}
double ContinuousHamiltonianModel::Hs(const Vec& q, const Vec& p, double s) const {
    return ds ? ds(q, p, s) : fd_over_scalar(value, q, p, s);
}

double ContinuousLagrangianModel::L(const Vec& q, const Vec& v, double s) const {
    return value(q, v, s);
}
Vec ContinuousLagrangianModel::Lq(const Vec& q, const Vec& v, double s) const {
    return dq ? dq(q, v, s) : fd_over_first(value, q, v, s);
}
Vec ContinuousLagrangianModel::Lv(const Vec& q, const Vec& v, double s) const {
    return dv ? dv(q, v, s) : fd_over_second(value, q, v, s);
}
double ContinuousLagrangianModel::Ls(const Vec& q, const Vec& v, double s) const {
    return ds ? ds(q, v, s) : fd_over_scalar(value, q, v, s);
}
Mat ContinuousLagrangianModel::Lvv(const Vec& q, const Vec& v, double s) const {
    if (d2vv) return d2vv(q, v, s);
    return fd_jacobian([&](const Vec& w) { return Lv(q, w, s); }, v);
}
Mat ContinuousLagrangianModel::Lvq(const Vec& q, const Vec& v, double s) const {
    if (d2vq) return d2vq(q, v, s);
    return fd_jacobian([&](const Vec& x) { return Lv(x, v, s); }, q);
}
Vec ContinuousLagrangianModel::Lvs(const Vec& q, const Vec& v, double s) const {
    if (d2vs) return d2vs(q, v, s);
    const double h = fd_step(s);
    const Vec fp = Lv(q, v, s + h);
    const Vec fm = Lv(q, v, s - h);
    Vec r(fp.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (fp[i] - fm[i]) / (2.0 * h);
    return r;
}

double DiscreteLagrangianModel::Ld(const Vec& q0, const Vec& q1, double s0) const {
    return value(q0, q1, s0);
}
Vec DiscreteLagrangianModel::D1(const Vec& q0, const Vec& q1, double s0) const {
    return d1 ? d1(q0, q1, s0) : fd_over_first(value, q0, q1, s0);
}
Vec DiscreteLagrangianModel::D2(const Vec& q0, const Vec& q1, double s0) const {
    return d2 ? d2(q0, q1, s0) : fd_over_second(value, q0, q1, s0);
}
double DiscreteLagrangianModel::D3(const Vec& q0, const Vec& q1, double s0) const {
    return d3 ? d3(q0, q1, s0) : fd_over_scalar(value, q0, q1, s0);
}
Mat DiscreteLagrangianModel::D2D2(const Vec& q0, const Vec& q1, double s0) const {
    if (d22) return d22(q0, q1, s0);
    return fd_jacobian([&](const Vec& x) { return D2(q0, x, s0); }, q1);
}

double DiscreteHamiltonianModel::Hd(const Vec& a, const Vec& b, double c) const {
    return value(a, b, c);
}
Vec DiscreteHamiltonianModel::D1(const Vec& a, const Vec& b, double c) const {
    return d1 ? d1(a, b, c) : fd_over_first(value, a, b, c);
}
Vec DiscreteHamiltonianModel::D2(const Vec& a, const Vec& b, double c) const {
    return d2 ? d2(a, b, c) : fd_over_second(value, a, b, c);
}
double DiscreteHamiltonianModel::D3(const Vec& a, const Vec& b, double c) const {
    return d3 ? d3(a, b, c) : fd_over_scalar(value, a, b, c);
}

} // namespace cdhj
