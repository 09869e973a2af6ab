#include "cdhj/continuous.hpp"

#include <cmath>

namespace cdhj {

Tangent contact_vector_field(const ContinuousHamiltonianModel& model,
                             const ContactState& state) {
    validate_state(state);
    if (state.q.size() != model.dim)
        throw DimensionMismatch("contact_vector_field: state dim != model dim");
    const Vec hp = model.Hp(state.q, state.p, state.s);
    const Vec hq = model.Hq(state.q, state.p, state.s);
    const double hs = model.Hs(state.q, state.p, state.s);
    const double h = model.H(state.q, state.p, state.s);
    Tangent out;
    out.dq = hp;
    out.dp.resize(state.p.size());
    for (std::size_t i = 0; i < state.p.size(); ++i)
        out.dp[i] = -(hq[i] + state.p[i] * hs);
    out.ds = dot(state.p, hp) - h;
    return out;
}

Tangent herglotz_rhs(const ContinuousLagrangianModel& model,
                     const VelocityState& state) {
    if (state.q.size() != state.v.size())
        throw DimensionMismatch("herglotz_rhs: dim(q) != dim(v)");
    const Vec& q = state.q;
    const Vec& v = state.v;
    const double s = state.s;

    const double lval = model.L(q, v, s);
    const Vec lq = model.Lq(q, v, s);
    const Vec lv = model.Lv(q, v, s);
    const double ls = model.Ls(q, v, s);
    const Mat lvq = model.Lvq(q, v, s);
    const Vec lvs = model.Lvs(q, v, s);
    const Mat lvv = model.Lvv(q, v, s);

    const Vec lvq_v = mat_vec(lvq, v);
    Vec rhs(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        rhs[i] = lq[i] + ls * lv[i] - lvq_v[i] - lvs[i] * lval;

    Vec a;
    try {
        a = lu_solve(lvv, rhs);
    } catch (const RegularityViolated& e) {
        throw RegularityViolated(std::string("herglotz_rhs: velocity Hessian not invertible (") +
                                 e.what() + ")", e.condition);
    }
    return Tangent{v, a, lval};
}

Trajectory integrate_rk4(const std::function<Tangent(const ContactState&)>& field,
                         const ContactState& x0, double h, int n, double t0) {
    validate_state(x0);
    if (n < 0) throw DomainError("integrate_rk4: negative step count");
    const std::size_t dim = x0.q.size();

    auto pack = [dim](const ContactState& x) {
        Vec y(2 * dim + 1);
        for (std::size_t i = 0; i < dim; ++i) { y[i] = x.q[i]; y[dim + i] = x.p[i]; }
        y[2 * dim] = x.s;
        return y;
    };
    auto unpack = [dim](const Vec& y) {
        ContactState x;
        x.q.assign(y.begin(), y.begin() + dim);
        x.p.assign(y.begin() + dim, y.begin() + 2 * dim);
        x.s = y[2 * dim];
        return x;
    };
    auto rhs = [&](double, const Vec& y) {
        const Tangent t = field(unpack(y));
        Vec dy(2 * dim + 1);
        for (std::size_t i = 0; i < dim; ++i) { dy[i] = t.dq[i]; dy[dim + i] = t.dp[i]; }
        dy[2 * dim] = t.ds;
        return dy;
    };

    const std::vector<Vec> flat = rk4_flat(rhs, pack(x0), h, n, t0);
    Trajectory traj;
    traj.times.reserve(flat.size());
    traj.states.reserve(flat.size());
    for (std::size_t k = 0; k < flat.size(); ++k) {
        traj.times.push_back(t0 + static_cast<double>(k) * h);
        traj.states.push_back(unpack(flat[k]));
    }
    return traj;
}

std::vector<Vec> rk4_flat(const std::function<Vec(double, const Vec&)>& rhs,
                          const Vec& x0, double h, int n, double t0) {
    if (n < 0) throw DomainError("rk4_flat: negative step count");
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(x0);
    Vec x = x0;
    for (int k = 0; k < n; ++k) {
        const double t = t0 + k * h;
        const Vec k1 = rhs(t, x);
        const Vec k2 = rhs(t + 0.5 * h, axpy(0.5 * h, k1, x));
        const Vec k3 = rhs(t + 0.5 * h, axpy(0.5 * h, k2, x));
        const Vec k4 = rhs(t + h, axpy(h, k3, x));
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!all_finite(x))
            throw DomainError("rk4_flat: non-finite state after step " + std::to_string(k + 1));
        out.push_back(x);
    }
    return out;
}

} // namespace cdhj
