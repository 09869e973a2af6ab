#include "cdhj/discrete_lagrangian.hpp"

#include <cmath>
#include <cstdio>

namespace cdhj {

namespace {

constexpr double kDegenerate = 1e-12;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

void check_dims(const DiscreteLagrangianModel& model, const Vec& a, const Vec& b,
                const char* where) {
    if (a.size() != model.dim || b.size() != model.dim)
        throw DimensionMismatch(std::string(where) + ": node dim != model dim");
}

// det via LU pivots together with the Hadamard scale (product of row norms),
// so the singularity test |det| < 1e-12 * scale is invariant under rescaling.
void check_d2d2_regular(const DiscreteLagrangianModel& model, const Vec& q0,
                        const Vec& q1, double s0) {
    Mat a = model.D2D2(q0, q1, s0);
    const std::size_t n = a.size();
    double scale = 1.0;
    for (const Vec& row : a) {
        double norm = 0.0;
        for (double v : row) norm += v * v;
        scale *= std::sqrt(norm);
    }
    double det = 1.0;
    for (std::size_t k = 0; k < n && det != 0.0; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (piv != k) {
            std::swap(a[k], a[piv]);
            det = -det;
        }
        det *= a[k][k];
        if (a[k][k] == 0.0) break;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    if (!(std::abs(det) >= kDegenerate * scale) || scale == 0.0)
        throw RegularityViolated("del_step: det(D2D2Ld) = " + sci(det) +
                                 " fails the regularity condition", std::abs(det));
}

} // namespace

Vec evolve_s(const DiscreteLagrangianModel& model, const std::vector<Vec>& q_nodes,
             double s0) {
    if (q_nodes.empty()) throw DomainError("evolve_s: empty node sequence");
    Vec s;
    s.reserve(q_nodes.size());
    s.push_back(s0);
    for (std::size_t k = 0; k + 1 < q_nodes.size(); ++k) {
        check_dims(model, q_nodes[k], q_nodes[k + 1], "evolve_s");
        const double next = s.back() + model.Ld(q_nodes[k], q_nodes[k + 1], s.back());
        if (!std::isfinite(next))
            throw DomainError("evolve_s: non-finite s after segment " + std::to_string(k));
        s.push_back(next);
    }
    return s;
}

double discrete_action(const DiscreteLagrangianModel& model,
                       const std::vector<Vec>& q_nodes, double s0) {
    return evolve_s(model, q_nodes, s0).back();
}

Vec herglotz_residual(const DiscreteLagrangianModel& model, const Vec& q_prev,
                      const Vec& q_cur, const Vec& q_next, double s_prev) {
    check_dims(model, q_prev, q_cur, "herglotz_residual");
    check_dims(model, q_cur, q_next, "herglotz_residual");
    const double s_cur = s_prev + model.Ld(q_prev, q_cur, s_prev);
    const Vec d1 = model.D1(q_cur, q_next, s_cur);
    const double d3 = model.D3(q_cur, q_next, s_cur);
    const Vec d2 = model.D2(q_prev, q_cur, s_prev);
    Vec r(d1.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = d1[i] + (1.0 + d3) * d2[i];
    return r;
}

std::pair<Vec, double> del_step(const DiscreteLagrangianModel& model,
                                const Vec& q_prev, const Vec& q_cur, double s_prev) {
    check_dims(model, q_prev, q_cur, "del_step");
    const double s_cur = s_prev + model.Ld(q_prev, q_cur, s_prev);

    Vec seed(q_cur.size());
    for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = 2.0 * q_cur[i] - q_prev[i];

    const double d3_seed = model.D3(q_cur, seed, s_cur);
    if (std::abs(1.0 + d3_seed) < kDegenerate)
        throw RegularityViolated("del_step: 1 + D3Ld = " + sci(1.0 + d3_seed) +
                                 " at the extrapolation seed", std::abs(1.0 + d3_seed));

    const Vec q_next = newton_solve(
        [&](const Vec& x) { return herglotz_residual(model, q_prev, q_cur, x, s_prev); },
        seed);

    const double d3 = model.D3(q_cur, q_next, s_cur);
    if (std::abs(1.0 + d3) < kDegenerate)
        throw RegularityViolated("del_step: 1 + D3Ld = " + sci(1.0 + d3) +
                                 " at the accepted root", std::abs(1.0 + d3));
    check_d2d2_regular(model, q_cur, q_next, s_cur);
    return {q_next, s_cur};
}

ContactState legendre_plus(const DiscreteLagrangianModel& model, const Vec& q0,
                           const Vec& q1, double s0) {
    check_dims(model, q0, q1, "legendre_plus");
    ContactState out;
    out.q = q1;
    out.p = model.D2(q0, q1, s0);
    out.s = s0 + model.Ld(q0, q1, s0);
    validate_state(out);
    return out;
}

ContactState legendre_minus(const DiscreteLagrangianModel& model, const Vec& q0,
                            const Vec& q1, double s0) {
    check_dims(model, q0, q1, "legendre_minus");
    const double d3 = model.D3(q0, q1, s0);
    if (std::abs(1.0 + d3) < kDegenerate)
        throw RegularityViolated("legendre_minus: 1 + D3Ld = " + sci(1.0 + d3),
                                 std::abs(1.0 + d3));
    const Vec d1 = model.D1(q0, q1, s0);
    ContactState out;
    out.q = q0;
    out.p.resize(d1.size());
    for (std::size_t i = 0; i < d1.size(); ++i) out.p[i] = -d1[i] / (1.0 + d3);
    out.s = s0;
    validate_state(out);
    return out;
}

Segment lagrangian_flow_phi(const DiscreteLagrangianModel& model, const Segment& seg) {
    const auto [q2, s1_check] = del_step(model, seg.q0, seg.q1, seg.s0);
    Segment out;
    out.q0 = seg.q1;
    out.q1 = q2;
    out.s0 = seg.s0 + model.Ld(seg.q0, seg.q1, seg.s0);
    (void)s1_check;
    return out;
}

DiscreteCurve del_trajectory(const DiscreteLagrangianModel& model, const Vec& q0,
                             const Vec& q1, double s0, int n) {
    if (n < 0) throw DomainError("del_trajectory: negative step count");
    DiscreteCurve curve;
    curve.q = {q0, q1};
    curve.s = {s0, s0 + model.Ld(q0, q1, s0)};
    for (int k = 0; k < n; ++k) {
        const std::size_t m = curve.q.size();
        const auto [q_next, s_cur] = del_step(model, curve.q[m - 2], curve.q[m - 1],
                                              curve.s[m - 2]);
        (void)s_cur;
        curve.q.push_back(q_next);
        curve.s.push_back(curve.s.back() +
                          model.Ld(curve.q[m - 1], q_next, curve.s.back()));
    }
    return curve;
}

Vec initial_segment_from_momentum(const DiscreteLagrangianModel& model, const Vec& q0,
                                  const Vec& p0, double s0) {
    check_dims(model, q0, p0, "initial_segment_from_momentum");
    return newton_solve(
        [&](const Vec& x) {
            const Vec pm = legendre_minus(model, q0, x, s0).p;
            Vec r(pm.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = pm[i] - p0[i];
            return r;
        },
        q0);
}

} // namespace cdhj
