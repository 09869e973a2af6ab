#include "cdhj/models.hpp"

#include <cfloat>
#include <cmath>

namespace cdhj {

// ---------------------------------------------------------------------------
// Parachute
// ---------------------------------------------------------------------------

namespace {

void check_parachute(const ParachuteParams& p) {
    if (p.lambda == 0.0) throw DomainError("parachute: lambda must be nonzero");
    if (!(p.m > 0.0)) throw DomainError("parachute: mass must be positive");
}

} // namespace

DiscreteHamiltonianModel parachute_right_hamiltonian(const ParachuteParams& params) {
    check_parachute(params);
    const double lam = params.lambda, m = params.m, g = params.g;
    DiscreteHamiltonianModel model;
    model.side = Side::right;
    model.dim = 1;
    model.value = [lam, m, g](const Vec& q, const Vec& p, double s) {
        const double w = p[0] + 2.0 * lam * s;
        return w * w / (2.0 * m) + (m * g / (2.0 * lam)) * (std::exp(2.0 * lam * q[0]) - 1.0);
    };
    model.d1 = [lam, m, g](const Vec& q, const Vec&, double) {
        return Vec{m * g * std::exp(2.0 * lam * q[0])};
    };
    model.d2 = [lam, m](const Vec&, const Vec& p, double s) {
        return Vec{(p[0] + 2.0 * lam * s) / m};
    };
    model.d3 = [lam, m](const Vec&, const Vec& p, double s) {
        return (2.0 * lam / m) * (p[0] + 2.0 * lam * s);
    };
    return model;
}

ContactState parachute_closed_form_step(const ParachuteParams& params,
                                        const ContactState& x) {
    check_parachute(params);
    validate_state(x);
    if (x.q.size() != 1) throw DimensionMismatch("parachute_closed_form_step: 1-D only");
    const double lam = params.lambda, m = params.m, g = params.g;
    const double q = x.q[0], p = x.p[0], s = x.s;
    if (std::abs(p) < DBL_MIN)
        throw DegenerateStep("parachute_closed_form_step: p = 0");

    const double p1 = (m / (2.0 * lam)) * (1.0 - m * g * std::exp(2.0 * lam * q) / p) -
                      2.0 * lam * s;
    const double q1 = (p1 + 2.0 * lam * s) / m;
    const double w = p1 + 2.0 * lam * s;
    const double h_val = w * w / (2.0 * m) +
                         (m * g / (2.0 * lam)) * (std::exp(2.0 * lam * q) - 1.0);
    ContactState out{Vec{q1}, Vec{p1}, s + p1 * q1 - h_val};
    validate_state(out);
    return out;
}

double parachute_s_identity_gap(const ParachuteParams& params, const ContactState& x,
                                const ContactState& x_next) {
    check_parachute(params);
    const double lam = params.lambda, m = params.m, g = params.g;
    const double lhs = x_next.s - x.s;
    const double rhs = (x_next.p[0] * x_next.p[0] - 4.0 * lam * lam * x.s * x.s) /
                           (2.0 * m) -
                       (m * g / (2.0 * lam)) * (std::exp(2.0 * lam * x.q[0]) - 1.0);
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Damped harmonic oscillator
// ---------------------------------------------------------------------------

DampedOscillatorModels damped_oscillator_models(double omega, double gamma, double h,
                                                std::size_t dim) {
    if (!(h > 0.0)) throw DomainError("damped_oscillator_models: h must be positive");
    const double w2 = omega * omega;

    DampedOscillatorModels out;

    out.lagrangian.dim = dim;
    out.lagrangian.value = [w2, gamma](const Vec& q, const Vec& v, double s) {
        return 0.5 * dot(v, v) - 0.5 * w2 * dot(q, q) - gamma * s;
    };
    out.lagrangian.dq = [w2](const Vec& q, const Vec&, double) {
        Vec r(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) r[i] = -w2 * q[i];
        return r;
    };
    out.lagrangian.dv = [](const Vec&, const Vec& v, double) { return v; };
    out.lagrangian.ds = [gamma](const Vec&, const Vec&, double) { return -gamma; };
    out.lagrangian.d2vv = [](const Vec&, const Vec& v, double) {
        Mat eye(v.size(), Vec(v.size(), 0.0));
        for (std::size_t i = 0; i < v.size(); ++i) eye[i][i] = 1.0;
        return eye;
    };

    out.hamiltonian.dim = dim;
    out.hamiltonian.value = [w2, gamma](const Vec& q, const Vec& p, double s) {
        return 0.5 * dot(p, p) + 0.5 * w2 * dot(q, q) + gamma * s;
    };
    out.hamiltonian.dq = [w2](const Vec& q, const Vec&, double) {
        Vec r(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) r[i] = w2 * q[i];
        return r;
    };
    out.hamiltonian.dp = [](const Vec&, const Vec& p, double) { return p; };
    out.hamiltonian.ds = [gamma](const Vec&, const Vec&, double) { return gamma; };

    out.discrete.dim = dim;
    out.discrete.value = [w2, gamma, h](const Vec& q0, const Vec& q1, double s0) {
        double kin = 0.0, pot = 0.0;
        for (std::size_t i = 0; i < q0.size(); ++i) {
            const double v = (q1[i] - q0[i]) / h;
            const double mid = 0.5 * (q0[i] + q1[i]);
            kin += v * v;
            pot += mid * mid;
        }
        return h * (0.5 * kin - 0.5 * w2 * pot - gamma * s0);
    };
    out.discrete.d1 = [w2, h](const Vec& q0, const Vec& q1, double) {
        Vec r(q0.size());
        for (std::size_t i = 0; i < q0.size(); ++i)
            r[i] = -(q1[i] - q0[i]) / h - 0.25 * h * w2 * (q0[i] + q1[i]);
        return r;
    };
    out.discrete.d2 = [w2, h](const Vec& q0, const Vec& q1, double) {
        Vec r(q0.size());
        for (std::size_t i = 0; i < q0.size(); ++i)
            r[i] = (q1[i] - q0[i]) / h - 0.25 * h * w2 * (q0[i] + q1[i]);
        return r;
    };
    out.discrete.d3 = [gamma, h](const Vec&, const Vec&, double) { return -h * gamma; };
    out.discrete.d22 = [w2, h, dim](const Vec&, const Vec&, double) {
        Mat a(dim, Vec(dim, 0.0));
        for (std::size_t i = 0; i < dim; ++i) a[i][i] = 1.0 / h - 0.25 * h * w2;
        return a;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Free particle and relatives
// ---------------------------------------------------------------------------

ContinuousHamiltonianModel free_particle_hamiltonian(std::size_t dim) {
    ContinuousHamiltonianModel model;
    model.dim = dim;
    model.value = [](const Vec&, const Vec& p, double) { return 0.5 * dot(p, p); };
    model.dq = [](const Vec& q, const Vec&, double) { return Vec(q.size(), 0.0); };
    model.dp = [](const Vec&, const Vec& p, double) { return p; };
    model.ds = [](const Vec&, const Vec&, double) { return 0.0; };
    return model;
}

DiscreteLagrangianModel free_particle_discrete(double h, std::size_t dim) {
    return damped_free_particle_discrete(h, 0.0, dim);
}

DiscreteLagrangianModel damped_free_particle_discrete(double h, double gamma,
                                                      std::size_t dim) {
    if (!(h > 0.0)) throw DomainError("damped_free_particle_discrete: h must be positive");
    DiscreteLagrangianModel model;
    model.dim = dim;
    model.value = [h, gamma](const Vec& q0, const Vec& q1, double s0) {
        double kin = 0.0;
        for (std::size_t i = 0; i < q0.size(); ++i) {
            const double d = q1[i] - q0[i];
            kin += d * d;
        }
        return kin / (2.0 * h) - h * gamma * s0;
    };
    model.d1 = [h](const Vec& q0, const Vec& q1, double) {
        Vec r(q0.size());
        for (std::size_t i = 0; i < q0.size(); ++i) r[i] = -(q1[i] - q0[i]) / h;
        return r;
    };
    model.d2 = [h](const Vec& q0, const Vec& q1, double) {
        Vec r(q0.size());
        for (std::size_t i = 0; i < q0.size(); ++i) r[i] = (q1[i] - q0[i]) / h;
        return r;
    };
    model.d3 = [h, gamma](const Vec&, const Vec&, double) { return -h * gamma; };
    model.d22 = [h, dim](const Vec&, const Vec&, double) {
        Mat a(dim, Vec(dim, 0.0));
        for (std::size_t i = 0; i < dim; ++i) a[i][i] = 1.0 / h;
        return a;
    };
    return model;
}

DiscreteHamiltonianModel free_particle_right(double h, std::size_t dim) {
    if (!(h > 0.0)) throw DomainError("free_particle_right: h must be positive");
    DiscreteHamiltonianModel model;
    model.side = Side::right;
    model.dim = dim;
    model.value = [h](const Vec& q, const Vec& p, double) {
        return dot(p, q) + 0.5 * h * dot(p, p);
    };
    model.d1 = [](const Vec&, const Vec& p, double) { return p; };
    model.d2 = [h](const Vec& q, const Vec& p, double) { return axpy(h, p, q); };
    model.d3 = [](const Vec&, const Vec&, double) { return 0.0; };
    return model;
}

DiscreteHamiltonianModel free_particle_left(double h, std::size_t dim) {
    if (!(h > 0.0)) throw DomainError("free_particle_left: h must be positive");
    DiscreteHamiltonianModel model;
    model.side = Side::left;
    model.dim = dim;
    model.value = [h](const Vec& p, const Vec& q, double) {
        return -dot(p, q) + 0.5 * h * dot(p, p);
    };
    model.d1 = [h](const Vec& p, const Vec& q, double) {
        Vec r(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) r[i] = -q[i] + h * p[i];
        return r;
    };
    model.d2 = [](const Vec& p, const Vec&, double) {
        Vec r(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) r[i] = -p[i];
        return r;
    };
    model.d3 = [](const Vec&, const Vec&, double) { return 0.0; };
    return model;
}

DiscreteHamiltonianModel trivial_right(std::size_t dim) {
    DiscreteHamiltonianModel model;
    model.side = Side::right;
    model.dim = dim;
    model.value = [](const Vec& q, const Vec& p, double) { return dot(p, q); };
    model.d1 = [](const Vec&, const Vec& p, double) { return p; };
    model.d2 = [](const Vec& q, const Vec&, double) { return q; };
    model.d3 = [](const Vec&, const Vec&, double) { return 0.0; };
    return model;
}

DiscreteHamiltonianModel trivial_left(std::size_t dim) {
    DiscreteHamiltonianModel model;
    model.side = Side::left;
    model.dim = dim;
    model.value = [](const Vec& p, const Vec& q, double) { return -dot(p, q); };
    model.d1 = [](const Vec&, const Vec& q, double) {
        Vec r(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) r[i] = -q[i];
        return r;
    };
    model.d2 = [](const Vec& p, const Vec&, double) {
        Vec r(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) r[i] = -p[i];
        return r;
    };
    model.d3 = [](const Vec&, const Vec&, double) { return 0.0; };
    return model;
}

} // namespace cdhj
