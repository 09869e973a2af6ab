#include "cdhj/discrete_hamiltonian.hpp"

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

} // namespace

DiscreteHamiltonianModel right_from_lagrangian(const DiscreteLagrangianModel& lagrangian) {
    // Shared by the value and partial evaluators; each call re-solves the
    // momentum matching condition p = D2Ld(q, Psi, s) for Psi.
    auto psi = [lagrangian](const Vec& q, const Vec& p, double s) {
        return newton_solve(
            [&](const Vec& x) {
                const Vec d2 = lagrangian.D2(q, x, s);
                Vec r(d2.size());
                for (std::size_t i = 0; i < r.size(); ++i) r[i] = d2[i] - p[i];
                return r;
            },
            q);
    };

    DiscreteHamiltonianModel model;
    model.side = Side::right;
    model.dim = lagrangian.dim;
    model.value = [lagrangian, psi](const Vec& q, const Vec& p, double s) {
        const Vec w = psi(q, p, s);
        return dot(p, w) - lagrangian.Ld(q, w, s);
    };
    model.d1 = [lagrangian, psi](const Vec& q, const Vec& p, double s) {
        const Vec w = psi(q, p, s);
        const Vec d1 = lagrangian.D1(q, w, s);
        Vec r(d1.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = -d1[i];
        return r;
    };
    model.d2 = psi;
    model.d3 = [lagrangian, psi](const Vec& q, const Vec& p, double s) {
        return -lagrangian.D3(q, psi(q, p, s), s);
    };
    return model;
}

ContactState right_step(const DiscreteHamiltonianModel& model, const ContactState& x) {
    validate_state(x);
    if (model.side != Side::right)
        throw DomainError("right_step: model is not a right discrete Hamiltonian");
    if (x.q.size() != model.dim)
        throw DimensionMismatch("right_step: state dim != model dim");

    const Vec p_next = newton_solve(
        [&](const Vec& P) {
            const double d3 = model.D3(x.q, P, x.s);
            const Vec d1 = model.D1(x.q, P, x.s);
            Vec r(d1.size());
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] = x.p[i] * (1.0 - d3) - d1[i];
            return r;
        },
        x.p);

    const double d3 = model.D3(x.q, p_next, x.s);
    if (std::abs(1.0 - d3) < kDegenerate)
        throw DegenerateStep("right_step: 1 - D3H+ = " + sci(1.0 - d3) +
                             " at the root");

    ContactState out;
    out.q = model.D2(x.q, p_next, x.s);
    out.p = p_next;
    out.s = x.s + dot(p_next, out.q) - model.Hd(x.q, p_next, x.s);
    validate_state(out);
    return out;
}

ContactState left_step(const DiscreteHamiltonianModel& model, const ContactState& x) {
    validate_state(x);
    if (model.side != Side::left)
        throw DomainError("left_step: model is not a left discrete Hamiltonian");
    if (x.q.size() != model.dim)
        throw DimensionMismatch("left_step: state dim != model dim");
    const std::size_t n = x.q.size();

    // Unknowns z = (q_{k+1}, s_{k+1}).
    auto residual = [&](const Vec& z) {
        const Vec qn(z.begin(), z.begin() + n);
        const double sn = z[n];
        const Vec d1 = model.D1(x.p, qn, sn);
        Vec r(n + 1);
        for (std::size_t i = 0; i < n; ++i) r[i] = x.q[i] + d1[i];
        r[n] = sn - dot(x.p, d1) + model.Hd(x.p, qn, sn) - x.s;
        return r;
    };

    Vec seed(n + 1);
    for (std::size_t i = 0; i < n; ++i) seed[i] = x.q[i];
    seed[n] = x.s;
    const Vec z = newton_solve(residual, seed);

    ContactState out;
    out.q.assign(z.begin(), z.begin() + n);
    out.s = z[n];
    const Vec d2 = model.D2(x.p, out.q, out.s);
    out.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.p[i] = -d2[i];
    validate_state(out);
    return out;
}

std::vector<ContactState> run_trajectory(const DiscreteHamiltonianModel& model,
                                         const ContactState& x0, int n) {
    if (n < 0) throw DomainError("run_trajectory: negative step count");
    std::vector<ContactState> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(x0);
    for (int k = 0; k < n; ++k) {
        try {
            out.push_back(model.side == Side::right ? right_step(model, out.back())
                                                    : left_step(model, out.back()));
        } catch (const NewtonDiverged& e) {
            throw NewtonDiverged("run_trajectory: step " + std::to_string(k + 1) + ": " +
                                 e.what(), e.iterations, e.final_residual);
        } catch (const DegenerateStep& e) {
            throw DegenerateStep("run_trajectory: step " + std::to_string(k + 1) + ": " +
                                 e.what());
        } catch (const DomainError& e) {
            throw DomainError("run_trajectory: step " + std::to_string(k + 1) + ": " +
                              e.what());
        }
    }
    return out;
}

} // namespace cdhj
