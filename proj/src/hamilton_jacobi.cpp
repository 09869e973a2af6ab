#include "cdhj/hamilton_jacobi.hpp"

#include "cdhj/continuous.hpp"

#include <algorithm>
#include <cmath>

namespace cdhj {

// ---------------------------------------------------------------------------
// Section
// ---------------------------------------------------------------------------

double Section::value(const Vec& q) const { return F(q); }

Vec Section::grad(const Vec& q) const {
    return Fq ? Fq(q) : fd_gradient(F, q);
}

Mat Section::hess(const Vec& q) const {
    if (Fqq) return Fqq(q);
    return fd_jacobian([this](const Vec& x) { return grad(x); }, q);
}

ContinuousHJResult continuous_hj_residual(const ContinuousHamiltonianModel& model,
                                          const Section& gamma, const Vec& q) {
    auto resid = [&](const Vec& x) {
        return model.H(x, gamma.grad(x), gamma.value(x));
    };
    ContinuousHJResult out;
    out.value = resid(q);
    out.gradient = fd_gradient(resid, q);
    return out;
}

double section_relatedness_gap(const ContinuousHamiltonianModel& model,
                               const Section& gamma, const Vec& q) {
    ContactState lift;
    lift.q = q;
    lift.p = gamma.grad(q);
    lift.s = gamma.value(q);
    const Tangent upstairs = contact_vector_field(model, lift);

    // T gamma applied to the projected field qdot = H_p(gamma(q)).
    const Vec qdot = upstairs.dq;
    const Vec dp_leg = mat_vec(gamma.hess(q), qdot);
    const double ds_leg = dot(lift.p, qdot);

    double gap = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        gap = std::max(gap, std::abs(upstairs.dp[i] - dp_leg[i]));
    gap = std::max(gap, std::abs(upstairs.ds - ds_leg));
    return gap;
}

// ---------------------------------------------------------------------------
// GeneratingFunctionGrid
// ---------------------------------------------------------------------------

namespace {

std::size_t locate_cell(const Vec& nodes, double& q) {
    const double span = nodes.back() - nodes.front();
    const double slack = 1e-9 * span;
    if (q < nodes.front() - slack || q > nodes.back() + slack)
        throw DomainError("generating function grid: query " + std::to_string(q) +
                          " outside the node span [" + std::to_string(nodes.front()) +
                          ", " + std::to_string(nodes.back()) + "]");
    q = std::clamp(q, nodes.front(), nodes.back());
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), q);
    std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    if (i > 0) --i;
    if (i + 1 >= nodes.size()) i = nodes.size() - 2;
    return i;
}

} // namespace

double GeneratingFunctionGrid::value(double q) const {
    const std::size_t i = locate_cell(nodes, q);
    const double h = nodes[i + 1] - nodes[i];
    const double t = (q - nodes[i]) / h;
    const double h00 = t * (2.0 * t * t - 3.0 * t) + 1.0;
    const double h10 = t * (t * t - 2.0 * t + 1.0);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * S[i] + h * h10 * dS[i] + h01 * S[i + 1] + h * h11 * dS[i + 1];
}

double GeneratingFunctionGrid::derivative(double q) const {
    const std::size_t i = locate_cell(nodes, q);
    const double h = nodes[i + 1] - nodes[i];
    const double t = (q - nodes[i]) / h;
    const double d00 = 6.0 * t * t - 6.0 * t;
    const double d10 = 3.0 * t * t - 4.0 * t + 1.0;
    const double d11 = 3.0 * t * t - 2.0 * t;
    return d00 * (S[i] - S[i + 1]) / h + d10 * dS[i] + d11 * dS[i + 1];
}

double GeneratingFunctionGrid::width() const { return nodes.back() - nodes.front(); }

GeneratingFunctionGrid make_grid(Vec nodes, Vec S, Vec dS) {
    if (nodes.size() < 2 || nodes.size() != S.size() || nodes.size() != dS.size())
        throw DimensionMismatch("make_grid: need matching node/S/dS arrays of size >= 2");
    if (!all_finite(nodes) || !all_finite(S) || !all_finite(dS))
        throw DomainError("make_grid: non-finite grid data");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw DomainError("make_grid: nodes not strictly increasing at index " +
                              std::to_string(i));
    return GeneratingFunctionGrid{std::move(nodes), std::move(S), std::move(dS)};
}

GeneratingFunctionGrid grid_from_function(const std::function<double(double)>& S,
                                          const std::function<double(double)>& dS,
                                          double q_min, double q_max, int n) {
    if (!(q_min < q_max)) throw DomainError("grid_from_function: empty interval");
    if (n < 2) throw DomainError("grid_from_function: need at least two nodes");
    Vec nodes(n), vals(n), ders(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        nodes[i] = q_min + t * (q_max - q_min);
        vals[i] = S(nodes[i]);
        ders[i] = dS(nodes[i]);
    }
    return make_grid(std::move(nodes), std::move(vals), std::move(ders));
}

// ---------------------------------------------------------------------------
// Discrete HJ residuals
// ---------------------------------------------------------------------------

double hj_residual_right(const DiscreteHamiltonianModel& model,
                         const GeneratingFunctionGrid& S_cur,
                         const GeneratingFunctionGrid& S_next, double q_cur,
                         double q_next) {
    if (model.side != Side::right)
        throw DomainError("hj_residual_right: model is not a right discrete Hamiltonian");
    const double p_next = S_next.derivative(q_next);
    const double s_cur = S_cur.value(q_cur);
    return S_next.value(q_next) - s_cur - p_next * q_next +
           model.Hd(Vec{q_cur}, Vec{p_next}, s_cur);
}

double hj_residual_left(const DiscreteHamiltonianModel& model,
                        const GeneratingFunctionGrid& S_cur,
                        const GeneratingFunctionGrid& S_next, double q_cur,
                        double q_next) {
    if (model.side != Side::left)
        throw DomainError("hj_residual_left: model is not a left discrete Hamiltonian");
    const double p_cur = S_cur.derivative(q_cur);
    const double s_next = S_next.value(q_next);
    return s_next - S_cur.value(q_cur) + p_cur * q_cur +
           model.Hd(Vec{p_cur}, Vec{q_next}, s_next);
}

// ---------------------------------------------------------------------------
// Propagation, projected flow, commutation
// ---------------------------------------------------------------------------

GeneratingFunctionGrid propagate_generating_function(
    const DiscreteHamiltonianModel& model, const GeneratingFunctionGrid& grid) {
    if (model.side != Side::right)
        throw DomainError("propagate_generating_function: need a right discrete Hamiltonian");
    if (model.dim != 1)
        throw DomainError("propagate_generating_function: configuration dimension must be 1");

    const std::size_t n = grid.nodes.size();
    Vec nodes(n), vals(n), ders(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ContactState image = right_step(
            model, ContactState{Vec{grid.nodes[i]}, Vec{grid.dS[i]}, grid.S[i]});
        nodes[i] = image.q[0];
        ders[i] = image.p[0];
        vals[i] = image.s;
    }

    const bool increasing = nodes[1] > nodes[0];
    if (!increasing) {
        std::reverse(nodes.begin(), nodes.end());
        std::reverse(vals.begin(), vals.end());
        std::reverse(ders.begin(), ders.end());
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw CausticError("propagate_generating_function: node images fold between "
                               "input nodes " + std::to_string(i) + " and " +
                               std::to_string(i + 1));

    const double ratio = (nodes.back() - nodes.front()) / grid.width();
    if (ratio < 0.1)
        throw CausticError("propagate_generating_function: focal compression, image span "
                           "ratio " + std::to_string(ratio) + " below 0.1");

    return make_grid(std::move(nodes), std::move(vals), std::move(ders));
}

double projected_flow(const DiscreteHamiltonianModel& model,
                      const GeneratingFunctionGrid& S_cur,
                      const GeneratingFunctionGrid& S_next, double q_cur) {
    if (model.side != Side::right)
        throw DomainError("projected_flow: need a right discrete Hamiltonian");
    const double s_cur = S_cur.value(q_cur);
    const ContactState seed_image = right_step(
        model, ContactState{Vec{q_cur}, Vec{S_cur.derivative(q_cur)}, s_cur});
    const Vec root = newton_solve(
        [&](const Vec& x) {
            const Vec d2 = model.D2(Vec{q_cur}, Vec{S_next.derivative(x[0])}, s_cur);
            return Vec{x[0] - d2[0]};
        },
        Vec{seed_image.q[0]});
    return root[0];
}

double commutation_check(const DiscreteHamiltonianModel& model,
                         const GeneratingFunctionGrid& S_cur,
                         const GeneratingFunctionGrid& S_next, const Vec& probes) {
    if (probes.empty()) throw DomainError("commutation_check: no probes");
    double worst = 0.0;
    for (double q : probes) {
        const ContactState stepped = right_step(
            model, ContactState{Vec{q}, Vec{S_cur.derivative(q)}, S_cur.value(q)});
        const double q_flow = projected_flow(model, S_cur, S_next, q);
        worst = std::max(worst, std::abs(stepped.q[0] - q_flow));
        worst = std::max(worst, std::abs(stepped.p[0] - S_next.derivative(q_flow)));
        worst = std::max(worst, std::abs(stepped.s - S_next.value(q_flow)));
    }
    return worst;
}

} // namespace cdhj
