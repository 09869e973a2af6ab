#include "doctest.h"

#include "cdhj/discrete_hamiltonian.hpp"
#include "cdhj/discrete_lagrangian.hpp"
#include "cdhj/models.hpp"

#include <cmath>
#include <random>

using namespace cdhj;

TEST_CASE("right_from_lagrangian recovers the free particle right Hamiltonian") {
    const double h = 0.1;
    const auto constructed = right_from_lagrangian(free_particle_discrete(h));
    const auto analytic = free_particle_right(h);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec q{dist(rng)}, p{dist(rng)};
        const double s = dist(rng);
        CHECK(std::abs(constructed.Hd(q, p, s) - analytic.Hd(q, p, s)) <= 1e-9);
        CHECK(std::abs(constructed.D1(q, p, s)[0] - analytic.D1(q, p, s)[0]) <= 1e-9);
        CHECK(std::abs(constructed.D2(q, p, s)[0] - analytic.D2(q, p, s)[0]) <= 1e-9);
        CHECK(std::abs(constructed.D3(q, p, s) - analytic.D3(q, p, s)) <= 1e-9);
    }
}

TEST_CASE("right Hamiltonian slot partials satisfy the envelope identities") {
    const auto models = damped_oscillator_models(1.5, 0.01, 0.05);
    const auto ham = right_from_lagrangian(models.discrete);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec q{dist(rng)}, p{dist(rng)};
        const double s = dist(rng);
        const Vec psi = ham.D2(q, p, s);
        // D1H+ = -D1Ld and D3H+ = -D3Ld at the matched point, and the
        // matched point itself satisfies p = D2Ld(q, psi, s).
        CHECK(std::abs(models.discrete.D2(q, psi, s)[0] - p[0]) <= 1e-10);
        CHECK(std::abs(ham.D1(q, p, s)[0] + models.discrete.D1(q, psi, s)[0]) <= 1e-12);
        CHECK(std::abs(ham.D3(q, p, s) + models.discrete.D3(q, psi, s)) <= 1e-12);
        // Cross-check against finite differences of the value (the midpoint
        // H+ is quadratic, so central differences are exact to roundoff).
        const double fd1 = fd_gradient(
            [&](const Vec& x) { return ham.Hd(x, p, s); }, q)[0];
        CHECK(std::abs(ham.D1(q, p, s)[0] - fd1) <= 1e-6);
    }
}

TEST_CASE("trivial models step identically") {
    const ContactState x{Vec{0.4}, Vec{-1.2}, 0.7};

    const ContactState r = right_step(trivial_right(), x);
    CHECK(std::abs(r.q[0] - 0.4) <= 1e-12);
    CHECK(std::abs(r.p[0] + 1.2) <= 1e-12);
    CHECK(std::abs(r.s - 0.7) <= 1e-12);

    const ContactState l = left_step(trivial_left(), x);
    CHECK(std::abs(l.q[0] - 0.4) <= 1e-12);
    CHECK(std::abs(l.p[0] + 1.2) <= 1e-12);
    CHECK(std::abs(l.s - 0.7) <= 1e-12);
}

TEST_CASE("free particle right and left steps agree") {
    const double h = 0.1;
    const ContactState x{Vec{0.3}, Vec{1.4}, -0.2};

    const ContactState r = right_step(free_particle_right(h), x);
    CHECK(std::abs(r.q[0] - (0.3 + h * 1.4)) <= 1e-12);
    CHECK(std::abs(r.p[0] - 1.4) <= 1e-12);
    CHECK(std::abs(r.s - (-0.2 + 0.5 * h * 1.4 * 1.4)) <= 1e-12);

    const ContactState l = left_step(free_particle_left(h), x);
    CHECK(std::abs(l.q[0] - r.q[0]) <= 1e-10);
    CHECK(std::abs(l.p[0] - r.p[0]) <= 1e-10);
    CHECK(std::abs(l.s - r.s) <= 1e-10);
}

TEST_CASE("parachute right step matches the frozen closed-form oracle") {
    const ParachuteParams params;
    const auto ham = parachute_right_hamiltonian(params);
    const ContactState seed{Vec{100.0}, Vec{1.0}, 1.0};

    const ContactState s1 = right_step(ham, seed);
    CHECK(s1.q[0] == doctest::Approx(17.667641618306344).epsilon(1e-12));
    CHECK(s1.p[0] == doctest::Approx(17.687641618306348).epsilon(1e-12));
    CHECK(s1.s == doctest::Approx(-274.9062253728723).epsilon(1e-12));

    const ContactState s2 = right_step(ham, s1);
    CHECK(s2.q[0] == doctest::Approx(-30.14632588428771).epsilon(1e-11));
    CHECK(s2.p[0] == doctest::Approx(-35.64445039174515).epsilon(1e-11));
    CHECK(s2.s == doctest::Approx(196.40718250753045).epsilon(1e-11));

    const ContactState c1 = parachute_closed_form_step(params, seed);
    CHECK(std::abs(s1.q[0] - c1.q[0]) <= 1e-9);
    CHECK(std::abs(s1.p[0] - c1.p[0]) <= 1e-9);
    CHECK(std::abs(s1.s - c1.s) <= 1e-9);
}

TEST_CASE("degenerate 1 - D3H+ is reported") {
    DiscreteHamiltonianModel model;
    model.side = Side::right;
    model.dim = 1;
    model.value = [](const Vec& q, const Vec& p, double s) { return p[0] * q[0] + s; };
    // With p = 0 the implicit equation is satisfied immediately, but the
    // step itself is degenerate since D3H+ = 1.
    CHECK_THROWS_AS(right_step(model, ContactState{Vec{0.5}, Vec{0.0}, 0.0}),
                    DegenerateStep);
}

TEST_CASE("side mismatches are rejected") {
    const ContactState x{Vec{0.0}, Vec{1.0}, 0.0};
    CHECK_THROWS_AS(right_step(free_particle_left(0.1), x), DomainError);
    CHECK_THROWS_AS(left_step(free_particle_right(0.1), x), DomainError);
}

TEST_CASE("run_trajectory returns n + 1 states and tags failing steps") {
    const auto ham = free_particle_right(0.1);
    const auto traj = run_trajectory(ham, ContactState{Vec{0.0}, Vec{1.0}, 0.0}, 10);
    REQUIRE(traj.size() == 11);
    CHECK(std::abs(traj.back().q[0] - 1.0) <= 1e-12);

    const auto parachute = parachute_right_hamiltonian({});
    try {
        run_trajectory(parachute, ContactState{Vec{100.0}, Vec{1.0}, 1.0}, 200);
        FAIL("expected the parachute trajectory to leave the solvable range");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("right stepper is conjugate to the Lagrangian flow under FL+") {
    for (int which = 0; which < 2; ++which) {
        const double h = 0.05;
        const auto ld = which == 0 ? free_particle_discrete(h)
                                   : damped_oscillator_models(1.5, 0.01, h).discrete;
        const auto ham = right_from_lagrangian(ld);

        Segment seg{Vec{1.0}, Vec{0.98}, 0.2};
        for (int k = 0; k < 20; ++k) {
            const Segment next = lagrangian_flow_phi(ld, seg);
            const ContactState lhs = legendre_plus(ld, next.q0, next.q1, next.s0);
            const ContactState rhs = right_step(ham, legendre_plus(ld, seg.q0, seg.q1,
                                                                   seg.s0));
            CHECK(std::abs(lhs.q[0] - rhs.q[0]) <= 1e-10);
            CHECK(std::abs(lhs.p[0] - rhs.p[0]) <= 1e-10);
            CHECK(std::abs(lhs.s - rhs.s) <= 1e-10);
            seg = next;
        }
    }
}
