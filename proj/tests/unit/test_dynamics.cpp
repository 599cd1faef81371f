#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "../support/mms.hpp"
#include "hyprandtl/dynamics.hpp"

using namespace hyprandtl;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.raw().size(); ++n) m = std::max(m, std::abs(a.raw()[n] - b.raw()[n]));
    return m;
}

StateSnapshot zero_state(const GridPtr& g, double eta = 1.0) {
    return make_initial_state(ScalarField(g), ScalarField(g), eta);
}

// eta u_tt + u_t = u_yy on [0, L], u = 0 at both ends, u(0) = 0, u_t(0) = g,
// solved mode by mode in the sine basis.
double relaxation_oracle(double (*g)(double), double L, double eta, double t, double y) {
    const int modes = 600;
    const int quad = 24000;
    const double pi = std::numbers::pi;
    double acc = 0.0;
    for (int n = 1; n <= modes; ++n) {
        const double k = n * pi / L;
        // composite Simpson for g_n = 2/L int g sin(k y)
        double s = 0.0;
        for (int q = 0; q <= quad; ++q) {
            const double yy = L * q / quad;
            const double w = (q == 0 || q == quad) ? 1.0 : (q % 2 ? 4.0 : 2.0);
            s += w * g(yy) * std::sin(k * yy);
        }
        const double gn = 2.0 / L * s * (L / quad) / 3.0;
        const std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 4.0 * eta * k * k, 0.0));
        const std::complex<double> r1 = (-1.0 + disc) / (2.0 * eta), r2 = (-1.0 - disc) / (2.0 * eta);
        const std::complex<double> b = gn * (std::exp(r1 * t) - std::exp(r2 * t)) / (r1 - r2);
        acc += b.real() * std::sin(k * y);
    }
    return acc;
}

double bump(double y) { return y * std::exp(-y); }
// Odd in y, so every even derivative vanishes at the wall: compatible to all orders.
double odd_bump(double y) { return y * std::exp(-0.5 * y * y); }

}  // namespace

TEST_CASE("rest state is an exact fixed point") {
    auto g = make_grid(16, 24, 20.0);
    auto s = zero_state(g);
    TimeStepper st{0.01, 0.5, 0.1, 8};
    for (int n = 0; n < 5; ++n) s = step(s, st);
    for (const ScalarField* f : {&s.u, &s.phi, &s.f, &s.lambda, &s.v, &s.Uaux}) CHECK(f->max_abs() == 0.0);
}

TEST_CASE("rhs_main on linear relaxation data") {
    auto g = make_grid(8, 32, 20.0);
    auto s = zero_state(g, 0.5);
    s.phi = ScalarField::sample(g, [](double, double y) { return bump(y); });
    const auto t = rhs_main(s);
    CHECK(max_diff(t.du, s.phi) < 1e-15);
    CHECK(max_diff(t.dphi, -2.0 * s.phi) < 1e-14);
}

TEST_CASE("rhs_aux_f examples") {
    auto g = make_grid(16, 48, 20.0);
    auto s = zero_state(g);
    CHECK(rhs_aux_f(s, s.f).max_abs() == 0.0);

    s.u = ScalarField::sample(g, [](double, double y) { return bump(y); });
    refresh_derived(s);
    CHECK(rhs_aux_f(s, s.f).max_abs() < 1e-15);

    const double eps = 1e-3;
    s.u = ScalarField::sample(g, [&](double x, double y) { return eps * std::sin(x) * bump(y); });
    refresh_derived(s);
    const double dt = 1e-3;
    auto f1 = dt * rhs_aux_f(s, s.f);
    auto expect = ScalarField::sample(g, [&](double x, double y) { return -dt * eps * std::sin(x) * (1.0 - (1.0 + y) * std::exp(-y)); });
    CHECK(max_diff(f1, expect) < 1e-15);
}

TEST_CASE("lambda_algebraic examples") {
    auto g = make_grid(16, 48, 20.0);
    auto u0 = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * bump(y); });
    auto s = make_initial_state(u0, ScalarField(g), 1.0);
    CHECK(max_diff(lambda_algebraic(s), dx_power(s.u, 1)) < 1e-15);

    auto flat = make_initial_state(ScalarField::sample(g, [](double, double y) { return bump(y); }), ScalarField(g), 1.0);
    CHECK(lambda_algebraic(flat).max_abs() < 1e-15);

    // int Uaux = y; Ymax large enough that the truncation at the top is below round-off
    auto g2 = make_grid(16, 96, 40.0);
    auto s2 = make_initial_state(ScalarField::sample(g2, [](double x, double y) { return std::sin(x) * bump(y); }), ScalarField(g2), 1.0);
    s2.f = ScalarField::sample(g2, [](double, double y) { return y; });
    auto expect = ScalarField::sample(g2, [](double x, double y) {
        return std::cos(x) * y * std::exp(-y) - (1.0 - y) * std::exp(-y) * std::sin(x) * y;
    });
    CHECK(max_diff(lambda_algebraic(s2), expect) < 1e-11);
}

TEST_CASE("rhs_lambda examples") {
    auto g = make_grid(16, 48, 20.0);
    auto s = zero_state(g);
    CHECK(rhs_lambda(s).max_abs() == 0.0);
    s.phi = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * bump(y); });
    auto expect = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * bump(y); });
    CHECK(max_diff(rhs_lambda(s), expect) < 1e-15);
}

TEST_CASE("rhs_lambda tracks the time derivative of the algebraic lambda") {
    auto g = make_grid(16, 64, 20.0);
    const double eps = 0.05;
    auto u0 = ScalarField::sample(g, [&](double x, double y) { return eps * (std::sin(x) + 0.5 * std::cos(2.0 * x)) * odd_bump(y); });
    auto u1 = ScalarField::sample(g, [&](double x, double y) { return eps * std::cos(x) * y * y * y * std::exp(-0.5 * y * y); });
    auto s = make_initial_state(u0, u1, 1.0);
    TimeStepper st{1e-3, 1.0, 1.0, 8};
    for (int n = 0; n < 20; ++n) s = step(s, st);
    const double h = 1e-3;
    StateSnapshot sp = rk4_step(s, h), sm = rk4_step(s, -h);
    auto fd = (1.0 / (2.0 * h)) * (lambda_algebraic(sp) - lambda_algebraic(sm));
    auto pred = rhs_lambda(s);
    CHECK(max_diff(fd, pred) <= 1e-5 * pred.max_abs());
}

TEST_CASE("make_initial_state examples") {
    auto g = make_grid(16, 48, 20.0);
    auto z = zero_state(g);
    for (const ScalarField* f : {&z.u, &z.phi, &z.f, &z.lambda, &z.v, &z.Uaux}) CHECK(f->max_abs() == 0.0);

    auto u0 = ScalarField::sample(g, [](double, double y) { return bump(y); });
    auto u1 = ScalarField::sample(g, [](double, double y) { return y * y * std::exp(-y); });
    auto s = make_initial_state(u0, u1, 1.0);
    CHECK(max_diff(s.phi, u1) < 1e-15);

    const double eps = 1e-3;
    auto w0 = ScalarField::sample(g, [&](double x, double y) { return eps * std::sin(x) * bump(y); });
    auto w = make_initial_state(w0, ScalarField(g), 1.0);
    auto expect = ScalarField::sample(g, [&](double x, double y) {
        const double sc = std::sin(x) * std::cos(x);
        return eps * eps * sc * (y * y * std::exp(-2.0 * y) - (1.0 - y) * std::exp(-y) * (1.0 - (1.0 + y) * std::exp(-y)));
    });
    CHECK(max_diff(w.phi, expect) < 1e-12 * eps * eps);
    CHECK(w.Uaux.max_abs() == 0.0);
    CHECK(max_diff(w.lambda, dx_power(w0, 1)) == 0.0);
}

TEST_CASE("initial data must be compatible") {
    auto g = make_grid(8, 16, 20.0);
    auto bad = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::exp(-y); });
    CHECK_THROWS_AS(make_initial_state(bad, ScalarField(g), 1.0), DomainError);
    CHECK_THROWS_AS(make_initial_state(ScalarField(g), bad, 1.0), DomainError);
    CHECK_THROWS_AS(make_initial_state(ScalarField(g), ScalarField(g), 0.01), DomainError);
}

TEST_CASE("linear relaxation matches the modal damped-wave solution") {
    const double L = 20.0, eta = 0.5, T = 0.5;
    auto g = make_grid(4, 96, L);
    auto s = zero_state(g, eta);
    s.phi = ScalarField::sample(g, [](double, double y) { return odd_bump(y); });
    impose_boundary(s);
    TimeStepper st{1e-3, 0.5, T, 8};
    while (s.t < T) s = step(s, st);
    double err = 0.0, scale = 0.0;
    for (int j = 0; j < g->Ny(); j += 5) {
        const double y = g->ys()[j];
        const double ref = relaxation_oracle(&odd_bump, L, eta, T, y);
        err = std::max(err, std::abs(s.u(0, j) - ref));
        scale = std::max(scale, std::abs(ref));
    }
    CHECK(err < 1e-6 * scale);
}

TEST_CASE("fourth-order convergence on the manufactured solution") {
    auto g = make_grid(8, 48, 40.0);
    const double e1 = mms::error_at(g, 0.02, 1.0);
    const double e2 = mms::error_at(g, 0.01, 1.0);
    const double e3 = mms::error_at(g, 0.005, 1.0);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("boundary and divergence invariants along a trajectory") {
    auto g = make_grid(32, 64, 20.0);
    auto u0 = ScalarField::sample(g, [](double x, double y) { return 1e-2 * std::sin(x) * bump(y); });
    auto s = make_initial_state(u0, ScalarField(g), 1.0);
    TimeStepper st{0.01, 0.5, 0.2, 8};
    while (s.t < 0.2) {
        s = step(s, st);
        const auto r = boundary_residual(s);
        CHECK(r.enforced_max() <= 1e-12);
        CHECK(divergence_residual(s) <= 1e-10);
    }
    CHECK(s.t == 0.2);
}

TEST_CASE("CFL violations are retried with halved steps") {
    auto g = make_grid(8, 32, 20.0);
    auto s = make_initial_state(ScalarField::sample(g, [](double x, double y) { return 1e-3 * std::sin(x) * bump(y); }),
                                ScalarField(g), 1.0);
    const double lim = cfl_limit(s, 0.5);
    StepInfo info;
    auto next = step(s, TimeStepper{3.0 * lim, 0.5, 1.0, 8}, {}, &info);
    CHECK(info.halvings == 2);
    CHECK(next.t == doctest::Approx(3.0 * lim));
    CHECK_THROWS_AS(step(s, TimeStepper{1000.0 * lim, 0.5, 1e9, 8}), BlowupError);
}
