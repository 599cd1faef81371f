#include "doctest.h"

#include <cmath>
#include <random>

#include "hyprandtl/monitor.hpp"

using namespace hyprandtl;

TEST_CASE("ledger accumulates sup X and the trapezoid integral of Y^2") {
    BootstrapLedger L(2.0);
    L.record(0.0, 0.1, 4.0, 1.0);
    L.record(0.5, 0.1, 9.0, 3.0);
    L.record(1.0, 0.1, 1.0, 5.0);
    CHECK(L.C0_emp() == doctest::Approx(1.0));  // X(0) / D = 2 / 2
    CHECK(L.budget() == doctest::Approx(4.0));
    CHECK(L.sup_X() == doctest::Approx(3.0));
    CHECK(L.integral_Y2() == doctest::Approx(0.25 * (1 + 3) + 0.25 * (3 + 5)));
    CHECK(L.shadow() == doctest::Approx(3.0 + std::sqrt(3.0)));
    CHECK_THROWS_AS(L.record(1.0, 0.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(L.record(2.0, 0.1, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(BootstrapLedger(-1.0), DomainError);
}

TEST_CASE("zero data gives C0 = 0") {
    BootstrapLedger L(0.0);
    L.record(0.0, 0.1, 0.0, 0.0);
    CHECK(L.C0_emp() == 0.0);
    CHECK(L.budget() == 0.0);
}

TEST_CASE("derivative estimate is exact on quadratics with uneven spacing") {
    BootstrapLedger L(1.0);
    const std::vector<double> ts{0.0, 0.1, 0.25, 0.3, 0.6, 1.0};
    for (double t : ts) L.record(t, 0.1, 1.0 + 2.0 * t - 3.0 * t * t, 1.0);
    const auto fit = check_differential_inequality(L, 1.0);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(fit.dX2dt[i] == doctest::Approx(2.0 - 6.0 * ts[i]).epsilon(1e-12));
}

TEST_CASE("fitted constant makes every margin nonnegative") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.1, 2.0);
    BootstrapLedger L(1.0);
    double t = 0.0;
    for (int i = 0; i < 40; ++i) {
        L.record(t, 0.1, U(rng), U(rng));
        t += U(rng) * 0.05;
    }
    for (double mu : {1.0, 10.0}) {
        const auto fit = check_differential_inequality(L, mu);
        REQUIRE(fit.margin.size() == 40);
        bool tight = false;
        for (std::size_t i = 0; i < fit.margin.size(); ++i) {
            const double scale = std::abs(fit.dX2dt[i]) + mu * L.series()[i].Y2;
            CHECK(fit.margin[i] >= -1e-12 * scale);
            tight = tight || std::abs(fit.margin[i]) <= 1e-12 * scale;
        }
        CHECK(tight);
        CHECK(fit.noisy);  // random samples flip sign constantly
    }
}

TEST_CASE("smooth decay is not noisy and needs no constant") {
    BootstrapLedger L(1.0);
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.05 * i;
        L.record(t, 0.1, std::exp(-t), 1.0);
    }
    const auto fit = check_differential_inequality(L, 1.0);
    CHECK_FALSE(fit.noisy);
    CHECK(fit.sign_flips == 0);
    // 1/2 dX^2/dt + mu Y^2 = 1 - e^{-t}/2 > 0, so C_i = (1 - e^{-t}/2) / (1 + e^{-2t})
    CHECK(fit.C_emp == doctest::Approx((1.0 - 0.5 * std::exp(-1.0)) / (1.0 + std::exp(-2.0))).epsilon(1e-3));
    CHECK_THROWS_AS(
        [] {
            BootstrapLedger two(1.0);
            two.record(0.0, 0.1, 1.0, 1.0);
            two.record(1.0, 0.1, 1.0, 1.0);
            check_differential_inequality(two, 1.0);
        }(),
        DomainError);
}

TEST_CASE("mu selection") {
    CHECK(choose_mu(0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(choose_mu(1.0, 0.5, 1.0) == doctest::Approx(2.0 * (0.5 + 1.0 + 1.0)));
}

TEST_CASE("verdict priority") {
    BootstrapLedger L(1.0);
    L.record(0.0, 0.1, 1.0, 1e-6);
    L.record(0.5, 0.1, 1.0, 1e-6);
    L.record(1.0, 0.1, 1.0, 1e-6);
    auto v = decide(L, nullptr, 1e-2);
    CHECK(v.kind == VerdictKind::holds);
    CHECK(v.bound == doctest::Approx(1.01));

    v = decide(L, nullptr, 1e-2, 0.7, "nan");
    CHECK(v.kind == VerdictKind::blowup);
    CHECK(*v.at == 0.7);

    BootstrapLedger B(1.0);
    B.record(0.0, 0.1, 1.0, 0.0);
    B.record(0.5, 0.1, 1.0, 1e-2);  // shadow 1 + 0.07 > 1.01, below 2
    B.record(1.0, 0.1, 9.0, 0.0);   // sup X = 3 > 2
    v = decide(B, nullptr, 1e-2);
    CHECK(v.kind == VerdictKind::violated);
    CHECK(*v.at == 1.0);
    CHECK(v.reason.find("bootstrap") != std::string::npos);

    BootstrapLedger C(1.0);
    C.record(0.0, 0.1, 1.0, 0.0);
    C.record(0.5, 0.1, 1.0, 1e-2);
    C.record(1.0, 0.1, 1.0, 0.0);
    v = decide(C, nullptr, 1e-2);
    CHECK(v.kind == VerdictKind::violated);
    CHECK(*v.at == 0.5);

    InequalityFit noisy;
    noisy.noisy = true;
    CHECK(decide(L, &noisy, 1e-2).kind == VerdictKind::inconclusive);
}

TEST_CASE("svg output is well formed") {
    BootstrapLedger L(1.0);
    for (int i = 0; i < 5; ++i) L.record(0.1 * i, 0.1, 1.0 + i, 0.5);
    const auto fit = check_differential_inequality(L, 1.0);
    const auto svg = ledger_svg(L, &fit);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}
