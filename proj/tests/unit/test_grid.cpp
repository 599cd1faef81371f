#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "hyprandtl/grid.hpp"
#include "hyprandtl/kernels.hpp"

using namespace hyprandtl;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.raw().size(); ++n) m = std::max(m, std::abs(a.raw()[n] - b.raw()[n]));
    return m;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("grid geometry") {
    auto g = make_grid(16, 33, 20.0);
    CHECK(g->ys().front() == 0.0);
    CHECK(g->ys().back() == 20.0);
    for (int j = 1; j < g->Ny(); ++j) CHECK(g->ys()[j] > g->ys()[j - 1]);
    double wsum = 0.0;
    for (double w : g->quad_weights()) wsum += w;
    CHECK(wsum == doctest::Approx(20.0).epsilon(1e-13));
    CHECK_THROWS_AS(make_grid(12, 33), DomainError);
    CHECK_THROWS_AS(make_grid(16, 0), DomainError);
}

TEST_CASE("Dy annihilates constants and Dy Iy is the identity on low-degree polynomials") {
    auto g = make_grid(4, 25, 3.0);
    auto one = ScalarField::sample(g, [](double, double) { return 1.0; });
    CHECK(apply_dy(one).max_abs() < 1e-12);
    auto p = ScalarField::sample(g, [](double x, double y) { return (1.0 + std::cos(x)) * (y * y * y - 2.0 * y + 0.5); });
    auto back = apply_dy(vertical_integral(p));
    CHECK(max_diff(back, p) < 1e-11);
}

TEST_CASE("dx_power on single modes") {
    auto g = make_grid(16, 17, 10.0);
    auto gy = [](double y) { return y * std::exp(-y); };
    auto f = ScalarField::sample(g, [&](double x, double y) { return std::sin(x) * gy(y); });
    auto c = ScalarField::sample(g, [&](double x, double y) { return std::cos(x) * gy(y); });
    CHECK(max_diff(dx_power(f, 1), c) < 1e-14);
    CHECK(max_diff(dx_power(f, 2), -1.0 * f) < 1e-14);
    CHECK(max_diff(dx_power(f, 0), f) == 0.0);
    auto flat = ScalarField::sample(g, [&](double, double y) { return gy(y); });
    CHECK(dx_power(flat, 3).max_abs() < 1e-15);
    CHECK_THROWS_AS(dx_power(f, kDxPowerCap + 1), DomainError);
}

TEST_CASE("dy_power examples") {
    auto g = make_grid(8, 96, 20.0);
    auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * y * std::exp(-y); });
    auto d = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * (1.0 - y) * std::exp(-y); });
    auto r = dy_power(f, 1);
    CHECK(max_diff(r.field, d) < 1e-10);
    CHECK_FALSE(r.noise_dominated());
    CHECK(max_diff(dy_power(f, 0).field, f) == 0.0);

    auto poly = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * (y * y - 3.0 * y); });
    CHECK(dy_power(poly, 3).field.max_abs() < 1e-12);
}

TEST_CASE("higher dy_power orders stay accurate on analytic data") {
    auto g = make_grid(4, 96, 20.0);
    auto f = ScalarField::sample(g, [](double, double y) { return y * std::exp(-y); });
    auto all = dy_powers(f, 7);
    for (int k = 1; k <= 7; ++k) {
        // d^k (y e^{-y}) = (-1)^k (y - k) e^{-y}
        auto exact = ScalarField::sample(g, [k](double, double y) { return ((k % 2) ? -1.0 : 1.0) * (y - k) * std::exp(-y); });
        CHECK(max_diff(all[k].field, exact) < 2e-7);
        CHECK(all[k].noise_indicator >= all[k - 1].noise_indicator);
        CHECK_FALSE(all[k].noise_dominated());
    }
}

TEST_CASE("noise indicator flags round-off dominated orders") {
    // without chopping, the round-off tail of the expansion swamps high orders
    auto g = make_grid(4, 96, 20.0);
    auto f = ScalarField::sample(g, [](double, double y) { return y * std::exp(-y); });
    auto raw = dy_powers(f, 10, 0.0);
    CHECK_FALSE(raw[3].noise_dominated());
    CHECK(raw[10].noise_dominated());
    CHECK_FALSE(dy_powers(f, 10)[10].noise_dominated());
}

TEST_CASE("vertical_integral examples") {
    auto g = make_grid(4, 64, 20.0);
    auto e = ScalarField::sample(g, [](double, double y) { return std::exp(-y); });
    auto F = vertical_integral(e);
    auto exact = ScalarField::sample(g, [](double, double y) { return 1.0 - std::exp(-y); });
    CHECK(max_diff(F, exact) < 1e-12);
    for (int i = 0; i < g->Nx(); ++i) CHECK(F(i, 0) == 0.0);
    CHECK(vertical_integral(ScalarField(g)).max_abs() == 0.0);
    CHECK(max_diff(dy_power(F, 1).field, e) < 1e-11);
}

TEST_CASE("weighted_l2 examples") {
    const double pi = std::numbers::pi;
    auto g1 = make_grid(8, 9, 1.0);
    auto one = ScalarField::sample(g1, [](double, double) { return 1.0; });
    CHECK(weighted_l2(one, 0.0) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-14));
    CHECK(weighted_l2(ScalarField(g1), 2.0) == 0.0);

    auto g = make_grid(8, 64, 20.0);
    auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::exp(-y); });
    CHECK(weighted_l2(f, 0.0) == doctest::Approx(std::sqrt(pi * (1.0 - std::exp(-40.0)) / 2.0)).epsilon(1e-12));
}

TEST_CASE("spectral convergence of the quadrature") {
    auto err = [](int ny) {
        auto g = make_grid(4, ny, 20.0);
        auto f = ScalarField::sample(g, [](double, double y) { return y * y * std::exp(-y) * std::sin(4.0 * y); });
        const double v = weighted_l2(f, 1.0);
        // exact value from a fine grid
        auto gf = make_grid(4, 257, 20.0);
        auto ff = ScalarField::sample(gf, [](double, double y) { return y * y * std::exp(-y) * std::sin(4.0 * y); });
        return std::abs(v - weighted_l2(ff, 1.0));
    };
    const double e24 = err(24), e48 = err(48);
    CHECK(e48 < 1e-3 * e24);
}

TEST_CASE("discrete divergence identity") {
    auto g = make_grid(32, 96, 20.0);
    auto u = ScalarField::sample(g, [](double x, double y) {
        return 1e-3 * (std::sin(x) + 0.3 * std::cos(2.0 * x + 0.4)) * y * std::exp(-y);
    });
    auto ux = dx_power(u, 1);
    auto v = -1.0 * vertical_integral(ux);
    auto div = ux + dy_power(v, 1).field;
    CHECK(div.max_abs() <= 1e-10 * ux.max_abs());
    CHECK(v.wall_trace() == 0.0);
}

TEST_CASE("drop_top_mode removes a_N and keeps both endpoints") {
    auto g = make_grid(8, 33, 10.0);
    const int N = g->Ny() - 1;
    // deliberately rough data so a_N is far from zero
    auto f = ScalarField::sample(g, [](double x, double y) { return (1.5 + std::cos(x)) * std::abs(y - 3.3) + 0.25 * y; });
    auto p = drop_top_mode(f);
    const auto& F = g->cheb_forward();
    for (int i = 0; i < g->Nx(); ++i) {
        double aN = 0.0, aN_before = 0.0;
        for (int j = 0; j < g->Ny(); ++j) {
            aN += F(N, j) * p(i, j);
            aN_before += F(N, j) * f(i, j);
        }
        CHECK(std::abs(aN_before) > 1e-4);
        CHECK(std::abs(aN) < 1e-15);
        CHECK(p(i, 0) == doctest::Approx(f(i, 0)).epsilon(1e-14));
        CHECK(p(i, N) == doctest::Approx(f(i, N)).epsilon(1e-14));
    }
    // idempotent, and leaves polynomials of degree < N alone
    CHECK(max_diff(drop_top_mode(p), p) < 1e-13);
    auto q = ScalarField::sample(g, [](double, double y) { return y * y * y - 2.0 * y; });
    CHECK(max_diff(drop_top_mode(q), q) < 1e-11);

    // with a_N = 0 the divergence identity is exact on arbitrary columns
    auto rough = drop_top_mode(f);
    auto back = dy_power(vertical_integral(rough), 1, 0.0).field;
    CHECK(max_diff(back, rough) < 1e-11 * rough.max_abs());
}

TEST_CASE("dealiased product is exact for band-limited factors") {
    auto g = make_grid(16, 9, 5.0);
    auto a = ScalarField::sample(g, [](double x, double y) { return std::sin(3.0 * x) * (1.0 + y); });
    auto b = ScalarField::sample(g, [](double x, double) { return std::cos(4.0 * x); });
    auto exact = ScalarField::sample(g, [](double x, double y) { return 0.5 * (std::sin(7.0 * x) - std::sin(x)) * (1.0 + y); });
    CHECK(max_diff(dealiased_product(a, b), exact) < 1e-13);
    // aliasing partner 7 + 5 = 12 > Nx/2 - 1 is removed rather than folded
    auto c = ScalarField::sample(g, [](double x, double) { return std::cos(5.0 * x); });
    auto p = dealiased_product(a, c);
    auto kept = ScalarField::sample(g, [](double x, double y) { return 0.5 * (-std::sin(2.0 * x)) * (1.0 + y); });
    CHECK(max_diff(p, kept) < 1e-13);
}

TEST_CASE("serial and parallel kernels agree") {
    auto g = make_grid(32, 20, 7.0);
    auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(3.0 * x + y) * std::exp(-y) + std::cos(x); });
    const int nm = g->Nx() / 2 + 1;
    std::vector<std::complex<double>> s1(static_cast<std::size_t>(nm) * g->Ny()), s2(s1.size());
    kernels::serial::forward_x(f.values(), s1, g->Nx(), g->Ny());
    kernels::parallel::forward_x(g->plans(), f.values(), s2, g->Nx(), g->Ny());
    double d = 0.0;
    for (std::size_t n = 0; n < s1.size(); ++n) d = std::max(d, std::abs(s1[n] - s2[n]));
    CHECK(d < 1e-13);

    std::vector<double> r1(g->size()), r2(g->size());
    kernels::serial::inverse_x(s1, r1, g->Nx(), g->Ny());
    kernels::parallel::inverse_x(g->plans(), s1, r2, g->Nx(), g->Ny());
    for (std::size_t n = 0; n < r1.size(); ++n) {
        CHECK(std::abs(r1[n] - r2[n]) < 1e-12);
        CHECK(std::abs(r1[n] - f.raw()[n]) < 1e-12);
    }

    std::vector<double> a1(g->size()), a2(g->size());
    kernels::serial::apply_columns(g->Dy(), f.values(), a1, g->Nx());
    kernels::parallel::apply_columns(g->Dy(), f.values(), a2, g->Nx());
    CHECK(a1 == a2);

    std::vector<double> e1(nm), e2(nm);
    kernels::serial::mode_energies(s1, g->quad_weights(), nm, g->Ny(), e1);
    kernels::parallel::mode_energies(s1, g->quad_weights(), nm, g->Ny(), e2);
    CHECK(e1 == e2);
}

TEST_CASE("field dumps round-trip bit-exactly") {
    auto g = make_grid(8, 12, 20.0);
    auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * y * std::exp(-y) + 1e-300; });
    const auto path = temp_path("hyprandtl_roundtrip.bin");
    write_field(path, f, 0.125);
    double t = -1.0;
    auto back = read_field(path, g, &t);
    CHECK(back.raw() == f.raw());
    CHECK(t == 0.125);
    CHECK(std::filesystem::file_size(path) == kFieldHeaderBytes + 8 * 12 * 8);

    auto other = make_grid(16, 12, 20.0);
    try {
        read_field(path, other);
        FAIL("expected a header mismatch");
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Nx=16") != std::string::npos);
        CHECK(msg.find("Nx=8") != std::string::npos);
    }
    auto standalone = read_field_standalone(path);
    CHECK(standalone.raw() == f.raw());

    const auto empty = temp_path("hyprandtl_empty.bin");
    { std::ofstream os(empty, std::ios::binary); }
    CHECK_THROWS_AS(read_field(empty, g), FormatError);
    std::filesystem::remove(path);
    std::filesystem::remove(empty);
}

TEST_CASE("non-finite values are detected") {
    auto g = make_grid(4, 5, 1.0);
    ScalarField f(g);
    f(1, 2) = std::nan("");
    CHECK_FALSE(f.all_finite());
    CHECK_THROWS_AS(f.check_finite("f"), NumericalError);
}
