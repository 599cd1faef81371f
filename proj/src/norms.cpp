#include "hyprandtl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hyprandtl/kernels.hpp"

namespace hyprandtl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kDyOrderCap = 24;

std::vector<double> mode_energies(const ScalarField& h, double weight_power) {
    const auto& g = *h.grid();
    const int nmodes = g.Nx() / 2 + 1;
    std::vector<double> yw(static_cast<std::size_t>(g.Ny()));
    for (int j = 0; j < g.Ny(); ++j) {
        const double y = g.ys()[static_cast<std::size_t>(j)];
        yw[static_cast<std::size_t>(j)] =
            g.quad_weights()[static_cast<std::size_t>(j)] * (weight_power == 0.0 ? 1.0 : std::pow(1.0 + y * y, weight_power));
    }
    const auto spec = x_spectrum(h);
    std::vector<double> e(static_cast<std::size_t>(nmodes));
    kernels::parallel::mode_energies(spec, yw, nmodes, g.Ny(), e);
    return e;
}

// log(2 pi sum_kappa mult kappa^{2m} E_kappa); the Nyquist mode only enters at m = 0.
double log_shell(const std::vector<double>& e, int m) {
    const int half = static_cast<int>(e.size()) - 1;
    const int kmin = (m == 0) ? 0 : 1;
    const int kmax = (m == 0) ? half : half - 1;
    double peak = kNegInf;
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(half + 1));
    for (int kappa = kmin; kappa <= kmax; ++kappa) {
        const double ek = e[static_cast<std::size_t>(kappa)];
        if (!(ek > 0.0)) continue;
        const double mult = (kappa == 0 || kappa == half) ? 1.0 : 2.0;
        const double l = std::log(mult * ek) + (m == 0 ? 0.0 : 2.0 * m * std::log(static_cast<double>(kappa)));
        logs.push_back(l);
        peak = std::max(peak, l);
    }
    if (peak == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    return peak + std::log(acc) + std::log(2.0 * std::numbers::pi);
}

double term(double log_weight2, double log_shell_value) {
    if (log_shell_value == kNegInf) return 0.0;
    return std::exp(log_weight2 + log_shell_value);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

void NormOptions::validate() const {
    if (Mmax < 0 || Mmax > 1000) throw DomainError("norm Mmax must lie in [0, 1000]");
    if (Kmax < 0 || Kmax + 1 > kDyOrderCap) throw DomainError("norm Kmax must lie in [0, " + std::to_string(kDyOrderCap - 1) + "]");
    if (!(tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
    if (!(chop_tol >= 0.0)) throw DomainError("chop tolerance must be nonnegative");
}

double GevreyNormResult::value() const { return std::sqrt(value2); }

std::vector<double> log_tangential_shells(const ScalarField& h, double weight_power, int Mmax) {
    const auto e = mode_energies(h, weight_power);
    std::vector<double> out(static_cast<std::size_t>(Mmax + 1));
    for (int m = 0; m <= Mmax; ++m) out[static_cast<std::size_t>(m)] = log_shell(e, m);
    return out;
}

GevreyNormResult gevrey_space_norm(const ScalarField& h, double rho, double ell, int Mmax, int Kmax,
                                   double tail_tol, double chop_tol) {
    NormOptions{Mmax, Kmax, tail_tol, chop_tol}.validate();
    if (!(ell >= 2.0)) throw DomainError("ell must be >= 2");
    h.check_finite("gevrey_space_norm");

    GevreyNormResult r;
    double shell_m_last = 0.0, shell_k_last = 0.0;

    const auto trace = log_tangential_shells(h, ell - 1.0, Mmax);
    for (int m = 0; m <= Mmax; ++m) {
        const double t = term(2.0 * log_weight_N(rho, m), trace[static_cast<std::size_t>(m)]);
        r.value2 += t;
        if (m == Mmax) shell_m_last += t;
    }

    const auto dys = dy_powers(h, Kmax + 1, chop_tol);
    for (int k = 0; k <= Kmax; ++k) {
        const auto& d = dys[static_cast<std::size_t>(k + 1)];
        const auto shells = log_tangential_shells(d.field, ell, Mmax);
        double sum_k = 0.0;
        for (int m = 0; m <= Mmax; ++m) {
            const double lw = 2.0 * (std::log(m + 1.0) + log_weight_H(rho, m + 1, k));
            const double t = term(lw, shells[static_cast<std::size_t>(m)]);
            if (d.noise_dominated()) {
                r.unresolved += t;
                continue;
            }
            sum_k += t;
            if (m == Mmax) shell_m_last += t;
        }
        if (d.noise_dominated()) r.noise_flags.push_back({"h", k});
        r.value2 += sum_k;
        if (k == Kmax) shell_k_last = sum_k;
    }
    r.tail_ratio_m = safe_ratio(shell_m_last, r.value2);
    r.tail_ratio_k = safe_ratio(shell_k_last, r.value2);
    r.converged = r.tail_ratio_m < tail_tol && r.tail_ratio_k < tail_tol;
    return r;
}

double NormReport::X() const { return std::sqrt(X2); }
double NormReport::Y() const { return std::sqrt(Y2); }

double NormReport::mixed_X(int m, int k) const {
    const std::size_t idx = static_cast<std::size_t>(m) * static_cast<std::size_t>(Kmax + 1) + static_cast<std::size_t>(k);
    return terms_phi.at(idx) + terms_uy.at(idx);
}

NormReport norm_report(const StateSnapshot& s, double rho, const NormOptions& opts) {
    opts.validate();
    const auto& g = *s.grid();
    const double ell = g.ell();
    const int M = opts.Mmax, K = opts.Kmax;
    const std::size_t nmk = static_cast<std::size_t>(M + 1) * static_cast<std::size_t>(K + 1);

    NormReport r;
    r.t = s.t;
    r.rho = rho;
    r.Mmax = M;
    r.Kmax = K;
    r.terms_U.assign(static_cast<std::size_t>(M + 1), 0.0);
    r.terms_lambda.assign(static_cast<std::size_t>(M + 1), 0.0);
    r.terms_phi.assign(nmk, 0.0);
    r.terms_uy.assign(nmk, 0.0);

    std::vector<double> logN2(static_cast<std::size_t>(M + 2));
    for (int m = 0; m <= M + 1; ++m) logN2[static_cast<std::size_t>(m)] = 2.0 * log_weight_N(rho, m);

    const auto shells_U = log_tangential_shells(s.Uaux, 0.0, M);
    const auto shells_lam = log_tangential_shells(lambda_algebraic(s), ell - 1.0, M);
    for (int m = 0; m <= M; ++m) {
        r.terms_U[static_cast<std::size_t>(m)] = term(logN2[static_cast<std::size_t>(m + 1)], shells_U[static_cast<std::size_t>(m)]);
        r.terms_lambda[static_cast<std::size_t>(m)] =
            term(std::log(m + 1.0) + logN2[static_cast<std::size_t>(m + 1)], shells_lam[static_cast<std::size_t>(m)]);
    }

    const auto dphi = dy_powers(s.phi, K, opts.chop_tol);
    const auto du = dy_powers(s.u, K + 1, opts.chop_tol);
    std::vector<bool> excluded_phi(static_cast<std::size_t>(K + 1)), excluded_uy(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) {
        const auto sp = log_tangential_shells(dphi[static_cast<std::size_t>(k)].field, ell, M);
        const auto su = log_tangential_shells(du[static_cast<std::size_t>(k + 1)].field, ell, M);
        excluded_phi[static_cast<std::size_t>(k)] = dphi[static_cast<std::size_t>(k)].noise_dominated();
        excluded_uy[static_cast<std::size_t>(k)] = du[static_cast<std::size_t>(k + 1)].noise_dominated();
        if (excluded_phi[static_cast<std::size_t>(k)]) r.noise_flags.push_back({"phi", k});
        if (excluded_uy[static_cast<std::size_t>(k)]) r.noise_flags.push_back({"dy_u", k});
        for (int m = 0; m <= M; ++m) {
            const double lw = 2.0 * (std::log(m + 1.0) + log_weight_H(rho, m + 1, k));
            const std::size_t idx = static_cast<std::size_t>(m) * static_cast<std::size_t>(K + 1) + static_cast<std::size_t>(k);
            r.terms_phi[idx] = term(lw, sp[static_cast<std::size_t>(m)]);
            r.terms_uy[idx] = term(lw, su[static_cast<std::size_t>(m)]);
        }
    }

    // Same summation order for X and Y so that X2 <= Y2 survives rounding.
    double last_m = 0.0, last_k = 0.0;
    for (int m = 0; m <= M; ++m) {
        const double tu = r.terms_U[static_cast<std::size_t>(m)];
        const double tl = r.terms_lambda[static_cast<std::size_t>(m)];
        r.X2 += tu;
        r.Y2 += NormReport::y_factor_U(m) * tu;
        r.X2 += tl;
        r.Y2 += NormReport::y_factor_lambda(m) * tl;
        if (m == M) last_m += tu + tl;
    }
    for (int m = 0; m <= M; ++m) {
        for (int k = 0; k <= K; ++k) {
            const std::size_t idx = static_cast<std::size_t>(m) * static_cast<std::size_t>(K + 1) + static_cast<std::size_t>(k);
            const double f = NormReport::y_factor_mixed(m, k);
            for (auto [t, excluded] : {std::pair{r.terms_phi[idx], excluded_phi[static_cast<std::size_t>(k)]},
                                       std::pair{r.terms_uy[idx], excluded_uy[static_cast<std::size_t>(k)]}}) {
                if (excluded) {
                    r.unresolved += t;
                    continue;
                }
                r.X2 += t;
                r.Y2 += f * t;
                if (m == M) last_m += t;
                if (k == K) last_k += t;
            }
        }
    }
    r.tail_ratio_m = safe_ratio(last_m, r.X2);
    r.tail_ratio_k = safe_ratio(last_k, r.X2);
    r.converged = r.tail_ratio_m < opts.tail_tol && r.tail_ratio_k < opts.tail_tol;
    if (!(r.X2 <= r.Y2)) throw std::logic_error("X2 <= Y2 violated");
    return r;
}

NormReport x_norm(const StateSnapshot& s, double rho, const NormOptions& opts) { return norm_report(s, rho, opts); }
NormReport y_norm(const StateSnapshot& s, double rho, const NormOptions& opts) { return norm_report(s, rho, opts); }

double l2x_linfy(const ScalarField& g) {
    const auto& grid = *g.grid();
    double acc = 0.0;
    for (int i = 0; i < grid.Nx(); ++i) {
        double m = 0.0;
        for (int j = 0; j < grid.Ny(); ++j) m = std::max(m, std::abs(g(i, j)));
        acc += m * m;
    }
    return std::sqrt(acc * grid.dx());
}

TangentialCheck tangential_u_check(const StateSnapshot& s, const NormReport& report, double ell) {
    const int M = report.Mmax;
    const double rho = report.rho;
    const auto& g = *s.grid();
    TangentialCheck c;

    const auto shells = log_tangential_shells(s.u, ell - 1.0, M);
    for (int m = 0; m <= M; ++m) {
        const double t = term(2.0 * log_weight_N(rho, m), shells[static_cast<std::size_t>(m)]);
        c.lhs_u += t;
        c.lhs_u_weighted += (m + 1.0) * t;
    }

    // d_x^m v with multipliers kappa^m / kappa_top^m, rescaled in log space.
    const int half = g.Nx() / 2;
    const auto spec = x_spectrum(s.v);
    const int ny = g.Ny();
    for (int m = 0; m <= M; ++m) {
        const int top = (m == 0) ? half : half - 1;
        const double log_top = (m == 0 || top <= 1) ? 0.0 : m * std::log(static_cast<double>(top));
        std::vector<std::complex<double>> sm(spec.size(), {0.0, 0.0});
        static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (int kappa = (m == 0 ? 0 : 1); kappa <= top; ++kappa) {
            const double scaled = (m == 0) ? 1.0 : std::exp(m * std::log(static_cast<double>(kappa)) - log_top);
            const auto factor = scaled * ipow[m % 4];
            for (int j = 0; j < ny; ++j) {
                const std::size_t idx = static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
                sm[idx] = spec[idx] * factor;
            }
        }
        const double n = l2x_linfy(from_x_spectrum(s.v.grid(), sm));
        if (n == 0.0) continue;
        const double t = std::exp(2.0 * log_weight_N(rho, m + 1) + 2.0 * std::log(n) + 2.0 * log_top);
        c.lhs_v += t;
        c.lhs_v_weighted += (m + 1.0) * t;
    }

    c.rhs_bound = (1.0 + report.X2) * report.X2;
    c.rhs_bound_y = (1.0 + report.X2) * report.Y2;
    c.C_u = safe_ratio(c.lhs_u, c.rhs_bound);
    c.C_u_weighted = safe_ratio(c.lhs_u_weighted, c.rhs_bound_y);
    c.C_v = safe_ratio(c.lhs_v, c.rhs_bound);
    c.C_v_weighted = safe_ratio(c.lhs_v_weighted, c.rhs_bound_y);
    return c;
}

TangentialCheck tangential_u_check(const StateSnapshot& s, double rho, const NormOptions& opts) {
    return tangential_u_check(s, norm_report(s, rho, opts), s.grid()->ell());
}

}  // namespace hyprandtl
