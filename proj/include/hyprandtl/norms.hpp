#pragma once

/// @file norms.hpp
/// @brief Truncated anisotropic Gevrey norms and the energy pair X_rho / Y_rho.
///
/// Tangential derivatives are never formed explicitly. For each vertical
/// derivative order the per-mode energies E_kappa = int <y>^{2p} |h_kappa(y)|^2 dy
/// are computed once, and
///
///   || <y>^p d_x^m h ||^2 = 2 pi sum_kappa mult_kappa kappa^{2m} E_kappa
///
/// is summed in log space, so m can run far beyond the double range of kappa^m.

#include <string>
#include <vector>

#include "hyprandtl/dynamics.hpp"
#include "hyprandtl/grid.hpp"

namespace hyprandtl {

struct NormOptions {
    int Mmax = 48;
    int Kmax = 11;
    double tail_tol = 1e-6;
    double chop_tol = kDefaultChopTol;

    void validate() const;
};

/// Vertical derivative order of a term excluded as noise dominated; applies to every m.
struct NoiseFlag {
    std::string field;
    int k = 0;
};

struct GevreyNormResult {
    /// Truncated squared norm.
    double value2 = 0.0;
    double tail_ratio_m = 0.0;
    double tail_ratio_k = 0.0;
    /// Squared mass of excluded noise-dominated terms.
    double unresolved = 0.0;
    std::vector<NoiseFlag> noise_flags;
    bool converged = true;

    double value() const;
};

/// Sum over m <= Mmax of N_{rho,m}^2 ||<y>^{ell-1} d_x^m h||^2 plus
/// sum over m <= Mmax, k <= Kmax of (m+1)^2 H_{rho,m+1,k}^2 ||<y>^ell d_x^m d_y^{k+1} h||^2.
GevreyNormResult gevrey_space_norm(const ScalarField& h, double rho, double ell, int Mmax, int Kmax,
                                   double tail_tol = 1e-6, double chop_tol = kDefaultChopTol);

struct NormReport {
    double t = 0.0;
    double rho = 0.0;
    int Mmax = 0;
    int Kmax = 0;
    double X2 = 0.0;
    double Y2 = 0.0;
    /// X-weighted terms; the Y terms are these times (m+1), (m+1) and (m+k+1).
    std::vector<double> terms_U;       // [m]
    std::vector<double> terms_lambda;  // [m]
    std::vector<double> terms_phi;     // [m * (Kmax+1) + k]
    std::vector<double> terms_uy;      // [m * (Kmax+1) + k]
    double tail_ratio_m = 0.0;
    double tail_ratio_k = 0.0;
    double unresolved = 0.0;
    std::vector<NoiseFlag> noise_flags;
    bool converged = true;

    double X() const;
    double Y() const;
    double mixed_X(int m, int k) const;
    /// Integer factor relating the Y term to the X term of each block.
    static double y_factor_U(int m) { return m + 1.0; }
    static double y_factor_lambda(int m) { return m + 1.0; }
    static double y_factor_mixed(int m, int k) { return m + k + 1.0; }
};

/// X and Y are evaluated together; both use the algebraic lambda.
NormReport norm_report(const StateSnapshot& s, double rho, const NormOptions& opts = {});
NormReport x_norm(const StateSnapshot& s, double rho, const NormOptions& opts = {});
NormReport y_norm(const StateSnapshot& s, double rho, const NormOptions& opts = {});

/// Cross checks of the tangential estimates: derivatives of u and of v bounded by the energy pair.
struct TangentialCheck {
    double lhs_u = 0.0;           // sum_m N_m^2 ||<y>^{ell-1} d_x^m u||^2
    double lhs_u_weighted = 0.0;  // with the extra (m+1)
    double lhs_v = 0.0;           // sum_m N_{m+1}^2 ||d_x^m v||^2_{L2x Linf_y}
    double lhs_v_weighted = 0.0;  // with the extra (m+1)
    double rhs_bound = 0.0;       // (1 + X^2) X^2
    double rhs_bound_y = 0.0;     // (1 + X^2) Y^2
    double C_u = 0.0;
    double C_u_weighted = 0.0;
    double C_v = 0.0;
    double C_v_weighted = 0.0;
};

TangentialCheck tangential_u_check(const StateSnapshot& s, double rho, const NormOptions& opts = {});
/// Same, reusing an existing report for X and Y.
TangentialCheck tangential_u_check(const StateSnapshot& s, const NormReport& report, double ell);

/// sqrt( int sup_y |g(x,y)|^2 dx ) with the trapezoid rule in x.
double l2x_linfy(const ScalarField& g);

/// log || <y>^p d_x^m h ||^2 for m = 0..Mmax (-inf for vanishing shells).
std::vector<double> log_tangential_shells(const ScalarField& h, double weight_power, int Mmax);

}  // namespace hyprandtl
