#pragma once

/// @file weights.hpp
/// @brief Factorial weight sequences N, H, L and the shrinking radius schedule.
///
/// All weights are evaluated in log-space:
///
///   log H(rho, m, k) = (m+k+1) log rho + 9 log(m+k+1) - log (m+k)! - 1/2 log m!
///   N(rho, m)        = H(rho, m, 0)
///   L(rho, k)        = H(rho, 1, k)
///
/// so that factorials far beyond the double range (m ~ 10^4) stay finite.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hyprandtl {

/// Thrown when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// rho(t) = rho0 * exp(-mu t), t in [0, T].
struct RadiusSchedule {
    double rho0 = 0.1;
    double mu = 1.0;
    double T = 1.0;

    /// Schedule with the default horizon T = 1/mu.
    static RadiusSchedule with_default_horizon(double rho0, double mu);

    /// Throws DomainError unless rho0 > 0, mu >= 1 and T > 0.
    void validate() const;

    /// True when mu > 1; mu == 1 is accepted as the boundary regime.
    bool strict_regime() const { return mu > 1.0; }
};

double radius_at(const RadiusSchedule& sched, double t);

// Log-space primitives. These are the single source of truth; the value
// functions below are exp() of them.
double log_weight_H(double rho, int m, int k);
double log_weight_N(double rho, int m);
/// Independent closed form rho^{k+2}(k+2)^9/(k+1)!, used to cross-check H(rho,1,k).
double log_weight_L(double rho, int k);

double weight_N(double rho, int m);
double weight_H(double rho, int m, int k);
double weight_L(double rho, int k);

/// d/dt H_{rho(t),m,k} = -mu (m+k+1) H_{rho(t),m,k}.
double weight_time_derivative(const RadiusSchedule& sched, double t, int m, int k);

/// Precomputed log weights for a fixed radius.
class WeightTable {
public:
    static constexpr int kDefaultMmax = 256;
    static constexpr int kDefaultKmax = 64;

    WeightTable(double rho, int Mmax = kDefaultMmax, int Kmax = kDefaultKmax, double ell = 2.0);

    double rho() const { return rho_; }
    int Mmax() const { return Mmax_; }
    int Kmax() const { return Kmax_; }
    double ell() const { return ell_; }

    double log_N(int m) const { return logN_.at(static_cast<std::size_t>(m)); }
    double log_H(int m, int k) const;
    double N(int m) const;
    double H(int m, int k) const;

private:
    double rho_;
    int Mmax_;
    int Kmax_;
    double ell_;
    std::vector<double> logN_;
    std::vector<double> logH_;  // (Mmax+1) x (Kmax+1), row-major in m
};

}  // namespace hyprandtl
