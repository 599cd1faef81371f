#include "hyprandtl/weights.hpp"

#include <cmath>
#include <string>

namespace hyprandtl {

namespace {

constexpr int kIndexCap = 20000;

void check_index(int m, int k) {
    if (m < 0 || k < 0 || m + k > kIndexCap) {
        throw DomainError("weight index out of range: m=" + std::to_string(m) +
                          " k=" + std::to_string(k));
    }
}

void check_rho(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw DomainError("radius must be positive and finite, got " + std::to_string(rho));
    }
}

}  // namespace

RadiusSchedule RadiusSchedule::with_default_horizon(double rho0, double mu) {
    RadiusSchedule s{rho0, mu, 1.0 / mu};
    s.validate();
    return s;
}

void RadiusSchedule::validate() const {
    if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
    if (!(mu >= 1.0)) throw DomainError("mu must be >= 1");
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
}

double radius_at(const RadiusSchedule& sched, double t) {
    if (!(t >= 0.0 && t <= sched.T)) {
        throw DomainError("time " + std::to_string(t) + " outside [0, " + std::to_string(sched.T) + "]");
    }
    return sched.rho0 * std::exp(-sched.mu * t);
}

double log_weight_H(double rho, int m, int k) {
    check_rho(rho);
    check_index(m, k);
    // Extended precision keeps the result within an ulp of the exact log.
    const long double n = m + k;
    const long double v = (n + 1) * std::log(static_cast<long double>(rho)) + 9.0L * std::log(n + 1) -
                          std::lgamma(n + 1) - 0.5L * std::lgamma(static_cast<long double>(m) + 1);
    return static_cast<double>(v);
}

double log_weight_N(double rho, int m) { return log_weight_H(rho, m, 0); }

double log_weight_L(double rho, int k) {
    check_rho(rho);
    check_index(1, k);
    const long double n = k + 2;
    return static_cast<double>(n * std::log(static_cast<long double>(rho)) + 9.0L * std::log(n) - std::lgamma(n));
}

double weight_N(double rho, int m) { return std::exp(log_weight_N(rho, m)); }
double weight_H(double rho, int m, int k) { return std::exp(log_weight_H(rho, m, k)); }
double weight_L(double rho, int k) { return std::exp(log_weight_L(rho, k)); }

double weight_time_derivative(const RadiusSchedule& sched, double t, int m, int k) {
    const double rho = radius_at(sched, t);
    return -sched.mu * static_cast<double>(m + k + 1) * weight_H(rho, m, k);
}

WeightTable::WeightTable(double rho, int Mmax, int Kmax, double ell)
    : rho_(rho), Mmax_(Mmax), Kmax_(Kmax), ell_(ell) {
    check_rho(rho);
    if (Mmax < 0 || Kmax < 0) throw DomainError("weight caps must be nonnegative");
    if (ell < 2.0) throw DomainError("weight exponent ell must be >= 2");
    logN_.resize(static_cast<std::size_t>(Mmax + 1));
    logH_.resize(static_cast<std::size_t>(Mmax + 1) * static_cast<std::size_t>(Kmax + 1));
    for (int m = 0; m <= Mmax; ++m) {
        logN_[static_cast<std::size_t>(m)] = log_weight_N(rho, m);
        for (int k = 0; k <= Kmax; ++k) {
            logH_[static_cast<std::size_t>(m) * static_cast<std::size_t>(Kmax + 1) +
                  static_cast<std::size_t>(k)] = log_weight_H(rho, m, k);
        }
    }
}

double WeightTable::log_H(int m, int k) const {
    if (m < 0 || m > Mmax_ || k < 0 || k > Kmax_) {
        throw DomainError("WeightTable index out of range");
    }
    return logH_[static_cast<std::size_t>(m) * static_cast<std::size_t>(Kmax_ + 1) +
                 static_cast<std::size_t>(k)];
}

double WeightTable::N(int m) const { return std::exp(log_N(m)); }
double WeightTable::H(int m, int k) const { return std::exp(log_H(m, k)); }

}  // namespace hyprandtl
