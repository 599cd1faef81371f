#pragma once

/// @file verifier.hpp
/// @brief Exact certification of the combinatorial weight inequalities over finite index ranges.
///
/// Every inequality has the shape  A(idx) <= C * B(idx)  with A, B built from
/// factorials, integer powers and the weights N, H, L. Squared, (A/B)^2 is a
/// rational number for rational rho. It is held exactly as a vector of prime
/// exponents; a double log-sum is only used as a pre-filter, and any comparison
/// within 1e-6 of a tie is decided with big integers.
///
/// A certificate reports sup (A/B)^2 over the range, where it is attained, and
/// whether the per-outer-index maxima are non-increasing past their maximum
/// (checked separately on even and odd outer indices, since floor(m/2) splits
/// the admissible inner ranges by parity).

#include <cstdint>
#include <string>
#include <vector>

#include "hyprandtl/norms.hpp"

namespace hyprandtl {

enum class InequalityId { FE1, FE2, FE3, FE4, FE5, FE6, FE10, LAETIMATE, YOUNG_DIS, FACT_SUBADD };

std::string to_string(InequalityId id);
InequalityId parse_inequality(const std::string& s);

/// rho = num / den, num, den > 0.
struct ExactRho {
    std::int64_t num = 1;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    /// "p/q", an integer, or a finite decimal such as "0.125".
    static ExactRho parse(const std::string& s);
};

struct InequalityCertificate {
    InequalityId id = InequalityId::FE1;
    /// Outer index bound: m for FE1/2/5/6, k for FE3/4, m+k for FE10/LAETIMATE.
    int max_outer = 0;
    std::string outer_index;
    ExactRho rho;
    /// sup (A/B)^2 as a reduced fraction of decimal strings ("0"/"1" for an empty range).
    std::string sup_num = "0";
    std::string sup_den = "1";
    double sup_approx = 0.0;
    /// Index tuple attaining the sup, named by `argmax_names`.
    std::vector<int> argmax;
    std::vector<std::string> argmax_names;
    bool monotone_tail = true;
    bool passed = true;
    std::uint64_t evaluated = 0;
    double wall_seconds = 0.0;
    /// Net power of rho in (A/B)^2; the sup over rho' scales by (rho'/rho)^rho_power.
    int rho_power = 0;
    /// log10 of the per-outer-index maxima (-inf where the inner range is empty).
    std::vector<double> outer_log10;
};

InequalityCertificate verify_fe1(int max_m, const ExactRho& rho);
InequalityCertificate verify_fe2(int max_m, const ExactRho& rho);
InequalityCertificate verify_fe3(int max_k, const ExactRho& rho);
InequalityCertificate verify_fe4(int max_k, const ExactRho& rho);
InequalityCertificate verify_fe5(int max_m, const ExactRho& rho);
InequalityCertificate verify_fe6(int max_m, const ExactRho& rho);
InequalityCertificate verify_fe10(int max_sum, const ExactRho& rho);
InequalityCertificate verify_laetimate(int max_sum, const ExactRho& rho);
/// Dispatch for FE1..FE6 (bound = max_m or max_k) and FE10/LAETIMATE (bound = max m+k).
InequalityCertificate verify_weight_inequality(InequalityId id, int bound, const ExactRho& rho);

/// Exact squared ratio (A/B)^2 at one index tuple as a decimal fraction "num/den".
/// Index order: (m, j) for FE1/2/5/6, (k, i) for FE3/4, (m, k, i, j) for FE10/LAETIMATE.
std::string exact_ratio_sq(InequalityId id, const std::vector<int>& idx, const ExactRho& rho);

struct YoungResult {
    bool passed = true;
    int trials = 0;
    int length = 0;
    std::uint64_t seed = 0;
    /// min over trials of (RHS^2 - LHS^2) / RHS^2 (1 when every RHS vanishes).
    double min_slack = 1.0;
    int equality_cases = 0;
};

/// Random nonnegative rational sequences p, q of the given length:
/// || p * q ||_2^2 <= ||q||_2^2 (sum p)^2 checked exactly.
YoungResult verify_young_dis(int trials, int length, std::uint64_t seed);
/// Same inequality for given integer sequences (exact).
bool young_holds(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& q, bool* equality = nullptr);

struct SubadditivityResult {
    bool passed = true;
    int max_n = 0;
    std::uint64_t factorial_pairs = 0;
    std::uint64_t binomial_pairs = 0;
};

/// p! q! <= (p+q)! for p+q <= max_n, and binom(a1,b1) binom(a2,b2) <= binom(a1+a2, b1+b2)
/// for 0 <= b <= a componentwise, a1+a2 <= max_n.
SubadditivityResult verify_factorial_subadditivity(int max_n);

struct KrBoundResult {
    bool passed = true;
    int max_k = 0;
    /// For each r: max_k k r^k as a double, and the bound 1/(1-r).
    std::vector<double> r, sup_kr, bound;
};

/// k r^k <= (1-r)^{-1} for r in {1/4, 1/3, 1/2}, 0 <= k <= max_k, exactly.
KrBoundResult verify_kr_bound(int max_k);

struct InitBoundResult {
    double X0 = 0.0;
    /// ||u0||_{2 rho0, ell} and ||u1||_{2 rho0, ell+1}.
    double norm_u0 = 0.0;
    double norm_u1 = 0.0;
    /// The same at rho0, for the logged ratio.
    double norm_u0_rho0 = 0.0;
    double norm_u1_rho0 = 0.0;
    double C0_emp = 0.0;
    /// C0 computed with data norms at rho0 instead of 2 rho0.
    double C0_emp_rho0 = 0.0;
    bool converged = true;
    /// Data norms at 2 rho0 not converged.
    bool inconclusive = false;
    KrBoundResult kr;
};

/// X(0) at rho0 over the data norms at 2 rho0. Zero data gives C0 = 0 by convention.
InitBoundResult verify_init_bound(const ScalarField& u0, const ScalarField& u1, double eta, double rho0,
                                  const NormOptions& opts = {});

struct WeightAgreement {
    /// max over m, k of |H_float / H_exact - 1|, likewise for N and L.
    double max_rel_H = 0.0;
    double max_rel_N = 0.0;
    double max_rel_L = 0.0;
    double max_rel() const;
};

WeightAgreement compare_float_weights(const ExactRho& rho, int max_m, int max_k);

/// JSON object (id, range, rho, sup fraction, argmax, tail flag, timing).
std::string to_json(const InequalityCertificate& c);

}  // namespace hyprandtl
