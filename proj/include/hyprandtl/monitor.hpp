#pragma once

/// @file monitor.hpp
/// @brief Bootstrap bookkeeping for the a priori estimate along a run.
///
/// Along a run the ledger tracks
///
///   shadow(t) = sup_{s<=t} X(s) + ( int_0^t Y^2 )^{1/2}
///
/// against the assumed budget 2 C0 D and the concluded bound C0 D, where
/// D = ||u0||_{2 rho0, ell} + ||u1||_{2 rho0, ell+1} and C0 = X(0) / D is fitted,
/// so C0 D = X(0).

#include <optional>
#include <string>
#include <vector>

#include "hyprandtl/norms.hpp"

namespace hyprandtl {

struct LedgerSample {
    double t = 0.0;
    double rho = 0.0;
    double X2 = 0.0;
    double Y2 = 0.0;
    /// int_0^t Y^2 by the trapezoid rule over recorded samples.
    double int_Y2 = 0.0;
    double sup_X = 0.0;

    double shadow() const;
};

enum class VerdictKind { holds, violated, blowup, inconclusive };

std::string to_string(VerdictKind v);

class BootstrapLedger {
public:
    /// data_norm = D above; C0_emp is fixed at the first record as X(0) / D (0 when D = 0).
    explicit BootstrapLedger(double data_norm = 0.0);

    /// Appends a sample; rejects non-increasing times with DomainError.
    void record(double t, double rho, double X2, double Y2);
    /// Reports from norm_report; X and Y must come from the same snapshot.
    void record(const NormReport& report_x, const NormReport& report_y);

    const std::vector<LedgerSample>& series() const { return series_; }
    bool empty() const { return series_.empty(); }
    double data_norm() const { return data_norm_; }
    double C0_emp() const { return C0_; }
    /// 2 C0 D = 2 X(0).
    double budget() const { return 2.0 * C0_ * data_norm_; }
    double sup_X() const;
    double integral_Y2() const;
    double shadow() const;

private:
    double data_norm_;
    double C0_ = 0.0;
    std::vector<LedgerSample> series_;
};

struct InequalityFit {
    /// max over samples of C_i (0 for an all-zero trajectory).
    double C_emp = 0.0;
    std::vector<double> dX2dt;
    /// Smallest C with 1/2 dX^2/dt <= (-mu + C + C X^4) Y^2 at each sample, floored at 0.
    std::vector<double> C_i;
    /// (-mu + C_emp (1 + X^4)) Y^2 - 1/2 dX^2/dt; nonnegative by construction.
    std::vector<double> margin;
    /// Sign changes of dX^2/dt among samples above the noise floor.
    int sign_flips = 0;
    bool noisy = false;
};

struct FitOptions {
    /// Samples with |dX^2/dt| below this fraction of the largest are ignored for sign flips.
    double flip_floor = 1e-3;
    /// More flips than max(min_flips, fraction * samples) marks the derivative noisy.
    int min_flips = 2;
    double flip_fraction = 0.125;
};

/// dX^2/dt by second-order differences on the (possibly nonuniform) sample times.
/// Needs at least 3 samples; throws DomainError otherwise.
InequalityFit check_differential_inequality(const BootstrapLedger& ledger, double mu, const FitOptions& opts = {});

/// 2 (1/2 + C + C (2 C0)^4 D^4).
double choose_mu(double C_emp, double C0_emp, double data_norm);

struct Verdict {
    VerdictKind kind = VerdictKind::holds;
    /// Time of the first violation or of the blowup.
    std::optional<double> at;
    std::string reason;
    double shadow = 0.0;
    /// X(0) (1 + tolerance): the concluded bound C0 D with slack.
    double bound = 0.0;
    double budget = 0.0;
};

/// blowup (if blowup_time is set) > violated (shadow above budget at any
/// sample, or above X(0)(1 + tol) at the end) > inconclusive (noisy fit) > holds.
Verdict decide(const BootstrapLedger& ledger, const InequalityFit* fit, double shadow_tol,
               std::optional<double> blowup_time = std::nullopt, const std::string& blowup_reason = {});

/// SVG with X(t), Y(t) on a log axis and margin(t) below; pure text output.
std::string ledger_svg(const BootstrapLedger& ledger, const InequalityFit* fit);

}  // namespace hyprandtl
