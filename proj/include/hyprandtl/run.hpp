#pragma once

/// @file run.hpp
/// @brief Simulation orchestration and run-directory I/O behind the CLI.
///
/// A run directory holds
///
///   config.ini           canonical snapshot of the validated configuration
///   fields/              u_NNNNNN.bin, phi_, f_, lambda_ dumps (sample index NNNNNN)
///   norms.csv            t, rho, X2, Y2 and convergence information per sample
///   ledger.csv           bootstrap ledger with dX2/dt, margin and fitted C_i
///   diagnostics.csv      divergence, boundary and consistency residuals per sample
///   cross_checks.csv     tangential-bound constants per sample
///   pilot_ledger.csv     only for mu = auto
///   verdict.json         verdict, constants, mu policy and exit code
///   norms_terms.json     per-term breakdown of X at the first and last sample
///   plots.svg            X, Y and margin against t (output.plots = true)

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyprandtl/config.hpp"
#include "hyprandtl/monitor.hpp"
#include "hyprandtl/verifier.hpp"

namespace hyprandtl {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_violated = 2, exit_blowup = 3 };

int exit_code_for(VerdictKind v);

struct DiagnosticRow {
    double t = 0.0;
    double divergence = 0.0;
    /// max of the enforced boundary residuals.
    double boundary = 0.0;
    double phi_top = 0.0;
    /// ||lambda_evolved - lambda_algebraic|| / ||lambda_algebraic|| (0 when both vanish).
    double lambda_rel = 0.0;
    double far_field_u = 0.0;
    int halvings = 0;
};

struct CrossCheckRow {
    double t = 0.0;
    TangentialCheck check;
};

struct Trajectory {
    double mu = 1.0;
    double T = 1.0;
    BootstrapLedger ledger;
    std::vector<NormReport> reports;
    std::vector<DiagnosticRow> diagnostics;
    std::vector<CrossCheckRow> cross_checks;
    std::optional<double> blowup_time;
    std::string blowup_reason;
    StateSnapshot final_state;
};

/// Called at each norm sample with its index.
using SampleHook = std::function<void(const StateSnapshot&, std::size_t)>;

/// Integrates from s0 over [0, T] with rho(t) = rho0 e^{-mu t}, sampling norms every
/// cfg.norms_every steps and at T. A BlowupError ends the trajectory early and is recorded.
Trajectory integrate(const RunConfig& cfg, const StateSnapshot& s0, double mu, double T, double data_norm,
                     const SampleHook& hook = {});

struct SimulationSummary {
    std::filesystem::path dir;
    double mu = 1.0;
    bool mu_auto = false;
    double pilot_C_emp = 0.0;
    double T = 1.0;
    InitBoundResult init;
    std::optional<InequalityFit> fit;
    Verdict verdict;
    Trajectory trajectory;
    int exit_code = exit_ok;
};

struct SimulationOptions {
    std::ostream* log = nullptr;
    /// Allow writing into an existing non-empty directory.
    bool overwrite = false;
};

/// Full run: initial data, optional pilot for mu, monitored trajectory, and all outputs.
/// Throws ConfigError before touching the filesystem when the configuration is invalid.
SimulationSummary simulate(const RunConfig& cfg, const std::filesystem::path& dir, const SimulationOptions& opts = {});

struct InitialFields {
    GridPtr grid;
    ScalarField u0;
    ScalarField u1;
};

/// Generated u0, u1; with time.project_top their top Chebyshev mode is removed first.
InitialFields make_initial_fields(const RunConfig& cfg);

/// Re-analysis of a finished run from config.ini, ledger.csv and verdict.json.
struct AprioriReport {
    InequalityFit fit;
    Verdict verdict;
    double mu = 1.0;
    std::size_t samples = 0;
};

AprioriReport check_apriori(const std::filesystem::path& run_dir, std::optional<double> mu_override = std::nullopt,
                            std::optional<double> shadow_tol_override = std::nullopt);

struct FieldDiff {
    std::string name;
    double max_abs = 0.0;
    double max_rel = 0.0;
    /// b was interpolated spectrally onto a's grid.
    bool interpolated = false;
};

/// Max pointwise discrepancy of every field dump present in both runs.
std::vector<FieldDiff> diff_runs(const std::filesystem::path& a, const std::filesystem::path& b);

/// Values of `f` at arbitrary points by its Fourier-Chebyshev expansion.
ScalarField spectral_interpolate(const ScalarField& f, const GridPtr& target);

std::string verdict_json(const SimulationSummary& s);

}  // namespace hyprandtl
