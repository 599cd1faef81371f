#pragma once

/// @file config.hpp
/// @brief Run configuration: INI file with sections, validated in one pass.
///
///   [grid]      Nx, Ny, Ymax
///   [model]     eta, ell
///   [schedule]  rho0, mu (number or "auto"), T (number or "1/mu")
///   [u0] [u1]   family, amplitude, modes ("k:phase, k:phase"), profile, file
///   [norms]     Mmax, Kmax, tail_tol, chop_tol
///   [time]      dt, cfl_safety, max_halvings, project_top
///   [output]    norms_every, fields_every, plots
///   [monitor]   shadow_tol, pilot_T
///   [run]       seed, workers

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyprandtl/dynamics.hpp"
#include "hyprandtl/initial_data.hpp"
#include "hyprandtl/norms.hpp"

namespace hyprandtl {

/// Every problem found in a configuration, one per line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct RunConfig {
    int Nx = 64;
    int Ny = 96;
    double Ymax = 40.0;

    double eta = 1.0;
    double ell = 2.0;

    double rho0 = 0.1;
    /// Unset means "auto": a pilot run at mu = 1 followed by choose_mu.
    std::optional<double> mu;
    /// Unset means T = 1/mu.
    std::optional<double> T;

    DataSpec u0 = default_u0();
    DataSpec u1 = default_u1();

    NormOptions norms{};
    TimeStepper time{2e-3, 0.5, 1.0, 8, true};

    /// Norms are sampled every `norms_every` steps and at the final time.
    int norms_every = 5;
    /// Field dumps every `fields_every` norm samples (0: first and last only).
    int fields_every = 0;
    bool plots = true;

    double shadow_tol = 1e-2;
    double pilot_T = 1.0;

    std::uint64_t seed = 0;
    int workers = 0;

    static DataSpec default_u0();
    static DataSpec default_u1();

    /// Throws ConfigError listing every violated constraint.
    void validate() const;
};

/// Reads and validates; syntax errors, unknown keys and range violations are reported together.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
/// Canonical INI text; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& c);

std::string format_modes(const std::vector<XMode>& modes);
/// "1:0, 3:0.5" -> {{1, 0}, {3, 0.5}}; throws DomainError on malformed input.
std::vector<XMode> parse_modes(const std::string& s);

}  // namespace hyprandtl
