#pragma once

/// @file kernels.hpp
/// @brief Data-parallel inner loops of the grid and norm modules.
///
/// Every kernel exists twice with identical signatures:
///   kernels::serial    plain loops (naive DFT for the x transforms); the reference
///   kernels::parallel  OpenMP loops over columns / modes, FFTW for the x transforms
///
/// The library calls kernels::parallel. Each parallel loop writes disjoint
/// outputs and does no cross-thread reduction, so results are bitwise
/// independent of the thread count.

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

namespace hyprandtl {

struct Matrix;

/// FFTW plans for the base and padded tangential lengths. Execution is
/// thread-safe; construction and destruction serialize on a global mutex.
class FourierPlans {
public:
    FourierPlans(int n, int n_padded);
    ~FourierPlans();
    FourierPlans(const FourierPlans&) = delete;
    FourierPlans& operator=(const FourierPlans&) = delete;

    /// Unnormalized real-to-complex transform of length n (n/2+1 outputs).
    void r2c(int n, double* in, std::complex<double>* out) const;
    /// Unnormalized complex-to-real inverse; `in` is clobbered.
    void c2r(int n, std::complex<double>* in, double* out) const;

private:
    struct Impl;
    Impl* impl_;
};

/// Set the OpenMP worker count (<= 0 keeps the runtime default). Also honours
/// the HYPRANDTL_WORKERS environment variable when called with 0.
void set_worker_count(int workers);
int worker_count();

namespace kernels {

namespace serial {

/// out[i, :] = M * in[i, :] for each of the nx rows.
void apply_columns(const Matrix& M, std::span<const double> in, std::span<double> out, int nx);

/// spec[kappa * ny + j] = (1/n) sum_i in[i * ny + j] e^{-i kappa x_i}, kappa = 0..n/2.
void forward_x(std::span<const double> in, std::span<std::complex<double>> spec, int n, int ny);

/// Inverse of forward_x over the Hermitian spectrum.
void inverse_x(std::span<const std::complex<double>> spec, std::span<double> out, int n, int ny);

/// energies[kappa] = sum_j yweights[j] |spec[kappa * ny + j]|^2.
void mode_energies(std::span<const std::complex<double>> spec, std::span<const double> yweights, int nmodes,
                   int ny, std::span<double> energies);

}  // namespace serial

namespace parallel {

void apply_columns(const Matrix& M, std::span<const double> in, std::span<double> out, int nx);
void forward_x(const FourierPlans& plans, std::span<const double> in, std::span<std::complex<double>> spec, int n,
               int ny);
void inverse_x(const FourierPlans& plans, std::span<const std::complex<double>> spec, std::span<double> out, int n,
               int ny);
void mode_energies(std::span<const std::complex<double>> spec, std::span<const double> yweights, int nmodes,
                   int ny, std::span<double> energies);

}  // namespace parallel

}  // namespace kernels
}  // namespace hyprandtl
