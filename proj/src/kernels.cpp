#include "hyprandtl/kernels.hpp"

#include <fftw3.h>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hyprandtl/grid.hpp"

namespace hyprandtl {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct FourierPlans::Impl {
    int n = 0;
    int n_padded = 0;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    fftw_plan fwd_pad = nullptr;
    fftw_plan inv_pad = nullptr;
};

FourierPlans::FourierPlans(int n, int n_padded) : impl_(new Impl) {
    impl_->n = n;
    impl_->n_padded = n_padded;
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    // FFTW_ESTIMATE keeps plans (and hence results) reproducible across runs.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto make = [&](int len, fftw_plan& fwd, fftw_plan& inv) {
        std::vector<double> r(static_cast<std::size_t>(len));
        std::vector<std::complex<double>> c(static_cast<std::size_t>(len / 2 + 1));
        fwd = fftw_plan_dft_r2c_1d(len, r.data(), reinterpret_cast<fftw_complex*>(c.data()), flags);
        inv = fftw_plan_dft_c2r_1d(len, reinterpret_cast<fftw_complex*>(c.data()), r.data(), flags);
        if (!fwd || !inv) throw std::runtime_error("FFTW plan creation failed for length " + std::to_string(len));
    };
    make(n, impl_->fwd, impl_->inv);
    make(n_padded, impl_->fwd_pad, impl_->inv_pad);
}

FourierPlans::~FourierPlans() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    for (fftw_plan p : {impl_->fwd, impl_->inv, impl_->fwd_pad, impl_->inv_pad})
        if (p) fftw_destroy_plan(p);
    delete impl_;
}

void FourierPlans::r2c(int n, double* in, std::complex<double>* out) const {
    fftw_plan p = (n == impl_->n) ? impl_->fwd : (n == impl_->n_padded ? impl_->fwd_pad : nullptr);
    if (!p) throw std::invalid_argument("no FFT plan for length " + std::to_string(n));
    fftw_execute_dft_r2c(p, in, reinterpret_cast<fftw_complex*>(out));
}

void FourierPlans::c2r(int n, std::complex<double>* in, double* out) const {
    fftw_plan p = (n == impl_->n) ? impl_->inv : (n == impl_->n_padded ? impl_->inv_pad : nullptr);
    if (!p) throw std::invalid_argument("no FFT plan for length " + std::to_string(n));
    fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(in), out);
}

void set_worker_count(int workers) {
    if (workers <= 0) {
        if (const char* env = std::getenv("HYPRANDTL_WORKERS")) {
            const int w = std::atoi(env);
            if (w > 0) omp_set_num_threads(w);
        }
        return;
    }
    omp_set_num_threads(workers);
}

int worker_count() { return omp_get_max_threads(); }

namespace kernels {

namespace serial {

void apply_columns(const Matrix& M, std::span<const double> in, std::span<double> out, int nx) {
    const int ny = M.cols;
    for (int i = 0; i < nx; ++i) {
        const double* src = in.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ny);
        double* dst = out.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(M.rows);
        for (int r = 0; r < M.rows; ++r) {
            double acc = 0.0;
            for (int c = 0; c < ny; ++c) acc += M(r, c) * src[c];
            dst[r] = acc;
        }
    }
}

void forward_x(std::span<const double> in, std::span<std::complex<double>> spec, int n, int ny) {
    const int nmodes = n / 2 + 1;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int kappa = 0; kappa < nmodes; ++kappa) {
        for (int j = 0; j < ny; ++j) {
            std::complex<double> acc{0.0, 0.0};
            for (int i = 0; i < n; ++i) {
                // exact integer reduction keeps the phase argument small
                const long long phase = (static_cast<long long>(kappa) * i) % n;
                const double a = -two_pi * static_cast<double>(phase) / n;
                acc += in[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] *
                       std::complex<double>(std::cos(a), std::sin(a));
            }
            spec[static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] =
                acc / static_cast<double>(n);
        }
    }
}

void inverse_x(std::span<const std::complex<double>> spec, std::span<double> out, int n, int ny) {
    const int half = n / 2;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < ny; ++j) {
            double acc = spec[static_cast<std::size_t>(j)].real();
            for (int kappa = 1; kappa <= half; ++kappa) {
                const long long phase = (static_cast<long long>(kappa) * i) % n;
                const double a = two_pi * static_cast<double>(phase) / n;
                const auto c = spec[static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)];
                const double term = c.real() * std::cos(a) - c.imag() * std::sin(a);
                acc += (kappa == half) ? term : 2.0 * term;
            }
            out[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] = acc;
        }
    }
}

void mode_energies(std::span<const std::complex<double>> spec, std::span<const double> yweights, int nmodes,
                   int ny, std::span<double> energies) {
    for (int kappa = 0; kappa < nmodes; ++kappa) {
        double acc = 0.0;
        for (int j = 0; j < ny; ++j) {
            acc += yweights[static_cast<std::size_t>(j)] *
                   std::norm(spec[static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)]);
        }
        energies[static_cast<std::size_t>(kappa)] = acc;
    }
}

}  // namespace serial

namespace parallel {

void apply_columns(const Matrix& M, std::span<const double> in, std::span<double> out, int nx) {
    const int ny = M.cols;
    const int rows = M.rows;
    const double* mat = M.data.data();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
        const double* src = in.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ny);
        double* dst = out.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(rows);
        for (int r = 0; r < rows; ++r) {
            const double* row = mat + static_cast<std::size_t>(r) * static_cast<std::size_t>(ny);
            double acc = 0.0;
            for (int c = 0; c < ny; ++c) acc += row[c] * src[c];
            dst[r] = acc;
        }
    }
}

void forward_x(const FourierPlans& plans, std::span<const double> in, std::span<std::complex<double>> spec, int n,
               int ny) {
    const int nmodes = n / 2 + 1;
    const double scale = 1.0 / static_cast<double>(n);
#pragma omp parallel
    {
        std::vector<double> col(static_cast<std::size_t>(n));
        std::vector<std::complex<double>> out(static_cast<std::size_t>(nmodes));
#pragma omp for schedule(static)
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < n; ++i)
                col[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)];
            plans.r2c(n, col.data(), out.data());
            for (int kappa = 0; kappa < nmodes; ++kappa)
                spec[static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] =
                    out[static_cast<std::size_t>(kappa)] * scale;
        }
    }
}

void inverse_x(const FourierPlans& plans, std::span<const std::complex<double>> spec, std::span<double> out, int n,
               int ny) {
    const int nmodes = n / 2 + 1;
#pragma omp parallel
    {
        std::vector<std::complex<double>> col(static_cast<std::size_t>(nmodes));
        std::vector<double> res(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
        for (int j = 0; j < ny; ++j) {
            for (int kappa = 0; kappa < nmodes; ++kappa)
                col[static_cast<std::size_t>(kappa)] =
                    spec[static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)];
            // c2r ignores the imaginary parts of the zero and Nyquist modes
            plans.c2r(n, col.data(), res.data());
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] =
                    res[static_cast<std::size_t>(i)];
        }
    }
}

void mode_energies(std::span<const std::complex<double>> spec, std::span<const double> yweights, int nmodes,
                   int ny, std::span<double> energies) {
#pragma omp parallel for schedule(static)
    for (int kappa = 0; kappa < nmodes; ++kappa) {
        double acc = 0.0;
        const auto* row = spec.data() + static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny);
        for (int j = 0; j < ny; ++j) acc += yweights[static_cast<std::size_t>(j)] * std::norm(row[j]);
        energies[static_cast<std::size_t>(kappa)] = acc;
    }
}

}  // namespace parallel

}  // namespace kernels
}  // namespace hyprandtl
