#pragma once

/// @file grid.hpp
/// @brief Discretized half-strip [0, 2pi) x [0, Ymax]: Fourier in x, Chebyshev in y.
///
/// Field values are stored row-major as values[i * Ny + j] with i the
/// tangential (x) index and j the vertical (y) index, so every vertical
/// column at fixed x is contiguous. Vertical nodes are the Chebyshev
/// Gauss-Lobatto points mapped to [0, Ymax] in increasing order, so
/// ys[0] = 0 is the wall and ys[Ny-1] = Ymax is the truncation boundary.

#include <complex>
#include <cstdint>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyprandtl/weights.hpp"

namespace hyprandtl {

/// Non-finite values or a failed numerical step.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
};

class FourierPlans;

class FieldGrid {
public:
    /// Nx must be a power of two >= 4, Ny >= 4, Ymax > 0, ell >= 2.
    FieldGrid(int Nx, int Ny, double Ymax = 20.0, double ell = 2.0);

    int Nx() const { return Nx_; }
    int Ny() const { return Ny_; }
    /// Size of the 3/2-rule padded tangential grid.
    int Nx_padded() const { return Nx_ * 3 / 2; }
    double Ymax() const { return Ymax_; }
    double ell() const { return ell_; }
    std::size_t size() const { return static_cast<std::size_t>(Nx_) * static_cast<std::size_t>(Ny_); }

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    /// Clenshaw-Curtis weights on [0, Ymax].
    const std::vector<double>& quad_weights() const { return quad_; }
    double dx() const;
    double dy_min() const { return ys_[1] - ys_[0]; }

    /// First vertical derivative (collocation).
    const Matrix& Dy() const { return Dy_; }
    /// Antiderivative from y = 0.
    const Matrix& Iy() const { return Iy_; }
    /// Node values -> Chebyshev coefficients.
    const Matrix& cheb_forward() const { return cheb_fwd_; }
    /// Chebyshev coefficients -> node values.
    const Matrix& cheb_inverse() const { return cheb_inv_; }
    /// Operator behind drop_top_mode.
    const Matrix& top_projection() const { return top_proj_; }

    const FourierPlans& plans() const { return *plans_; }

    bool same_shape(const FieldGrid& other) const;

private:
    int Nx_;
    int Ny_;
    double Ymax_;
    double ell_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> quad_;
    Matrix Dy_;
    Matrix Iy_;
    Matrix cheb_fwd_;
    Matrix cheb_inv_;
    Matrix top_proj_;
    std::shared_ptr<const FourierPlans> plans_;
};

using GridPtr = std::shared_ptr<const FieldGrid>;

GridPtr make_grid(int Nx, int Ny, double Ymax = 20.0, double ell = 2.0);

/// Real field on a FieldGrid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid);
    ScalarField(GridPtr grid, std::vector<double> values);

    template <class F>
    static ScalarField sample(GridPtr grid, F&& f) {
        ScalarField out(grid);
        const auto& xs = grid->xs();
        const auto& ys = grid->ys();
        for (int i = 0; i < grid->Nx(); ++i)
            for (int j = 0; j < grid->Ny(); ++j) out(i, j) = f(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);
        return out;
    }

    const GridPtr& grid() const { return grid_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }

    /// Throws NumericalError naming `what` if any value is NaN or Inf.
    void check_finite(const char* what) const;
    bool all_finite() const;
    double max_abs() const;
    /// max_x |f(x, 0)|
    double wall_trace() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double c);
    /// this += c * o
    ScalarField& axpy(double c, const ScalarField& o);

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid_->Ny()) + static_cast<std::size_t>(j); }
    void check_compatible(const ScalarField& o) const;

    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);
/// Pointwise product on the collocation grid (no de-aliasing).
ScalarField pointwise(const ScalarField& a, const ScalarField& b);

/// Largest derivative order accepted by dx_power.
inline constexpr int kDxPowerCap = 256;
/// Default Chebyshev-tail chop tolerance for dy_power, relative to the largest coefficient.
inline constexpr double kDefaultChopTol = 1e-15;
/// dy_power results whose noise indicator exceeds this are noise dominated.
inline constexpr double kNoiseThreshold = 0.1;

/// Fourier-multiplier derivative: mode k scaled by (ik)^m; the Nyquist mode is dropped for m >= 1.
ScalarField dx_power(const ScalarField& f, int m);

struct DyResult {
    ScalarField field;
    /// Cumulative (over orders 0..k) max of the resolution and round-off indicators.
    double noise_indicator = 0.0;
    bool noise_dominated() const { return noise_indicator > kNoiseThreshold; }
};

/// k-th vertical derivative computed on the Chebyshev expansion of each column.
/// Trailing coefficients below chop_tol * max|coefficient| are dropped first;
/// differentiation then acts exactly on the remaining polynomial.
DyResult dy_power(const ScalarField& f, int k, double chop_tol = kDefaultChopTol);

/// All orders 0..kmax in one pass.
std::vector<DyResult> dy_powers(const ScalarField& f, int kmax, double chop_tol = kDefaultChopTol);

/// Collocation derivative Dy applied to every column.
ScalarField apply_dy(const ScalarField& f);

/// Removes the highest Chebyshev coefficient of every column while keeping the
/// values at y = 0 and y = Ymax. With a_N = 0 the antiderivative is exact, so
/// d_y of vertical_integral(g) reproduces g.
ScalarField drop_top_mode(const ScalarField& f);

/// F(x, y) = int_0^y f(x, s) ds; F(x, 0) = 0 exactly.
ScalarField vertical_integral(const ScalarField& f);

/// || <y>^p f ||_{L^2([0,2pi) x [0,Ymax])} with trapezoid in x and Clenshaw-Curtis in y.
double weighted_l2(const ScalarField& f, double weight_power);

/// Product with 3/2-rule zero padding in x.
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);

/// Field values on the padded tangential grid (Nx_padded x Ny), row-major in x.
struct PaddedField {
    GridPtr grid;
    std::vector<double> values;
};

PaddedField to_padded(const ScalarField& f);
/// Spectral truncation of a padded field back to the base grid.
ScalarField from_padded(const PaddedField& p);

/// Complex tangential spectrum: coefficient of e^{i kappa x}, kappa = 0..Nx/2,
/// stored as spec[kappa * Ny + j]. Normalized so f(x) = sum over the full
/// Hermitian spectrum.
std::vector<std::complex<double>> x_spectrum(const ScalarField& f);
ScalarField from_x_spectrum(const GridPtr& grid, const std::vector<std::complex<double>>& spec);

// ---------------------------------------------------------------------------
// Field dump format: 64-byte little-endian header followed by Nx*Ny float64
// values, row-major (x index outer).
//
//   offset  size  content
//        0     8  magic "HPRFLD01"
//        8     8  int64 Nx
//       16     8  int64 Ny
//       24     8  float64 Ymax
//       32     8  float64 ell
//       40     8  float64 time stamp
//       48    16  reserved, zero
// ---------------------------------------------------------------------------

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FieldHeader {
    std::int64_t Nx = 0;
    std::int64_t Ny = 0;
    double Ymax = 0.0;
    double ell = 0.0;
    double time = 0.0;

    std::string describe() const;
};

inline constexpr std::size_t kFieldHeaderBytes = 64;
inline constexpr char kFieldMagic[8] = {'H', 'P', 'R', 'F', 'L', 'D', '0', '1'};

void write_field(const std::string& path, const ScalarField& f, double time);
FieldHeader read_field_header(const std::string& path);
/// Loads a field onto `grid`; throws FormatError when the header does not match the grid.
ScalarField read_field(const std::string& path, const GridPtr& grid, double* time = nullptr);
/// Loads a field and builds a grid from its header.
ScalarField read_field_standalone(const std::string& path, double* time = nullptr);

}  // namespace hyprandtl
