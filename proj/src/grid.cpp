#include "hyprandtl/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "hyprandtl/kernels.hpp"

namespace hyprandtl {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// cos(pi * p / q) with the integer argument reduced first.
double cos_pi_ratio(long long p, long long q) {
    p %= 2 * q;
    return std::cos(kPi * static_cast<double>(p) / static_cast<double>(q));
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// d/dx on Chebyshev coefficients a[0..len), result in b[0..len).
void cheb_derivative(const double* a, double* b, int len) {
    if (len <= 1) {
        if (len == 1) b[0] = 0.0;
        return;
    }
    std::vector<double> tmp(static_cast<std::size_t>(len) + 1, 0.0);
    for (int n = len - 1; n >= 1; --n) tmp[static_cast<std::size_t>(n - 1)] = tmp[static_cast<std::size_t>(n + 1)] + 2.0 * n * a[n];
    tmp[0] *= 0.5;
    std::copy(tmp.begin(), tmp.begin() + len, b);
}

}  // namespace

FieldGrid::FieldGrid(int Nx, int Ny, double Ymax, double ell) : Nx_(Nx), Ny_(Ny), Ymax_(Ymax), ell_(ell) {
    if (!is_power_of_two(Nx) || Nx < 4) throw DomainError("Nx must be a power of two >= 4, got " + std::to_string(Nx));
    if (Ny < 4) throw DomainError("Ny must be >= 4, got " + std::to_string(Ny));
    if (!(Ymax > 0.0) || !std::isfinite(Ymax)) throw DomainError("Ymax must be positive");
    if (!(ell >= 2.0)) throw DomainError("ell must be >= 2");

    const int N = Ny - 1;
    xs_.resize(static_cast<std::size_t>(Nx));
    for (int i = 0; i < Nx; ++i) xs_[static_cast<std::size_t>(i)] = 2.0 * kPi * i / Nx;

    // Chebyshev points s_j = cos(pi j / N) run from 1 to -1; y = Ymax (1 - s) / 2 increases.
    std::vector<double> s(static_cast<std::size_t>(Ny));
    ys_.resize(static_cast<std::size_t>(Ny));
    for (int j = 0; j < Ny; ++j) {
        // sin form is symmetric and exact at both ends
        s[static_cast<std::size_t>(j)] = std::sin(kPi * (N - 2.0 * j) / (2.0 * N));
        ys_[static_cast<std::size_t>(j)] = Ymax * (1.0 - s[static_cast<std::size_t>(j)]) / 2.0;
    }
    ys_.front() = 0.0;
    ys_.back() = Ymax;

    // Values -> coefficients: a_n = 2/(N c_n) sum_j f_j cos(pi n j / N) / c_j.
    cheb_fwd_ = Matrix(Ny, Ny);
    cheb_inv_ = Matrix(Ny, Ny);
    for (int n = 0; n < Ny; ++n) {
        const double cn = (n == 0 || n == N) ? 2.0 : 1.0;
        for (int j = 0; j < Ny; ++j) {
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            const double c = cos_pi_ratio(static_cast<long long>(n) * j, N);
            cheb_fwd_(n, j) = 2.0 * c / (N * cn * cj);
            cheb_inv_(j, n) = c;
        }
    }

    // Drop a_N, then restore both endpoint values with a T0/T1 correction:
    // T_N(+-1) = (+-1)^N, so the correction is a_N (c0 + c1 s) with c0, c1 fixed below.
    {
        const double top_lo = 1.0;                       // T_N at s = 1 (y = 0)
        const double top_hi = (N % 2 == 0) ? 1.0 : -1.0;  // T_N at s = -1 (y = Ymax)
        const double c0 = 0.5 * (top_lo + top_hi);
        const double c1 = 0.5 * (top_lo - top_hi);
        top_proj_ = Matrix(Ny, Ny);
        for (int i = 0; i < Ny; ++i) {
            const double tn = cheb_inv_(i, N);
            const double corr = c0 + c1 * cheb_inv_(i, 1);
            for (int j = 0; j < Ny; ++j) top_proj_(i, j) = (i == j ? 1.0 : 0.0) + (corr - tn) * cheb_fwd_(N, j);
        }
    }

    // Collocation derivative in s, then d/dy = -(2/Ymax) d/ds.
    Dy_ = Matrix(Ny, Ny);
    const double scale = -2.0 / Ymax;
    for (int i = 0; i < Ny; ++i) {
        const double ci = (i == 0 || i == N) ? 2.0 : 1.0;
        double row_sum = 0.0;
        for (int j = 0; j < Ny; ++j) {
            if (i == j) continue;
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            const double d = ci / cj * sign / (s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(j)]);
            Dy_(i, j) = scale * d;
            row_sum += d;
        }
        Dy_(i, i) = -scale * row_sum;
    }

    // Antiderivative through coefficient space, anchored at y = 0 (s = 1).
    Matrix anti(Ny, Ny);  // coefficients of F with F(s=1) = 0, from coefficients of f
    for (int col = 0; col < Ny; ++col) {
        std::vector<double> a(static_cast<std::size_t>(Ny) + 2, 0.0);
        a[static_cast<std::size_t>(col)] = 1.0;
        std::vector<double> b(static_cast<std::size_t>(Ny), 0.0);
        b[1] = a[0] - a[2] / 2.0;
        for (int n = 2; n < Ny; ++n) b[static_cast<std::size_t>(n)] = (a[static_cast<std::size_t>(n - 1)] - a[static_cast<std::size_t>(n + 1)]) / (2.0 * n);
        double tail = 0.0;
        for (int n = 1; n < Ny; ++n) tail += b[static_cast<std::size_t>(n)];
        b[0] = -tail;
        for (int n = 0; n < Ny; ++n) anti(n, col) = b[static_cast<std::size_t>(n)];
    }
    // Iy = -(Ymax/2) * inv * anti * fwd
    Matrix tmp(Ny, Ny);
    for (int n = 0; n < Ny; ++n)
        for (int j = 0; j < Ny; ++j) {
            double acc = 0.0;
            for (int p = 0; p < Ny; ++p) acc += anti(n, p) * cheb_fwd_(p, j);
            tmp(n, j) = acc;
        }
    Iy_ = Matrix(Ny, Ny);
    for (int i = 0; i < Ny; ++i)
        for (int j = 0; j < Ny; ++j) {
            double acc = 0.0;
            for (int n = 0; n < Ny; ++n) acc += cheb_inv_(i, n) * tmp(n, j);
            Iy_(i, j) = -0.5 * Ymax * acc;
        }
    for (int j = 0; j < Ny; ++j) Iy_(0, j) = 0.0;

    // Clenshaw-Curtis: integrate the interpolant, int_{-1}^{1} T_n = 2/(1-n^2) for even n.
    quad_.assign(static_cast<std::size_t>(Ny), 0.0);
    for (int j = 0; j < Ny; ++j) {
        double acc = 0.0;
        for (int n = 0; n < Ny; n += 2) acc += cheb_fwd_(n, j) * 2.0 / (1.0 - static_cast<double>(n) * n);
        quad_[static_cast<std::size_t>(j)] = 0.5 * Ymax * acc;
    }

    plans_ = std::make_shared<const FourierPlans>(Nx, Nx_padded());
}

double FieldGrid::dx() const { return 2.0 * kPi / Nx_; }

bool FieldGrid::same_shape(const FieldGrid& o) const {
    return Nx_ == o.Nx_ && Ny_ == o.Ny_ && Ymax_ == o.Ymax_ && ell_ == o.ell_;
}

GridPtr make_grid(int Nx, int Ny, double Ymax, double ell) {
    return std::make_shared<const FieldGrid>(Nx, Ny, Ymax, ell);
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("ScalarField needs a grid");
    values_.assign(grid_->size(), 0.0);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("ScalarField needs a grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("ScalarField: expected " + std::to_string(grid_->size()) + " values, got " +
                                    std::to_string(values_.size()));
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::check_finite(const char* what) const {
    if (!all_finite()) throw NumericalError(std::string("non-finite values in ") + what);
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::wall_trace() const {
    double m = 0.0;
    for (int i = 0; i < grid_->Nx(); ++i) m = std::max(m, std::abs((*this)(i, 0)));
    return m;
}

void ScalarField::check_compatible(const ScalarField& o) const {
    if (!grid_ || !o.grid_ || !(grid_ == o.grid_ || grid_->same_shape(*o.grid_)))
        throw std::invalid_argument("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    check_compatible(o);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    check_compatible(o);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
    return *this;
}

ScalarField& ScalarField::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

ScalarField& ScalarField::axpy(double c, const ScalarField& o) {
    check_compatible(o);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += c * o.values_[n];
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField pointwise(const ScalarField& a, const ScalarField& b) {
    ScalarField out = a;
    auto& v = out.raw();
    const auto& w = b.raw();
    if (v.size() != w.size()) throw std::invalid_argument("pointwise: size mismatch");
    for (std::size_t n = 0; n < v.size(); ++n) v[n] *= w[n];
    return out;
}

// ---------------------------------------------------------------------------
// Tangential transforms

std::vector<cplx> x_spectrum(const ScalarField& f) {
    const auto& g = *f.grid();
    std::vector<cplx> spec(static_cast<std::size_t>(g.Nx() / 2 + 1) * static_cast<std::size_t>(g.Ny()));
    kernels::parallel::forward_x(g.plans(), f.values(), spec, g.Nx(), g.Ny());
    return spec;
}

ScalarField from_x_spectrum(const GridPtr& grid, const std::vector<cplx>& spec) {
    ScalarField out(grid);
    kernels::parallel::inverse_x(grid->plans(), spec, out.values(), grid->Nx(), grid->Ny());
    return out;
}

ScalarField dx_power(const ScalarField& f, int m) {
    if (m < 0 || m > kDxPowerCap) throw DomainError("dx_power order out of range: " + std::to_string(m));
    if (m == 0) return f;
    const auto& g = *f.grid();
    const int ny = g.Ny();
    const int half = g.Nx() / 2;
    auto spec = x_spectrum(f);
    for (int kappa = 0; kappa <= half; ++kappa) {
        cplx factor{0.0, 0.0};
        if (kappa != half) {
            // (i kappa)^m = kappa^m i^m
            const double mag = std::pow(static_cast<double>(kappa), m);
            static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            factor = mag * ipow[m % 4];
        }
        for (int j = 0; j < ny; ++j) spec[static_cast<std::size_t>(kappa) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] *= factor;
    }
    auto out = from_x_spectrum(f.grid(), spec);
    out.check_finite("dx_power");
    return out;
}

PaddedField to_padded(const ScalarField& f) {
    const auto& g = *f.grid();
    const int ny = g.Ny();
    const int np = g.Nx_padded();
    const int half = g.Nx() / 2;
    auto spec = x_spectrum(f);
    std::vector<cplx> padded(static_cast<std::size_t>(np / 2 + 1) * static_cast<std::size_t>(ny), cplx{0.0, 0.0});
    // the base Nyquist mode has no partner on the padded grid and is dropped
    std::copy(spec.begin(), spec.begin() + static_cast<std::ptrdiff_t>(half) * ny, padded.begin());
    PaddedField p{f.grid(), std::vector<double>(static_cast<std::size_t>(np) * static_cast<std::size_t>(ny))};
    kernels::parallel::inverse_x(g.plans(), padded, p.values, np, ny);
    return p;
}

ScalarField from_padded(const PaddedField& p) {
    const auto& g = *p.grid;
    const int ny = g.Ny();
    const int np = g.Nx_padded();
    const int half = g.Nx() / 2;
    std::vector<cplx> padded(static_cast<std::size_t>(np / 2 + 1) * static_cast<std::size_t>(ny));
    kernels::parallel::forward_x(g.plans(), p.values, padded, np, ny);
    std::vector<cplx> spec(static_cast<std::size_t>(half + 1) * static_cast<std::size_t>(ny), cplx{0.0, 0.0});
    std::copy(padded.begin(), padded.begin() + static_cast<std::ptrdiff_t>(half) * ny, spec.begin());
    return from_x_spectrum(p.grid, spec);
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
    auto pa = to_padded(a);
    const auto pb = to_padded(b);
    for (std::size_t n = 0; n < pa.values.size(); ++n) pa.values[n] *= pb.values[n];
    auto out = from_padded(pa);
    out.check_finite("dealiased_product");
    return out;
}

// ---------------------------------------------------------------------------
// Vertical operators

ScalarField apply_dy(const ScalarField& f) {
    ScalarField out(f.grid());
    kernels::parallel::apply_columns(f.grid()->Dy(), f.values(), out.values(), f.grid()->Nx());
    return out;
}

ScalarField drop_top_mode(const ScalarField& f) {
    ScalarField out(f.grid());
    kernels::parallel::apply_columns(f.grid()->top_projection(), f.values(), out.values(), f.grid()->Nx());
    return out;
}

ScalarField vertical_integral(const ScalarField& f) {
    ScalarField out(f.grid());
    kernels::parallel::apply_columns(f.grid()->Iy(), f.values(), out.values(), f.grid()->Nx());
    for (int i = 0; i < f.grid()->Nx(); ++i) out(i, 0) = 0.0;
    out.check_finite("vertical_integral");
    return out;
}

std::vector<DyResult> dy_powers(const ScalarField& f, int kmax, double chop_tol) {
    if (kmax < 0) throw DomainError("dy_power order must be nonnegative");
    const auto& g = *f.grid();
    const int nx = g.Nx();
    const int ny = g.Ny();
    const std::size_t nyz = static_cast<std::size_t>(ny);
    const double dscale = -2.0 / g.Ymax();

    std::vector<double> coeffs(g.size());
    kernels::parallel::apply_columns(g.cheb_forward(), f.values(), coeffs, nx);
    double gmax = 0.0;
    for (double c : coeffs) gmax = std::max(gmax, std::abs(c));
    const double cut = chop_tol * gmax;
    const double eps = std::numeric_limits<double>::epsilon() * gmax;

    // Per-column, per-order energies: total, top quarter band, perturbation.
    const std::size_t slots = static_cast<std::size_t>(kmax + 1);
    std::vector<double> e_tot(static_cast<std::size_t>(nx) * slots, 0.0);
    std::vector<double> e_band(e_tot.size(), 0.0);
    std::vector<double> e_pert(e_tot.size(), 0.0);
    // derivative coefficients for every order, [k][i][n]
    std::vector<double> dcoef(slots * g.size(), 0.0);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
        const double* a = coeffs.data() + static_cast<std::size_t>(i) * nyz;
        int len = ny;
        while (len > 0 && std::abs(a[len - 1]) <= cut) --len;
        std::vector<double> cur(a, a + len);
        std::vector<double> pert(static_cast<std::size_t>(len));
        for (int n = 0; n < len; ++n) pert[static_cast<std::size_t>(n)] = (n % 2 == 0 ? eps : -eps);
        std::vector<double> next(static_cast<std::size_t>(len));
        const int band_start = len - len / 4;
        for (int k = 0; k <= kmax; ++k) {
            if (k > 0) {
                cheb_derivative(cur.data(), next.data(), len);
                for (int n = 0; n < len; ++n) cur[static_cast<std::size_t>(n)] = dscale * next[static_cast<std::size_t>(n)];
                cheb_derivative(pert.data(), next.data(), len);
                for (int n = 0; n < len; ++n) pert[static_cast<std::size_t>(n)] = dscale * next[static_cast<std::size_t>(n)];
            }
            double tot = 0.0, band = 0.0, pe = 0.0;
            for (int n = 0; n < len; ++n) {
                const double c2 = cur[static_cast<std::size_t>(n)] * cur[static_cast<std::size_t>(n)];
                tot += c2;
                if (n >= band_start) band += c2;
                pe += pert[static_cast<std::size_t>(n)] * pert[static_cast<std::size_t>(n)];
            }
            const std::size_t slot = static_cast<std::size_t>(i) * slots + static_cast<std::size_t>(k);
            e_tot[slot] = tot;
            e_band[slot] = band;
            e_pert[slot] = pe;
            std::copy(cur.begin(), cur.end(), dcoef.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(k) * g.size()) + static_cast<std::size_t>(i) * nyz));
        }
    }

    std::vector<DyResult> out;
    out.reserve(slots);
    double cumulative = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        double tot = 0.0, band = 0.0, pe = 0.0;
        for (int i = 0; i < nx; ++i) {
            const std::size_t slot = static_cast<std::size_t>(i) * slots + static_cast<std::size_t>(k);
            tot += e_tot[slot];
            band += e_band[slot];
            pe += e_pert[slot];
        }
        double indicator = 0.0;
        if (tot > 0.0) indicator = std::max(band / tot, pe / tot);
        else if (pe > 0.0) indicator = std::numeric_limits<double>::infinity();
        cumulative = std::max(cumulative, indicator);

        ScalarField field(f.grid());
        if (k == 0) {
            field = f;
        } else {
            std::span<const double> src(dcoef.data() + static_cast<std::size_t>(k) * g.size(), g.size());
            kernels::parallel::apply_columns(g.cheb_inverse(), src, field.values(), nx);
            field.check_finite("dy_power");
        }
        out.push_back(DyResult{std::move(field), cumulative});
    }
    return out;
}

DyResult dy_power(const ScalarField& f, int k, double chop_tol) {
    auto all = dy_powers(f, k, chop_tol);
    return std::move(all.back());
}

double weighted_l2(const ScalarField& f, double weight_power) {
    const auto& g = *f.grid();
    const auto& w = g.quad_weights();
    const auto& ys = g.ys();
    std::vector<double> yw(static_cast<std::size_t>(g.Ny()));
    for (int j = 0; j < g.Ny(); ++j) {
        const double y = ys[static_cast<std::size_t>(j)];
        yw[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * std::pow(1.0 + y * y, weight_power);
    }
    double acc = 0.0;
    for (int i = 0; i < g.Nx(); ++i) {
        double col = 0.0;
        for (int j = 0; j < g.Ny(); ++j) col += yw[static_cast<std::size_t>(j)] * f(i, j) * f(i, j);
        acc += col;
    }
    return std::sqrt(acc * g.dx());
}

// ---------------------------------------------------------------------------
// Field dumps

std::string FieldHeader::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "Nx=" << Nx << " Ny=" << Ny << " Ymax=" << Ymax << " ell=" << ell << " time=" << time;
    return os.str();
}

void write_field(const std::string& path, const ScalarField& f, double time) {
    const auto& g = *f.grid();
    unsigned char header[kFieldHeaderBytes] = {};
    std::memcpy(header, kFieldMagic, 8);
    const std::int64_t nx = g.Nx(), ny = g.Ny();
    const double ymax = g.Ymax(), ell = g.ell();
    std::memcpy(header + 8, &nx, 8);
    std::memcpy(header + 16, &ny, 8);
    std::memcpy(header + 24, &ymax, 8);
    std::memcpy(header + 32, &ell, 8);
    std::memcpy(header + 40, &time, 8);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(header), kFieldHeaderBytes);
    os.write(reinterpret_cast<const char*>(f.raw().data()), static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

FieldHeader parse_header(std::istream& is, const std::string& path) {
    unsigned char header[kFieldHeaderBytes];
    is.read(reinterpret_cast<char*>(header), kFieldHeaderBytes);
    if (is.gcount() != static_cast<std::streamsize>(kFieldHeaderBytes))
        throw FormatError(path + ": truncated header (" + std::to_string(is.gcount()) + " bytes)");
    if (std::memcmp(header, kFieldMagic, 8) != 0) throw FormatError(path + ": bad magic");
    FieldHeader h;
    std::memcpy(&h.Nx, header + 8, 8);
    std::memcpy(&h.Ny, header + 16, 8);
    std::memcpy(&h.Ymax, header + 24, 8);
    std::memcpy(&h.ell, header + 32, 8);
    std::memcpy(&h.time, header + 40, 8);
    if (h.Nx <= 0 || h.Ny <= 0 || h.Nx > (1 << 20) || h.Ny > (1 << 20))
        throw FormatError(path + ": implausible dimensions " + h.describe());
    return h;
}

std::vector<double> read_payload(std::istream& is, const FieldHeader& h, const std::string& path) {
    std::vector<double> values(static_cast<std::size_t>(h.Nx) * static_cast<std::size_t>(h.Ny));
    is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (is.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double)))
        throw FormatError(path + ": truncated payload");
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError(path + ": trailing bytes after payload");
    return values;
}

}  // namespace

FieldHeader read_field_header(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    return parse_header(is, path);
}

ScalarField read_field(const std::string& path, const GridPtr& grid, double* time) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    const FieldHeader h = parse_header(is, path);
    FieldHeader expected{grid->Nx(), grid->Ny(), grid->Ymax(), grid->ell(), h.time};
    if (h.Nx != expected.Nx || h.Ny != expected.Ny || h.Ymax != expected.Ymax || h.ell != expected.ell) {
        throw FormatError(path + ": header does not match the active grid\n  expected: " + expected.describe() +
                          "\n  actual:   " + h.describe());
    }
    auto values = read_payload(is, h, path);
    if (time) *time = h.time;
    return ScalarField(grid, std::move(values));
}

ScalarField read_field_standalone(const std::string& path, double* time) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    const FieldHeader h = parse_header(is, path);
    auto grid = make_grid(static_cast<int>(h.Nx), static_cast<int>(h.Ny), h.Ymax, h.ell);
    auto values = read_payload(is, h, path);
    if (time) *time = h.time;
    return ScalarField(grid, std::move(values));
}

}  // namespace hyprandtl
