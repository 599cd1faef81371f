#include "hyprandtl/initial_data.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace hyprandtl {

std::string to_string(DataFamily f) {
    switch (f) {
        case DataFamily::single_mode: return "single_mode";
        case DataFamily::mode_sum: return "mode_sum";
        case DataFamily::custom_file: return "custom_file";
    }
    return "?";
}

std::string to_string(YProfile p) {
    switch (p) {
        case YProfile::y_exp: return "y_exp";
        case YProfile::y2_exp: return "y2_exp";
        case YProfile::y_gauss: return "y_gauss";
        case YProfile::custom: return "custom";
    }
    return "?";
}

DataFamily parse_family(const std::string& s) {
    if (s == "single_mode") return DataFamily::single_mode;
    if (s == "mode_sum") return DataFamily::mode_sum;
    if (s == "custom_file") return DataFamily::custom_file;
    throw DomainError("unknown data family '" + s + "' (single_mode, mode_sum, custom_file)");
}

YProfile parse_profile(const std::string& s) {
    if (s == "y_exp") return YProfile::y_exp;
    if (s == "y2_exp") return YProfile::y2_exp;
    if (s == "y_gauss") return YProfile::y_gauss;
    if (s == "custom") return YProfile::custom;
    throw DomainError("unknown y profile '" + s + "' (y_exp, y2_exp, y_gauss, custom)");
}

double profile_value(YProfile p, double y) {
    switch (p) {
        case YProfile::y_exp: return y * std::exp(-y);
        case YProfile::y2_exp: return y * y * std::exp(-y);
        case YProfile::y_gauss: return y * std::exp(-0.5 * y * y);
        case YProfile::custom: break;
    }
    throw DomainError("custom profile has no built-in value");
}

ScalarField generate(const DataSpec& spec, const GridPtr& grid) {
    if (spec.family == DataFamily::custom_file) {
        auto f = load(spec.path, grid);
        const double trace = f.wall_trace();
        if (trace != 0.0) {
            std::ostringstream os;
            os.precision(17);
            os << "field '" << spec.path << "' does not vanish at the wall: max|f(x,0)| = " << trace;
            throw DomainError(os.str());
        }
        f *= spec.amplitude;
        return f;
    }

    std::function<double(double)> P;
    if (spec.y_profile == YProfile::custom) {
        if (!spec.custom_profile) throw DomainError("custom y profile requested without a profile function");
        const double w = spec.custom_profile(0.0);
        if (w != 0.0) {
            std::ostringstream os;
            os.precision(17);
            os << "custom profile does not vanish at the wall: P(0) = " << w;
            throw DomainError(os.str());
        }
        P = spec.custom_profile;
    } else {
        const YProfile which = spec.y_profile;
        P = [which](double y) { return profile_value(which, y); };
    }

    const int nx = grid->Nx();
    const int ny = grid->Ny();
    if (spec.x_modes.empty()) throw DomainError("no tangential modes given");
    const std::size_t used = spec.family == DataFamily::single_mode ? 1 : spec.x_modes.size();
    for (std::size_t n = 0; n < used; ++n) {
        const int kappa = spec.x_modes[n].wavenumber;
        if (kappa < 1 || kappa > nx / 2 - 1) {
            std::ostringstream os;
            os << "wavenumber " << kappa << " outside [1, " << nx / 2 - 1 << "] for Nx = " << nx;
            throw DomainError(os.str());
        }
    }

    // sin(k x + p) = Im e^{i(kx+p)}: coefficient of e^{ikx} is e^{ip} / (2i).
    const int half = nx / 2;
    std::vector<std::complex<double>> spec_x(static_cast<std::size_t>(half + 1) * static_cast<std::size_t>(ny));
    std::vector<double> prof(static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) prof[static_cast<std::size_t>(j)] = P(grid->ys()[static_cast<std::size_t>(j)]);
    for (std::size_t n = 0; n < used; ++n) {
        const auto& mode = spec.x_modes[n];
        const std::complex<double> c = spec.amplitude * std::polar(1.0, mode.phase) / std::complex<double>(0.0, 2.0);
        for (int j = 0; j < ny; ++j)
            spec_x[static_cast<std::size_t>(mode.wavenumber) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)] +=
                c * prof[static_cast<std::size_t>(j)];
    }
    auto f = from_x_spectrum(grid, spec_x);
    f.check_finite("initial data");
    return f;
}

double far_field_residual(const ScalarField& f) {
    const double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    const int top = f.grid()->Ny() - 1;
    double m = 0.0;
    for (int i = 0; i < f.grid()->Nx(); ++i) m = std::max(m, std::abs(f(i, top)));
    return m / scale;
}

void store(const std::string& path, const ScalarField& f) { write_field(path, f, 0.0); }

ScalarField load(const std::string& path, const GridPtr& grid) { return read_field(path, grid); }

}  // namespace hyprandtl
