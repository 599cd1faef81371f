#pragma once

/// @file initial_data.hpp
/// @brief Compatible initial data: band-limited in x, entire decaying profiles in y.

#include <functional>
#include <string>
#include <vector>

#include "hyprandtl/grid.hpp"

namespace hyprandtl {

enum class DataFamily { single_mode, mode_sum, custom_file };

enum class YProfile {
    y_exp,    // y e^{-y}
    y2_exp,   // y^2 e^{-y}
    y_gauss,  // y e^{-y^2/2}; odd, so every even derivative vanishes at the wall
    custom,
};

struct XMode {
    int wavenumber = 1;
    double phase = 0.0;
};

struct DataSpec {
    DataFamily family = DataFamily::single_mode;
    double amplitude = 0.0;
    /// single_mode uses the first entry only.
    std::vector<XMode> x_modes{XMode{}};
    YProfile y_profile = YProfile::y_exp;
    /// Profile for YProfile::custom; must vanish at y = 0.
    std::function<double(double)> custom_profile;
    /// Field file for DataFamily::custom_file.
    std::string path;
};

std::string to_string(DataFamily f);
std::string to_string(YProfile p);
DataFamily parse_family(const std::string& s);
YProfile parse_profile(const std::string& s);

/// Built-in profile value at y; throws DomainError for YProfile::custom.
double profile_value(YProfile p, double y);

/// amplitude * sum_modes sin(kappa x + phase) * P(y), synthesized from its exact
/// tangential spectrum so modes above the largest declared wavenumber are zero
/// before the inverse transform.
/// Throws DomainError for wavenumbers outside [1, Nx/2 - 1], a custom profile with
/// a nonzero wall value, or a loaded field with a nonzero wall trace.
ScalarField generate(const DataSpec& spec, const GridPtr& grid);

/// max_x |f(x, Ymax)| / max |f|: what boundary injection at Ymax removes (0 for f = 0).
double far_field_residual(const ScalarField& f);

void store(const std::string& path, const ScalarField& f);
/// Throws FormatError naming expected and actual headers when the file does not match `grid`.
ScalarField load(const std::string& path, const GridPtr& grid);

}  // namespace hyprandtl
