#pragma once

/// @file dynamics.hpp
/// @brief First-order hyperbolic Prandtl system with its auxiliary functions.
///
///   d_t u   = phi - u d_x u - v d_y u
///   d_t phi = (d_y^2 u - phi) / eta
///   d_t f   = -u d_x f - v d_y f - d_x v,        f = int_0^y Uaux
///   d_t lam = -u d_x lam - v d_y lam + d_x phi - (d_x u)^2 - (d_y phi) f
///
/// with v = -int_0^y d_x u and u = phi = f = 0 at the wall, u = 0 at Ymax.
/// The evolved lambda is a consistency oracle for the algebraic
/// lambda = d_x u - (d_y u) f, which is what the norms consume.

#include <functional>

#include "hyprandtl/grid.hpp"

namespace hyprandtl {

/// Smallest relaxation parameter accepted by the explicit scheme.
inline constexpr double kMinEta = 0.05;

struct StateSnapshot {
    double t = 0.0;
    double eta = 1.0;
    ScalarField u;
    ScalarField phi;
    /// f = int_0^y Uaux, the evolved auxiliary.
    ScalarField f;
    /// Uaux = d_y f (derived).
    ScalarField Uaux;
    /// Evolved copy of lambda.
    ScalarField lambda;
    /// v = -int_0^y d_x u (derived).
    ScalarField v;

    const GridPtr& grid() const { return u.grid(); }
};

/// Raised when a step produces non-finite values or exhausts its CFL retries.
class BlowupError : public NumericalError {
public:
    BlowupError(const std::string& what, double t) : NumericalError(what), time(t) {}
    double time;
};

ScalarField compute_v(const ScalarField& u);

/// Recompute v and Uaux from u and f.
void refresh_derived(StateSnapshot& s);

/// u = phi = f = 0 at y = 0, u = 0 at y = Ymax.
void impose_boundary(StateSnapshot& s);

struct MainTendency {
    ScalarField du;
    ScalarField dphi;
};

MainTendency rhs_main(const StateSnapshot& s);
ScalarField rhs_aux_f(const StateSnapshot& s, const ScalarField& f);
ScalarField lambda_algebraic(const StateSnapshot& s);
ScalarField rhs_lambda(const StateSnapshot& s);

/// Right side of (d_t + u d_x + v d_y) Uaux = d_x lam + (d_x d_y u) f + (d_x u) Uaux
/// transported to the left: returns d_t Uaux as predicted from the current state,
/// using the algebraic lambda.
ScalarField ymau_rhs(const StateSnapshot& s);

/// phi0 = u1 + u0 d_x u0 - (d_y u0) int_0^y d_x u0; Uaux = 0; lambda = d_x u0.
/// Throws DomainError when u0 or u1 do not vanish at the wall or eta < kMinEta.
StateSnapshot make_initial_state(const ScalarField& u0, const ScalarField& u1, double eta);

struct BoundaryResidual {
    double u_wall = 0.0;
    double phi_wall = 0.0;
    double f_wall = 0.0;
    double v_wall = 0.0;
    double u_top = 0.0;
    /// phi is left free at Ymax; reported, not enforced.
    double phi_top = 0.0;

    double enforced_max() const;
};

BoundaryResidual boundary_residual(const StateSnapshot& s);

/// max |d_x u + d_y v| / max |d_x u| (0 for x-independent u).
double divergence_residual(const StateSnapshot& s);

/// Optional additive forcing of the u and phi equations, evaluated at stage times.
using Forcing = std::function<void(double t, ScalarField& du, ScalarField& dphi)>;

struct TimeStepper {
    double dt = 1e-3;
    double cfl_safety = 0.5;
    double t_end = 1.0;
    int max_halvings = 8;
    /// Drop the top Chebyshev mode of the evolved fields after every step.
    bool project_top = true;
};

/// cfl_safety * min(dx / max|u|, dy_min / max|v|, sqrt(eta) dy_min).
double cfl_limit(const StateSnapshot& s, double cfl_safety);

struct StepInfo {
    int halvings = 0;
    double dt_used = 0.0;
};

/// One classical RK4 step of size dt with boundary re-imposition after each stage.
StateSnapshot rk4_step(const StateSnapshot& s, double dt, const Forcing& forcing = {});

/// drop_top_mode on u, phi, f and lambda, then boundary re-imposition and refresh of v, Uaux.
void project_top_mode(StateSnapshot& s);

/// Advance by min(dt, t_end - t). When dt exceeds the CFL limit the interval is
/// covered with 2^r substeps, r <= max_halvings; otherwise BlowupError.
StateSnapshot step(const StateSnapshot& s, const TimeStepper& stepper, const Forcing& forcing = {},
                   StepInfo* info = nullptr);

}  // namespace hyprandtl
