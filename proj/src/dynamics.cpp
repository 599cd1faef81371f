#include "hyprandtl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hyprandtl {

namespace {

// Accumulates sum_i c_i a_i b_i on the padded grid and truncates once.
class PaddedSum {
public:
    explicit PaddedSum(const GridPtr& g) : grid_(g), acc_(static_cast<std::size_t>(g->Nx_padded()) * static_cast<std::size_t>(g->Ny()), 0.0) {}

    void add(double c, const PaddedField& a, const PaddedField& b) {
        for (std::size_t n = 0; n < acc_.size(); ++n) acc_[n] += c * a.values[n] * b.values[n];
    }

    ScalarField finish() const {
        auto out = from_padded(PaddedField{grid_, acc_});
        out.check_finite("nonlinear product");
        return out;
    }

private:
    GridPtr grid_;
    std::vector<double> acc_;
};

void zero_row(ScalarField& f, int j) {
    for (int i = 0; i < f.grid()->Nx(); ++i) f(i, j) = 0.0;
}

double max_row(const ScalarField& f, int j) {
    double m = 0.0;
    for (int i = 0; i < f.grid()->Nx(); ++i) m = std::max(m, std::abs(f(i, j)));
    return m;
}

struct Tendency {
    ScalarField du, dphi, df, dlam;
};

// All four tendencies with shared padded factors.
Tendency rhs_all(const StateSnapshot& s) {
    const auto& g = s.grid();
    const auto ux = dx_power(s.u, 1);
    const auto uy = apply_dy(s.u);
    const auto uyy = apply_dy(uy);
    const auto fx = dx_power(s.f, 1);
    const auto fy = apply_dy(s.f);
    const auto lx = dx_power(s.lambda, 1);
    const auto ly = apply_dy(s.lambda);
    const auto phix = dx_power(s.phi, 1);
    const auto phiy = apply_dy(s.phi);
    const auto vx = dx_power(s.v, 1);

    const auto pu = to_padded(s.u);
    const auto pv = to_padded(s.v);
    const auto pux = to_padded(ux);

    Tendency t;
    {
        PaddedSum adv(g);
        adv.add(1.0, pu, pux);
        adv.add(1.0, pv, to_padded(uy));
        t.du = s.phi - adv.finish();
    }
    t.dphi = (1.0 / s.eta) * (uyy - s.phi);
    {
        PaddedSum adv(g);
        adv.add(1.0, pu, to_padded(fx));
        adv.add(1.0, pv, to_padded(fy));
        t.df = -1.0 * (adv.finish() + vx);
    }
    {
        PaddedSum nl(g);
        nl.add(1.0, pu, to_padded(lx));
        nl.add(1.0, pv, to_padded(ly));
        nl.add(1.0, pux, pux);
        nl.add(1.0, to_padded(phiy), to_padded(s.f));
        t.dlam = phix - nl.finish();
    }
    return t;
}

StateSnapshot combine(const StateSnapshot& base, double dt, const Tendency& k) {
    StateSnapshot out = base;
    out.u.axpy(dt, k.du);
    out.phi.axpy(dt, k.dphi);
    out.f.axpy(dt, k.df);
    out.lambda.axpy(dt, k.dlam);
    return out;
}

void finalize_stage(StateSnapshot& s) {
    impose_boundary(s);
    refresh_derived(s);
}

void add_forcing(const Forcing& forcing, double t, Tendency& k) {
    if (forcing) forcing(t, k.du, k.dphi);
}

void check_state(const StateSnapshot& s) {
    for (const ScalarField* f : {&s.u, &s.phi, &s.f, &s.lambda, &s.v, &s.Uaux}) {
        if (!f->all_finite()) {
            std::ostringstream os;
            os << "non-finite state at t=" << s.t;
            throw BlowupError(os.str(), s.t);
        }
    }
}

}  // namespace

ScalarField compute_v(const ScalarField& u) { return -1.0 * vertical_integral(dx_power(u, 1)); }

void refresh_derived(StateSnapshot& s) {
    s.v = compute_v(s.u);
    s.Uaux = apply_dy(s.f);
}

void impose_boundary(StateSnapshot& s) {
    const int top = s.grid()->Ny() - 1;
    zero_row(s.u, 0);
    zero_row(s.phi, 0);
    zero_row(s.f, 0);
    zero_row(s.u, top);
}

MainTendency rhs_main(const StateSnapshot& s) {
    const auto& g = s.grid();
    const auto uy = apply_dy(s.u);
    PaddedSum adv(g);
    adv.add(1.0, to_padded(s.u), to_padded(dx_power(s.u, 1)));
    adv.add(1.0, to_padded(s.v), to_padded(uy));
    MainTendency t{s.phi - adv.finish(), (1.0 / s.eta) * (apply_dy(uy) - s.phi)};
    return t;
}

ScalarField rhs_aux_f(const StateSnapshot& s, const ScalarField& f) {
    PaddedSum adv(s.grid());
    adv.add(1.0, to_padded(s.u), to_padded(dx_power(f, 1)));
    adv.add(1.0, to_padded(s.v), to_padded(apply_dy(f)));
    return -1.0 * (adv.finish() + dx_power(s.v, 1));
}

ScalarField lambda_algebraic(const StateSnapshot& s) {
    return dx_power(s.u, 1) - dealiased_product(apply_dy(s.u), s.f);
}

ScalarField rhs_lambda(const StateSnapshot& s) { return rhs_all(s).dlam; }

ScalarField ymau_rhs(const StateSnapshot& s) {
    const auto& g = s.grid();
    const auto lam = lambda_algebraic(s);
    const auto ux = dx_power(s.u, 1);
    PaddedSum sum(g);
    sum.add(-1.0, to_padded(s.u), to_padded(dx_power(s.Uaux, 1)));
    sum.add(-1.0, to_padded(s.v), to_padded(apply_dy(s.Uaux)));
    sum.add(1.0, to_padded(apply_dy(ux)), to_padded(s.f));
    sum.add(1.0, to_padded(ux), to_padded(s.Uaux));
    return dx_power(lam, 1) + sum.finish();
}

StateSnapshot make_initial_state(const ScalarField& u0, const ScalarField& u1, double eta) {
    if (!(eta >= kMinEta) || !(eta <= 1.0)) {
        std::ostringstream os;
        os << "eta must lie in [" << kMinEta << ", 1], got " << eta;
        throw DomainError(os.str());
    }
    const double r0 = u0.wall_trace();
    const double r1 = u1.wall_trace();
    if (r0 != 0.0 || r1 != 0.0) {
        std::ostringstream os;
        os.precision(17);
        os << "initial data incompatible with the wall condition: max|u0(x,0)|=" << r0 << " max|u1(x,0)|=" << r1;
        throw DomainError(os.str());
    }
    u0.check_finite("u0");
    u1.check_finite("u1");

    StateSnapshot s;
    s.t = 0.0;
    s.eta = eta;
    s.u = u0;
    const auto ux = dx_power(u0, 1);
    PaddedSum nl(u0.grid());
    nl.add(1.0, to_padded(u0), to_padded(ux));
    nl.add(-1.0, to_padded(apply_dy(u0)), to_padded(vertical_integral(ux)));
    s.phi = u1 + nl.finish();
    s.f = ScalarField(u0.grid());
    s.lambda = ux;
    impose_boundary(s);
    refresh_derived(s);
    return s;
}

double BoundaryResidual::enforced_max() const { return std::max({u_wall, phi_wall, f_wall, v_wall, u_top}); }

BoundaryResidual boundary_residual(const StateSnapshot& s) {
    const int top = s.grid()->Ny() - 1;
    BoundaryResidual r;
    r.u_wall = max_row(s.u, 0);
    r.phi_wall = max_row(s.phi, 0);
    r.f_wall = max_row(s.f, 0);
    r.v_wall = max_row(s.v, 0);
    r.u_top = max_row(s.u, top);
    r.phi_top = max_row(s.phi, top);
    return r;
}

double divergence_residual(const StateSnapshot& s) {
    const auto ux = dx_power(s.u, 1);
    const double scale = ux.max_abs();
    if (scale == 0.0) return 0.0;
    return (ux + dy_power(s.v, 1).field).max_abs() / scale;
}

double cfl_limit(const StateSnapshot& s, double cfl_safety) {
    const auto& g = *s.grid();
    const double umax = s.u.max_abs();
    const double vmax = s.v.max_abs();
    double lim = std::sqrt(s.eta) * g.dy_min();
    if (umax > 0.0) lim = std::min(lim, g.dx() / umax);
    if (vmax > 0.0) lim = std::min(lim, g.dy_min() / vmax);
    return cfl_safety * lim;
}

StateSnapshot rk4_step(const StateSnapshot& s, double dt, const Forcing& forcing) {
    Tendency k1 = rhs_all(s);
    add_forcing(forcing, s.t, k1);
    StateSnapshot s2 = combine(s, 0.5 * dt, k1);
    s2.t = s.t + 0.5 * dt;
    finalize_stage(s2);

    Tendency k2 = rhs_all(s2);
    add_forcing(forcing, s2.t, k2);
    StateSnapshot s3 = combine(s, 0.5 * dt, k2);
    s3.t = s2.t;
    finalize_stage(s3);

    Tendency k3 = rhs_all(s3);
    add_forcing(forcing, s3.t, k3);
    StateSnapshot s4 = combine(s, dt, k3);
    s4.t = s.t + dt;
    finalize_stage(s4);

    Tendency k4 = rhs_all(s4);
    add_forcing(forcing, s4.t, k4);

    StateSnapshot out = s;
    const double w1 = dt / 6.0, w2 = dt / 3.0;
    for (auto [dst, a, b, c, d] : {std::tuple{&out.u, &k1.du, &k2.du, &k3.du, &k4.du},
                                   std::tuple{&out.phi, &k1.dphi, &k2.dphi, &k3.dphi, &k4.dphi},
                                   std::tuple{&out.f, &k1.df, &k2.df, &k3.df, &k4.df},
                                   std::tuple{&out.lambda, &k1.dlam, &k2.dlam, &k3.dlam, &k4.dlam}}) {
        dst->axpy(w1, *a).axpy(w2, *b).axpy(w2, *c).axpy(w1, *d);
    }
    out.t = s.t + dt;
    finalize_stage(out);
    return out;
}

void project_top_mode(StateSnapshot& s) {
    s.u = drop_top_mode(s.u);
    s.phi = drop_top_mode(s.phi);
    s.f = drop_top_mode(s.f);
    s.lambda = drop_top_mode(s.lambda);
    finalize_stage(s);
}

StateSnapshot step(const StateSnapshot& s, const TimeStepper& stepper, const Forcing& forcing, StepInfo* info) {
    if (!(s.eta >= kMinEta)) throw DomainError("eta below the explicit-scheme floor");
    const bool lands = stepper.dt >= stepper.t_end - s.t;
    const double dt = lands ? stepper.t_end - s.t : stepper.dt;
    if (!(dt > 0.0)) throw DomainError("step requested past t_end");
    const double t_final = lands ? stepper.t_end : s.t + dt;
    const double limit = cfl_limit(s, stepper.cfl_safety);
    int r = 0;
    while (dt / std::ldexp(1.0, r) > limit) {
        if (++r > stepper.max_halvings) {
            std::ostringstream os;
            os << "CFL retries exhausted at t=" << s.t << " (dt=" << dt << ", limit=" << limit << ")";
            throw BlowupError(os.str(), s.t);
        }
    }
    const int n = 1 << r;
    const double h = dt / n;
    StateSnapshot cur = s;
    for (int i = 0; i < n; ++i) {
        const double t_target = (i + 1 == n) ? t_final : cur.t + h;
        try {
            cur = rk4_step(cur, t_target - cur.t, forcing);
        } catch (const BlowupError&) {
            throw;
        } catch (const NumericalError& e) {
            throw BlowupError(std::string(e.what()) + " near t=" + std::to_string(cur.t), cur.t);
        }
        cur.t = t_target;
        if (stepper.project_top) project_top_mode(cur);
        check_state(cur);
    }
    if (info) {
        info->halvings = r;
        info->dt_used = h;
    }
    return cur;
}

}  // namespace hyprandtl
