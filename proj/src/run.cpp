#include "hyprandtl/run.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hyprandtl/kernels.hpp"
#include "json.hpp"

namespace hyprandtl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t n = 0; n < cells.size(); ++n) out_ << (n ? "," : "") << cells[n];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string sample_name(const char* field, std::size_t n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06zu.bin", field, n);
    return buf;
}

double lambda_consistency(const StateSnapshot& s) {
    const auto alg = lambda_algebraic(s);
    const double scale = weighted_l2(alg, 0.0);
    const double diff = weighted_l2(s.lambda - alg, 0.0);
    if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / scale;
}

void log_line(std::ostream* log, const std::string& s) {
    if (log) *log << s << std::endl;
}

void write_ledger_csv(const fs::path& path, const BootstrapLedger& L, const InequalityFit* fit) {
    Csv csv(path, {"t", "rho", "X", "Y", "X2", "Y2", "int_Y2", "sup_X", "shadow", "dX2dt", "margin", "C_i"});
    const auto& s = L.series();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& p = s[i];
        csv.row({num(p.t), num(p.rho), num(std::sqrt(p.X2)), num(std::sqrt(p.Y2)), num(p.X2), num(p.Y2), num(p.int_Y2), num(p.sup_X),
                 num(p.shadow()), fit ? num(fit->dX2dt[i]) : "nan", fit ? num(fit->margin[i]) : "nan", fit ? num(fit->C_i[i]) : "nan"});
    }
}

json terms_json(const NormReport& r) {
    json j;
    j["t"] = r.t;
    j["rho"] = r.rho;
    j["Mmax"] = r.Mmax;
    j["Kmax"] = r.Kmax;
    j["X2"] = r.X2;
    j["Y2"] = r.Y2;
    j["U"] = r.terms_U;
    j["lambda"] = r.terms_lambda;
    j["phi"] = r.terms_phi;
    j["uy"] = r.terms_uy;
    j["tail_ratio_m"] = r.tail_ratio_m;
    j["tail_ratio_k"] = r.tail_ratio_k;
    j["unresolved"] = r.unresolved;
    json flags = json::array();
    for (const auto& f : r.noise_flags) flags.push_back({{"field", f.field}, {"k", f.k}});
    j["noise_flags"] = flags;
    j["converged"] = r.converged;
    return j;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

int exit_code_for(VerdictKind v) {
    switch (v) {
        case VerdictKind::holds:
        case VerdictKind::inconclusive: return exit_ok;
        case VerdictKind::violated: return exit_violated;
        case VerdictKind::blowup: return exit_blowup;
    }
    return exit_config;
}

InitialFields make_initial_fields(const RunConfig& cfg) {
    cfg.validate();
    InitialFields f;
    f.grid = make_grid(cfg.Nx, cfg.Ny, cfg.Ymax, cfg.ell);
    f.u0 = generate(cfg.u0, f.grid);
    f.u1 = generate(cfg.u1, f.grid);
    if (cfg.time.project_top) {
        // Start on the same subspace the stepper keeps the state in.
        for (ScalarField* g : {&f.u0, &f.u1}) {
            *g = drop_top_mode(*g);
            for (int i = 0; i < f.grid->Nx(); ++i) (*g)(i, 0) = 0.0;
        }
    }
    return f;
}

Trajectory integrate(const RunConfig& cfg, const StateSnapshot& s0, double mu, double T, double data_norm, const SampleHook& hook) {
    const RadiusSchedule sched{cfg.rho0, mu, T};
    sched.validate();
    Trajectory tr;
    tr.mu = mu;
    tr.T = T;
    tr.ledger = BootstrapLedger(data_norm);
    const double ell = s0.grid()->ell();

    StateSnapshot s = s0;
    int halvings = 0;
    auto sample = [&] {
        const double rho = radius_at(sched, s.t);
        const auto rep = norm_report(s, rho, cfg.norms);
        tr.ledger.record(rep, rep);
        tr.reports.push_back(rep);
        DiagnosticRow d;
        d.t = s.t;
        d.divergence = divergence_residual(s);
        const auto b = boundary_residual(s);
        d.boundary = b.enforced_max();
        d.phi_top = b.phi_top;
        d.lambda_rel = lambda_consistency(s);
        d.far_field_u = far_field_residual(s.u);
        d.halvings = halvings;
        tr.diagnostics.push_back(d);
        tr.cross_checks.push_back({s.t, tangential_u_check(s, rep, ell)});
        if (hook) hook(s, tr.reports.size() - 1);
        halvings = 0;
    };

    sample();
    TimeStepper st = cfg.time;
    st.t_end = T;
    long steps = 0;
    try {
        while (s.t < T) {
            StepInfo info;
            s = step(s, st, {}, &info);
            halvings = std::max(halvings, info.halvings);
            ++steps;
            if (steps % cfg.norms_every == 0 || s.t >= T) sample();
        }
    } catch (const BlowupError& e) {
        tr.blowup_time = e.time;
        tr.blowup_reason = e.what();
    }
    tr.final_state = s;
    return tr;
}

SimulationSummary simulate(const RunConfig& cfg, const fs::path& dir, const SimulationOptions& opts) {
    cfg.validate();
    if (fs::exists(dir) && !fs::is_empty(dir) && !opts.overwrite)
        throw ConfigError({"run directory '" + dir.string() + "' exists and is not empty"});
    if (cfg.workers > 0) set_worker_count(cfg.workers);

    const auto init_fields = make_initial_fields(cfg);
    fs::create_directories(dir / "fields");
    write_text(dir / "config.ini", to_ini(cfg));

    SimulationSummary sum;
    sum.dir = dir;
    for (auto [name, f] : {std::pair{"u0", &init_fields.u0}, std::pair{"u1", &init_fields.u1}}) {
        const double r = far_field_residual(*f);
        if (r > 1e-12) log_line(opts.log, std::string("warning: ") + name + " is " + num(r) + " of its maximum at Ymax; raise grid.Ymax");
    }
    const auto s0 = make_initial_state(init_fields.u0, init_fields.u1, cfg.eta);
    sum.init = verify_init_bound(init_fields.u0, init_fields.u1, cfg.eta, cfg.rho0, cfg.norms);
    const double D = sum.init.norm_u0 + sum.init.norm_u1;
    log_line(opts.log, "X(0) = " + num(sum.init.X0) + ", data norm at 2 rho0 = " + num(D) + ", C0 = " + num(sum.init.C0_emp));

    if (cfg.mu) {
        sum.mu = *cfg.mu;
    } else {
        sum.mu_auto = true;
        log_line(opts.log, "pilot run at mu = 1 over [0, " + num(cfg.pilot_T) + "]");
        const auto pilot = integrate(cfg, s0, 1.0, cfg.pilot_T, D);
        std::optional<InequalityFit> pf;
        if (pilot.ledger.series().size() >= 3) pf = check_differential_inequality(pilot.ledger, 1.0);
        write_ledger_csv(dir / "pilot_ledger.csv", pilot.ledger, pf ? &*pf : nullptr);
        sum.pilot_C_emp = pf ? pf->C_emp : 0.0;
        sum.mu = std::max(1.0, choose_mu(sum.pilot_C_emp, pilot.ledger.C0_emp(), D));
        log_line(opts.log, "pilot C_emp = " + num(sum.pilot_C_emp) + ", mu = " + num(sum.mu));
    }
    sum.T = cfg.T ? *cfg.T : 1.0 / sum.mu;

    std::size_t expected = 0;
    {
        const double steps = std::ceil(sum.T / cfg.time.dt - 1e-9);
        expected = static_cast<std::size_t>(steps) / static_cast<std::size_t>(cfg.norms_every);
    }
    auto hook = [&](const StateSnapshot& s, std::size_t n) {
        const bool first = n == 0;
        const bool periodic = cfg.fields_every > 0 && n % static_cast<std::size_t>(cfg.fields_every) == 0;
        const bool last = s.t >= sum.T || n >= expected;
        if (!(first || periodic || last)) return;
        for (auto [name, f] : {std::pair{"u", &s.u}, std::pair{"phi", &s.phi}, std::pair{"f", &s.f}, std::pair{"lambda", &s.lambda}})
            write_field((dir / "fields" / sample_name(name, n)).string(), *f, s.t);
    };
    log_line(opts.log, "main run over [0, " + num(sum.T) + "] with mu = " + num(sum.mu));
    sum.trajectory = integrate(cfg, s0, sum.mu, sum.T, D, hook);
    auto& tr = sum.trajectory;
    if (tr.blowup_time) {
        // keep the last finite state for inspection
        const std::size_t n = tr.reports.size();
        for (auto [name, f] : {std::pair{"u", &tr.final_state.u}, std::pair{"phi", &tr.final_state.phi}})
            write_field((dir / "fields" / sample_name(name, n)).string(), *f, tr.final_state.t);
    }

    if (tr.ledger.series().size() >= 3) sum.fit = check_differential_inequality(tr.ledger, sum.mu);
    sum.verdict = decide(tr.ledger, sum.fit ? &*sum.fit : nullptr, cfg.shadow_tol, tr.blowup_time, tr.blowup_reason);
    sum.exit_code = exit_code_for(sum.verdict.kind);

    {
        Csv csv(dir / "norms.csv", {"t", "rho", "X2", "Y2", "tail_ratio_m", "tail_ratio_k", "unresolved", "noise_flags", "converged"});
        for (const auto& r : tr.reports)
            csv.row({num(r.t), num(r.rho), num(r.X2), num(r.Y2), num(r.tail_ratio_m), num(r.tail_ratio_k), num(r.unresolved),
                     std::to_string(r.noise_flags.size()), r.converged ? "1" : "0"});
    }
    write_ledger_csv(dir / "ledger.csv", tr.ledger, sum.fit ? &*sum.fit : nullptr);
    {
        Csv csv(dir / "diagnostics.csv", {"t", "divergence", "boundary", "phi_top", "lambda_rel", "far_field_u", "halvings"});
        for (const auto& d : tr.diagnostics)
            csv.row({num(d.t), num(d.divergence), num(d.boundary), num(d.phi_top), num(d.lambda_rel), num(d.far_field_u),
                     std::to_string(d.halvings)});
    }
    {
        Csv csv(dir / "cross_checks.csv", {"t", "lhs_u", "lhs_u_weighted", "lhs_v", "lhs_v_weighted", "rhs_bound", "rhs_bound_y", "C_u",
                                           "C_u_weighted", "C_v", "C_v_weighted"});
        for (const auto& c : tr.cross_checks) {
            const auto& k = c.check;
            csv.row({num(c.t), num(k.lhs_u), num(k.lhs_u_weighted), num(k.lhs_v), num(k.lhs_v_weighted), num(k.rhs_bound),
                     num(k.rhs_bound_y), num(k.C_u), num(k.C_u_weighted), num(k.C_v), num(k.C_v_weighted)});
        }
    }
    if (!tr.reports.empty()) {
        json terms;
        terms["first"] = terms_json(tr.reports.front());
        terms["last"] = terms_json(tr.reports.back());
        write_text(dir / "norms_terms.json", terms.dump(1) + "\n");
    }
    if (cfg.plots) write_text(dir / "plots.svg", ledger_svg(tr.ledger, sum.fit ? &*sum.fit : nullptr));
    write_text(dir / "verdict.json", verdict_json(sum) + "\n");
    log_line(opts.log, "verdict: " + to_string(sum.verdict.kind) + " (" + sum.verdict.reason + ")");
    return sum;
}

std::string verdict_json(const SimulationSummary& s) {
    json j;
    j["verdict"] = to_string(s.verdict.kind);
    j["at"] = s.verdict.at ? json(*s.verdict.at) : json(nullptr);
    j["reason"] = s.verdict.reason;
    j["shadow"] = s.verdict.shadow;
    j["bound"] = s.verdict.bound;
    j["budget"] = s.verdict.budget;
    j["X0"] = s.init.X0;
    j["data_norm"] = s.init.norm_u0 + s.init.norm_u1;
    j["data_norm_rho0"] = s.init.norm_u0_rho0 + s.init.norm_u1_rho0;
    j["C0_emp"] = s.init.C0_emp;
    j["C0_emp_rho0"] = s.init.C0_emp_rho0;
    j["data_norms_converged"] = !s.init.inconclusive;
    j["mu"] = s.mu;
    j["mu_policy"] = s.mu_auto ? "auto" : "fixed";
    j["pilot_C_emp"] = s.pilot_C_emp;
    j["T"] = s.T;
    j["C_emp"] = s.fit ? json(s.fit->C_emp) : json(nullptr);
    j["sign_flips"] = s.fit ? s.fit->sign_flips : 0;
    j["samples"] = s.trajectory.ledger.series().size();
    j["exit_code"] = s.exit_code;
    return j.dump(2);
}

AprioriReport check_apriori(const fs::path& run_dir, std::optional<double> mu_override, std::optional<double> shadow_tol_override) {
    const auto cfg = load_config((run_dir / "config.ini").string());
    std::ifstream vin(run_dir / "verdict.json");
    if (!vin) throw std::runtime_error("missing verdict.json in " + run_dir.string());
    const json v = json::parse(vin);

    std::ifstream in(run_dir / "ledger.csv");
    if (!in) throw std::runtime_error("missing ledger.csv in " + run_dir.string());
    std::string line;
    std::getline(in, line);
    const auto header = split(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t n = 0; n < header.size(); ++n) col[header[n]] = n;
    for (const char* need : {"t", "rho", "X2", "Y2"})
        if (!col.count(need)) throw FormatError(std::string("ledger.csv lacks column ") + need);

    AprioriReport r;
    r.mu = mu_override ? *mu_override : v.at("mu").get<double>();
    BootstrapLedger L(v.at("data_norm").get<double>());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = split(line);
        L.record(std::stod(c.at(col["t"])), std::stod(c.at(col["rho"])), std::stod(c.at(col["X2"])), std::stod(c.at(col["Y2"])));
    }
    r.samples = L.series().size();
    std::optional<double> blow;
    if (v.at("verdict") == "blowup" && v.at("at").is_number()) blow = v.at("at").get<double>();
    const InequalityFit* fp = nullptr;
    if (r.samples >= 3) {
        r.fit = check_differential_inequality(L, r.mu);
        fp = &r.fit;
    }
    r.verdict = decide(L, fp, shadow_tol_override ? *shadow_tol_override : cfg.shadow_tol, blow, blow ? v.at("reason").get<std::string>() : "");
    return r;
}

ScalarField spectral_interpolate(const ScalarField& f, const GridPtr& target) {
    const auto& src = *f.grid();
    if (src.Ymax() != target->Ymax()) throw FormatError("cannot compare fields with different Ymax");
    const int nxs = src.Nx(), nys = src.Ny();
    const auto spec = x_spectrum(f);
    // Chebyshev coefficients of every retained Fourier mode.
    const int half = nxs / 2;
    std::vector<std::complex<double>> coef(static_cast<std::size_t>(half + 1) * static_cast<std::size_t>(nys));
    const auto& F = src.cheb_forward();
    for (int k = 0; k <= half; ++k)
        for (int n = 0; n < nys; ++n) {
            std::complex<double> acc{0.0, 0.0};
            for (int j = 0; j < nys; ++j) acc += F(n, j) * spec[static_cast<std::size_t>(k * nys + j)];
            coef[static_cast<std::size_t>(k * nys + n)] = acc;
        }
    ScalarField out(target);
    const auto& xs = target->xs();
    const auto& ys = target->ys();
    std::vector<double> Tn(static_cast<std::size_t>(nys));
    std::vector<std::complex<double>> col(static_cast<std::size_t>(half + 1));
    for (int j = 0; j < target->Ny(); ++j) {
        const double s = 1.0 - 2.0 * ys[static_cast<std::size_t>(j)] / target->Ymax();
        const double th = std::acos(std::clamp(s, -1.0, 1.0));
        for (int n = 0; n < nys; ++n) Tn[static_cast<std::size_t>(n)] = std::cos(n * th);
        for (int k = 0; k <= half; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (int n = 0; n < nys; ++n) acc += Tn[static_cast<std::size_t>(n)] * coef[static_cast<std::size_t>(k * nys + n)];
            col[static_cast<std::size_t>(k)] = acc;
        }
        for (int i = 0; i < target->Nx(); ++i) {
            const double x = xs[static_cast<std::size_t>(i)];
            double v = col[0].real();
            // Nyquist mode dropped: it is not a smooth function of x
            for (int k = 1; k < half; ++k) v += 2.0 * (col[static_cast<std::size_t>(k)] * std::polar(1.0, k * x)).real();
            out(i, j) = v;
        }
    }
    return out;
}

std::vector<FieldDiff> diff_runs(const fs::path& a, const fs::path& b) {
    std::vector<FieldDiff> out;
    if (!fs::is_directory(a / "fields") || !fs::is_directory(b / "fields")) throw std::runtime_error("both arguments must be run directories");
    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(a / "fields"))
        if (e.path().extension() == ".bin") names.push_back(e.path().filename());
    std::sort(names.begin(), names.end());
    for (const auto& name : names) {
        if (!fs::exists(b / "fields" / name)) continue;
        const auto fa = read_field_standalone((a / "fields" / name).string());
        auto fb = read_field_standalone((b / "fields" / name).string());
        FieldDiff d;
        d.name = name.string();
        if (!fa.grid()->same_shape(*fb.grid())) {
            fb = spectral_interpolate(fb, fa.grid());
            d.interpolated = true;
        }
        d.max_abs = (fa - fb).max_abs();
        const double scale = fa.max_abs();
        d.max_rel = scale > 0.0 ? d.max_abs / scale : (d.max_abs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        out.push_back(d);
    }
    return out;
}

}  // namespace hyprandtl
