#include "hyprandtl/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyprandtl {

double LedgerSample::shadow() const { return sup_X + std::sqrt(int_Y2); }

std::string to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::holds: return "holds";
        case VerdictKind::violated: return "violated";
        case VerdictKind::blowup: return "blowup";
        case VerdictKind::inconclusive: return "inconclusive";
    }
    return "?";
}

BootstrapLedger::BootstrapLedger(double data_norm) : data_norm_(data_norm) {
    if (!(data_norm >= 0.0)) throw DomainError("data norm must be nonnegative");
}

void BootstrapLedger::record(double t, double rho, double X2, double Y2) {
    if (!series_.empty() && !(t > series_.back().t)) {
        std::ostringstream os;
        os << "ledger times must increase: " << t << " after " << series_.back().t;
        throw DomainError(os.str());
    }
    if (!(X2 >= 0.0) || !(Y2 >= 0.0)) throw DomainError("negative or non-finite norm sample");
    LedgerSample s;
    s.t = t;
    s.rho = rho;
    s.X2 = X2;
    s.Y2 = Y2;
    const double X = std::sqrt(X2);
    if (series_.empty()) {
        s.sup_X = X;
        s.int_Y2 = 0.0;
        C0_ = data_norm_ > 0.0 ? X / data_norm_ : 0.0;
    } else {
        const auto& p = series_.back();
        s.sup_X = std::max(p.sup_X, X);
        s.int_Y2 = p.int_Y2 + 0.5 * (t - p.t) * (p.Y2 + Y2);
    }
    series_.push_back(s);
}

void BootstrapLedger::record(const NormReport& report_x, const NormReport& report_y) {
    if (report_x.t != report_y.t || report_x.rho != report_y.rho) throw DomainError("X and Y reports from different samples");
    record(report_x.t, report_x.rho, report_x.X2, report_y.Y2);
}

double BootstrapLedger::sup_X() const { return series_.empty() ? 0.0 : series_.back().sup_X; }
double BootstrapLedger::integral_Y2() const { return series_.empty() ? 0.0 : series_.back().int_Y2; }
double BootstrapLedger::shadow() const { return series_.empty() ? 0.0 : series_.back().shadow(); }

namespace {

// Second-order derivative of y at sample i from three neighbours with arbitrary spacing.
double three_point(double t0, double t1, double t2, double y0, double y1, double y2, double at) {
    // derivative of the Lagrange quadratic through the three points
    const double d0 = (2.0 * at - t1 - t2) / ((t0 - t1) * (t0 - t2));
    const double d1 = (2.0 * at - t0 - t2) / ((t1 - t0) * (t1 - t2));
    const double d2 = (2.0 * at - t0 - t1) / ((t2 - t0) * (t2 - t1));
    return d0 * y0 + d1 * y1 + d2 * y2;
}

}  // namespace

InequalityFit check_differential_inequality(const BootstrapLedger& ledger, double mu, const FitOptions& opts) {
    const auto& s = ledger.series();
    const std::size_t n = s.size();
    if (n < 3) throw DomainError("differential inequality needs at least 3 samples");
    InequalityFit fit;
    fit.dX2dt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
        fit.dX2dt[i] = three_point(s[c - 1].t, s[c].t, s[c + 1].t, s[c - 1].X2, s[c].X2, s[c + 1].X2, s[i].t);
    }

    fit.C_i.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double den = s[i].Y2 * (1.0 + s[i].X2 * s[i].X2);
        const double num = 0.5 * fit.dX2dt[i] + mu * s[i].Y2;
        fit.C_i[i] = den > 0.0 ? std::max(0.0, num / den) : 0.0;
        fit.C_emp = std::max(fit.C_emp, fit.C_i[i]);
    }
    fit.margin.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        fit.margin[i] = (-mu + fit.C_emp * (1.0 + s[i].X2 * s[i].X2)) * s[i].Y2 - 0.5 * fit.dX2dt[i];

    double dmax = 0.0;
    for (double d : fit.dX2dt) dmax = std::max(dmax, std::abs(d));
    int last = 0;
    for (double d : fit.dX2dt) {
        if (std::abs(d) <= opts.flip_floor * dmax) continue;
        const int sign = d > 0.0 ? 1 : -1;
        if (last != 0 && sign != last) ++fit.sign_flips;
        last = sign;
    }
    const double allowed = std::max(static_cast<double>(opts.min_flips), opts.flip_fraction * static_cast<double>(n));
    fit.noisy = fit.sign_flips > allowed;
    return fit;
}

double choose_mu(double C_emp, double C0_emp, double data_norm) {
    const double q = 2.0 * C0_emp * data_norm;
    return 2.0 * (0.5 + C_emp + C_emp * q * q * q * q);
}

Verdict decide(const BootstrapLedger& ledger, const InequalityFit* fit, double shadow_tol, std::optional<double> blowup_time,
               const std::string& blowup_reason) {
    Verdict v;
    v.budget = ledger.budget();
    v.shadow = ledger.shadow();
    const double X0 = ledger.empty() ? 0.0 : std::sqrt(ledger.series().front().X2);
    v.bound = X0 * (1.0 + shadow_tol);

    if (blowup_time) {
        v.kind = VerdictKind::blowup;
        v.at = blowup_time;
        v.reason = blowup_reason.empty() ? "non-finite state or CFL retries exhausted" : blowup_reason;
        return v;
    }
    for (const auto& s : ledger.series()) {
        if (s.shadow() > v.budget) {
            std::ostringstream os;
            os.precision(10);
            os << "bootstrap assumption fails: shadow " << s.shadow() << " > 2 C0 D = " << v.budget;
            v.kind = VerdictKind::violated;
            v.at = s.t;
            v.reason = os.str();
            return v;
        }
    }
    for (const auto& s : ledger.series()) {
        if (s.shadow() > v.bound) {
            std::ostringstream os;
            os.precision(10);
            os << "concluded bound fails: shadow " << s.shadow() << " > X(0)(1+" << shadow_tol << ") = " << v.bound;
            v.kind = VerdictKind::violated;
            v.at = s.t;
            v.reason = os.str();
            return v;
        }
    }
    if (fit && fit->noisy) {
        v.kind = VerdictKind::inconclusive;
        v.reason = "dX^2/dt changes sign " + std::to_string(fit->sign_flips) + " times above the noise floor";
        return v;
    }
    v.kind = VerdictKind::holds;
    v.reason = "shadow within X(0)(1+tol)";
    return v;
}

namespace {

struct Panel {
    double x0, y0, w, h;
};

std::string polyline(const std::vector<double>& ts, const std::vector<double>& ys, const Panel& p, double tmin, double tmax,
                     double ymin, double ymax, const char* colour) {
    std::ostringstream os;
    os.precision(6);
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    const double tw = tmax > tmin ? tmax - tmin : 1.0;
    const double yw = ymax > ymin ? ymax - ymin : 1.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!std::isfinite(ys[i])) continue;
        const double px = p.x0 + p.w * (ts[i] - tmin) / tw;
        const double py = p.y0 + p.h * (1.0 - (ys[i] - ymin) / yw);
        os << px << ',' << py << ' ';
    }
    os << "\"/>\n";
    return os.str();
}

void range_of(const std::vector<double>& v, double& lo, double& hi) {
    for (double x : v)
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
}

}  // namespace

std::string ledger_svg(const BootstrapLedger& ledger, const InequalityFit* fit) {
    const auto& s = ledger.series();
    std::vector<double> ts, lx, ly, mg;
    for (const auto& p : s) {
        ts.push_back(p.t);
        lx.push_back(p.X2 > 0.0 ? 0.5 * std::log10(p.X2) : std::numeric_limits<double>::quiet_NaN());
        ly.push_back(p.Y2 > 0.0 ? 0.5 * std::log10(p.Y2) : std::numeric_limits<double>::quiet_NaN());
    }
    if (fit) mg = fit->margin;

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"520\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"720\" height=\"520\" fill=\"white\"/>\n";
    const Panel top{60, 30, 620, 200}, bottom{60, 290, 620, 180};
    const double tmin = ts.empty() ? 0.0 : ts.front();
    const double tmax = ts.empty() ? 1.0 : ts.back();
    for (const Panel& p : {top, bottom})
        os << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.w << "\" height=\"" << p.h
           << "\" fill=\"none\" stroke=\"#888\"/>\n";

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    range_of(lx, lo, hi);
    range_of(ly, lo, hi);
    if (std::isfinite(lo)) {
        os << polyline(ts, lx, top, tmin, tmax, lo, hi, "#1f77b4");
        os << polyline(ts, ly, top, tmin, tmax, lo, hi, "#d62728");
        os << "<text x=\"" << top.x0 << "\" y=\"" << top.y0 - 8 << "\">log10 X (blue), log10 Y (red); range [" << lo << ", " << hi
           << "]</text>\n";
    }
    if (!mg.empty()) {
        double mlo = std::numeric_limits<double>::infinity(), mhi = -mlo;
        range_of(mg, mlo, mhi);
        if (std::isfinite(mlo)) {
            os << polyline(ts, mg, bottom, tmin, tmax, std::min(mlo, 0.0), mhi, "#2ca02c");
            os << "<text x=\"" << bottom.x0 << "\" y=\"" << bottom.y0 - 8 << "\">margin (green); range [" << mlo << ", " << mhi
               << "]</text>\n";
        }
    }
    os << "<text x=\"" << bottom.x0 << "\" y=\"" << bottom.y0 + bottom.h + 25 << "\">t in [" << tmin << ", " << tmax << "]</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace hyprandtl
