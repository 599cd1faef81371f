#include "hyprandtl/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hyprandtl {

namespace pt = boost::property_tree;

namespace {

std::string join_lines(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Collects typed reads from the tree so that all problems surface at once.
class Reader {
public:
    Reader(const pt::ptree& tree, std::vector<std::string>& problems) : tree_(tree), problems_(problems) {}

    template <class T>
    void get(const std::string& section, const std::string& key, T& out) {
        const auto raw = lookup(section, key);
        if (!raw) return;
        if (!convert(*raw, out)) problems_.push_back(section + "." + key + ": cannot parse '" + *raw + "'");
    }

    std::optional<std::string> lookup(const std::string& section, const std::string& key) {
        known_[section].insert(key);
        const auto s = tree_.get_child_optional(section);
        if (!s) return std::nullopt;
        const auto v = s->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    void report_unknown() {
        for (const auto& [name, sec] : tree_) {
            if (!known_.count(name)) {
                problems_.push_back("unknown section [" + name + "]");
                continue;
            }
            for (const auto& [key, _] : sec)
                if (!known_[name].count(key)) problems_.push_back("unknown key " + name + "." + key);
        }
    }

private:
    static bool convert(const std::string& s, double& out) {
        try {
            std::size_t n = 0;
            out = std::stod(s, &n);
            return n == s.size();
        } catch (const std::exception&) {
            return false;
        }
    }
    static bool convert(const std::string& s, int& out) {
        const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
        return r.ec == std::errc{} && r.ptr == s.data() + s.size();
    }
    static bool convert(const std::string& s, std::uint64_t& out) {
        const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
        return r.ec == std::errc{} && r.ptr == s.data() + s.size();
    }
    static bool convert(const std::string& s, bool& out) {
        if (s == "true" || s == "1" || s == "yes" || s == "on") {
            out = true;
            return true;
        }
        if (s == "false" || s == "0" || s == "no" || s == "off") {
            out = false;
            return true;
        }
        return false;
    }

    const pt::ptree& tree_;
    std::vector<std::string>& problems_;
    std::map<std::string, std::set<std::string>> known_;
};

void read_data(Reader& r, const std::string& sec, DataSpec& d, std::vector<std::string>& problems) {
    if (auto v = r.lookup(sec, "family")) {
        try {
            d.family = parse_family(*v);
        } catch (const DomainError& e) {
            problems.push_back(sec + ".family: " + e.what());
        }
    }
    r.get(sec, "amplitude", d.amplitude);
    if (auto v = r.lookup(sec, "modes")) {
        try {
            d.x_modes = parse_modes(*v);
        } catch (const DomainError& e) {
            problems.push_back(sec + ".modes: " + e.what());
        }
    }
    if (auto v = r.lookup(sec, "profile")) {
        try {
            d.y_profile = parse_profile(*v);
            if (d.y_profile == YProfile::custom) problems.push_back(sec + ".profile: custom profiles are only available through the library");
        } catch (const DomainError& e) {
            problems.push_back(sec + ".profile: " + e.what());
        }
    }
    if (auto v = r.lookup(sec, "file")) d.path = *v;
}

void check_data(const std::string& sec, const DataSpec& d, int Nx, std::vector<std::string>& out) {
    if (!std::isfinite(d.amplitude)) out.push_back(sec + ".amplitude must be finite");
    if (d.family == DataFamily::custom_file) {
        if (d.path.empty()) out.push_back(sec + ".file is required for family custom_file");
        return;
    }
    if (d.x_modes.empty()) out.push_back(sec + ".modes must list at least one mode");
    for (const auto& m : d.x_modes)
        if (m.wavenumber < 1 || (Nx >= 4 && m.wavenumber > Nx / 2 - 1))
            out.push_back(sec + ".modes: wavenumber " + std::to_string(m.wavenumber) + " outside [1, Nx/2-1]");
    if (d.family == DataFamily::single_mode && d.x_modes.size() > 1) out.push_back(sec + ".modes: single_mode takes exactly one mode");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems) : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

DataSpec RunConfig::default_u0() {
    DataSpec d;
    d.family = DataFamily::single_mode;
    d.amplitude = 1e-3;
    d.x_modes = {XMode{1, 0.0}};
    // odd in y, so the wall compatibility conditions hold beyond first order
    d.y_profile = YProfile::y_gauss;
    return d;
}

DataSpec RunConfig::default_u1() {
    DataSpec d = default_u0();
    d.amplitude = 0.0;
    return d;
}

void RunConfig::validate() const {
    std::vector<std::string> p;
    if (Nx < 4 || (Nx & (Nx - 1)) != 0) p.push_back("grid.Nx must be a power of two >= 4");
    if (Ny < 4) p.push_back("grid.Ny must be >= 4");
    if (!(Ymax > 0.0) || !std::isfinite(Ymax)) p.push_back("grid.Ymax must be positive");
    if (!(eta >= kMinEta && eta <= 1.0)) p.push_back("model.eta must lie in [" + fmt(kMinEta) + ", 1]");
    if (!(ell >= 2.0)) p.push_back("model.ell must be >= 2");
    if (!(rho0 > 0.0) || !std::isfinite(rho0)) p.push_back("schedule.rho0 must be positive");
    if (mu && !(*mu >= 1.0)) p.push_back("schedule.mu must be >= 1 or auto");
    if (T && !(*T > 0.0)) p.push_back("schedule.T must be positive or 1/mu");
    check_data("u0", u0, Nx, p);
    check_data("u1", u1, Nx, p);
    if (norms.Mmax < 0) p.push_back("norms.Mmax must be >= 0");
    if (norms.Kmax < 0) p.push_back("norms.Kmax must be >= 0");
    if (!(norms.tail_tol > 0.0)) p.push_back("norms.tail_tol must be positive");
    if (!(norms.chop_tol >= 0.0 && norms.chop_tol < 1.0)) p.push_back("norms.chop_tol must lie in [0, 1)");
    if (!(time.dt > 0.0)) p.push_back("time.dt must be positive");
    if (!(time.cfl_safety > 0.0 && time.cfl_safety <= 1.0)) p.push_back("time.cfl_safety must lie in (0, 1]");
    if (time.max_halvings < 0 || time.max_halvings > 20) p.push_back("time.max_halvings must lie in [0, 20]");
    if (norms_every < 1) p.push_back("output.norms_every must be >= 1");
    if (fields_every < 0) p.push_back("output.fields_every must be >= 0");
    if (!(shadow_tol >= 0.0)) p.push_back("monitor.shadow_tol must be >= 0");
    if (!(pilot_T > 0.0)) p.push_back("monitor.pilot_T must be positive");
    if (workers < 0) p.push_back("run.workers must be >= 0");
    if (!p.empty()) throw ConfigError(std::move(p));
}

std::string format_modes(const std::vector<XMode>& modes) {
    std::string out;
    for (std::size_t n = 0; n < modes.size(); ++n) {
        if (n) out += ", ";
        out += std::to_string(modes[n].wavenumber) + ":" + fmt(modes[n].phase);
    }
    return out;
}

std::vector<XMode> parse_modes(const std::string& s) {
    std::vector<XMode> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw DomainError("empty mode entry in '" + s + "'");
        XMode m;
        const auto colon = item.find(':');
        try {
            std::size_t n = 0;
            const std::string k = trim(item.substr(0, colon));
            m.wavenumber = std::stoi(k, &n);
            if (n != k.size()) throw std::invalid_argument(k);
            if (colon != std::string::npos) {
                const std::string ph = trim(item.substr(colon + 1));
                m.phase = std::stod(ph, &n);
                if (n != ph.size()) throw std::invalid_argument(ph);
            }
        } catch (const std::logic_error&) {
            throw DomainError("malformed mode '" + item + "' (expected k or k:phase)");
        }
        out.push_back(m);
    }
    if (out.empty()) throw DomainError("no modes given");
    return out;
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({std::string("syntax: ") + e.message() + " at line " + std::to_string(e.line())});
    }
    std::vector<std::string> problems;
    Reader r(tree, problems);
    RunConfig c;
    r.get("grid", "Nx", c.Nx);
    r.get("grid", "Ny", c.Ny);
    r.get("grid", "Ymax", c.Ymax);
    r.get("model", "eta", c.eta);
    r.get("model", "ell", c.ell);
    r.get("schedule", "rho0", c.rho0);
    if (auto v = r.lookup("schedule", "mu"); v && *v != "auto") {
        double mu = 0.0;
        r.get("schedule", "mu", mu);
        c.mu = mu;
    }
    if (auto v = r.lookup("schedule", "T"); v && *v != "1/mu") {
        double T = 0.0;
        r.get("schedule", "T", T);
        c.T = T;
    }
    read_data(r, "u0", c.u0, problems);
    read_data(r, "u1", c.u1, problems);
    r.get("norms", "Mmax", c.norms.Mmax);
    r.get("norms", "Kmax", c.norms.Kmax);
    r.get("norms", "tail_tol", c.norms.tail_tol);
    r.get("norms", "chop_tol", c.norms.chop_tol);
    r.get("time", "dt", c.time.dt);
    r.get("time", "cfl_safety", c.time.cfl_safety);
    r.get("time", "max_halvings", c.time.max_halvings);
    r.get("time", "project_top", c.time.project_top);
    r.get("output", "norms_every", c.norms_every);
    r.get("output", "fields_every", c.fields_every);
    r.get("output", "plots", c.plots);
    r.get("monitor", "shadow_tol", c.shadow_tol);
    r.get("monitor", "pilot_T", c.pilot_T);
    r.get("run", "seed", c.seed);
    r.get("run", "workers", c.workers);
    r.report_unknown();
    try {
        c.validate();
    } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream os;
    auto data = [&](const char* name, const DataSpec& d) {
        os << "\n[" << name << "]\n";
        os << "family = " << to_string(d.family) << "\n";
        os << "amplitude = " << fmt(d.amplitude) << "\n";
        os << "modes = " << format_modes(d.x_modes) << "\n";
        os << "profile = " << to_string(d.y_profile) << "\n";
        if (!d.path.empty()) os << "file = " << d.path << "\n";
    };
    os << "[grid]\nNx = " << c.Nx << "\nNy = " << c.Ny << "\nYmax = " << fmt(c.Ymax) << "\n";
    os << "\n[model]\neta = " << fmt(c.eta) << "\nell = " << fmt(c.ell) << "\n";
    os << "\n[schedule]\nrho0 = " << fmt(c.rho0) << "\nmu = " << (c.mu ? fmt(*c.mu) : "auto") << "\nT = " << (c.T ? fmt(*c.T) : "1/mu")
       << "\n";
    data("u0", c.u0);
    data("u1", c.u1);
    os << "\n[norms]\nMmax = " << c.norms.Mmax << "\nKmax = " << c.norms.Kmax << "\ntail_tol = " << fmt(c.norms.tail_tol)
       << "\nchop_tol = " << fmt(c.norms.chop_tol) << "\n";
    os << "\n[time]\ndt = " << fmt(c.time.dt) << "\ncfl_safety = " << fmt(c.time.cfl_safety) << "\nmax_halvings = " << c.time.max_halvings
       << "\nproject_top = " << (c.time.project_top ? "true" : "false") << "\n";
    os << "\n[output]\nnorms_every = " << c.norms_every << "\nfields_every = " << c.fields_every << "\nplots = " << (c.plots ? "true" : "false")
       << "\n";
    os << "\n[monitor]\nshadow_tol = " << fmt(c.shadow_tol) << "\npilot_T = " << fmt(c.pilot_T) << "\n";
    os << "\n[run]\nseed = " << c.seed << "\nworkers = " << c.workers << "\n";
    return os.str();
}

}  // namespace hyprandtl
