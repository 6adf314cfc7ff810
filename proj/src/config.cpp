#include "qdmnp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qdmnp/errors.hpp"
#include "qdmnp/material_optics.hpp"

namespace qdmnp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') return false;
    for (char c : key) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    }
    return true;
}

const std::vector<std::pair<ExperimentKind, std::string>>& kind_names() {
    static const std::vector<std::pair<ExperimentKind, std::string>> names = {
        {ExperimentKind::coupling_vs_distance, "coupling-vs-distance"},
        {ExperimentKind::damping_map, "damping-map"},
        {ExperimentKind::scattering_sweep, "scattering-sweep"},
        {ExperimentKind::power_series, "power-series"},
        {ExperimentKind::rf_spectrum, "rf-spectrum"},
        {ExperimentKind::g2_scan, "g2-scan"},
        {ExperimentKind::g2_trace, "g2-trace"},
        {ExperimentKind::convergence_report, "convergence-report"},
    };
    return names;
}

// Keys accepted in experiment files; anything else is a typo.
const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "experiment.kind",    "experiment.name",   "material.table",    "material.eps_b",
        "geometry.R_nm",      "geometry.r_m_nm",   "geometry.s_alpha",  "geometry.mu_enm",
        "dot.detuning_meV",   "dot.gamma_x_meV",   "drive.rabi_meV",    "drive.offset_meV",
        "sweep.start",        "sweep.stop",        "sweep.count",       "sweep.scale",
        "sweep2.start",       "sweep2.stop",       "sweep2.count",      "sweep2.scale",
        "solver.n_max",       "solver.fock_tol",   "solver.fock_cap",   "correlator.count",
        "correlator.span_ps", "g2.target",         "g2.source",         "locate.start",
        "locate.stop",        "locate.count",
    };
    return keys;
}

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

SweepAxis read_axis(const KeyValueConfig& kv, const std::string& prefix) {
    SweepAxis axis;
    axis.start = kv.get_double(prefix + ".start");
    axis.stop = kv.get_double(prefix + ".stop");
    axis.count = kv.get_int(prefix + ".count");
    if (kv.contains(prefix + ".scale")) {
        const auto scale = kv.get_string(prefix + ".scale");
        if (scale == "log") axis.logarithmic = true;
        else if (scale != "linear") throw ConfigError(prefix + ".scale must be 'linear' or 'log', got '" + scale + "'");
    }
    return axis;
}

void check_axis(const SweepAxis& axis, const std::string& name) {
    if (axis.count < 2) throw ConfigError(name + ".count must be >= 2");
    if (axis.logarithmic && !(axis.start > 0.0 && axis.stop > 0.0)) {
        throw ConfigError(name + ": logarithmic axis needs positive bounds");
    }
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop)) throw ConfigError(name + ": non-finite bounds");
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
    KeyValueConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError(source + ":" + std::to_string(line_no) + ": bad key '" + key + "'");
        if (value.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty value for " + key);
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse(in, path.string());
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key " + key);
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const auto s = get_string(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError(key + ": not a finite number: '" + s + "'");
    return v;
}

int KeyValueConfig::get_int(const std::string& key) const {
    const auto s = get_string(key);
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
    return v;
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    for (const auto& [kind, n] : kind_names())
        if (n == name) return kind;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, n] : kind_names())
        if (k == kind) return n;
    return "unknown";
}

std::vector<double> SweepAxis::points() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
        if (logarithmic) out[k] = std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
        else out[k] = start + t * (stop - start);
    }
    if (count > 1) {
        out.front() = start;
        out.back() = stop;
    }
    return out;
}

KeyValueConfig ExperimentConfig::defaults() {
    KeyValueConfig kv;
    kv.set("experiment.kind", "scattering-sweep");
    kv.set("material.table", default_silver_table().string());
    kv.set("material.eps_b", "3");
    kv.set("geometry.R_nm", "14");
    kv.set("geometry.r_m_nm", "7");
    kv.set("geometry.s_alpha", "2");
    kv.set("geometry.mu_enm", "0.7");
    kv.set("dot.detuning_meV", "0");
    kv.set("dot.gamma_x_meV", "0.001");
    kv.set("drive.rabi_meV", "0.02");
    kv.set("drive.offset_meV", "0");
    kv.set("sweep.start", "-3");
    kv.set("sweep.stop", "3");
    kv.set("sweep.count", "301");
    kv.set("sweep.scale", "linear");
    kv.set("solver.n_max", "auto");
    kv.set("solver.fock_tol", "1e-6");
    kv.set("solver.fock_cap", "64");
    kv.set("correlator.count", "2048");
    kv.set("correlator.span_ps", "auto");
    kv.set("g2.target", "fixed");
    kv.set("g2.source", "scattered");
    kv.set("locate.start", "-3");
    kv.set("locate.stop", "3");
    kv.set("locate.count", "601");
    return kv;
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& user, const std::filesystem::path& base_dir) {
    for (const auto& [key, value] : user.values()) {
        bool known = false;
        for (const auto& k : known_keys()) known = known || k == key;
        if (!known) throw ConfigError("unknown config key '" + key + "'");
    }
    KeyValueConfig kv = defaults();
    kv.merge(user);

    ExperimentConfig c;
    c.kind = parse_experiment_kind(kv.get_string("experiment.kind"));
    c.name = kv.contains("experiment.name") ? kv.get_string("experiment.name") : to_string(c.kind);

    std::filesystem::path table = kv.get_string("material.table");
    if (user.contains("material.table") && table.is_relative() && !base_dir.empty()) table = base_dir / table;
    c.table = table;
    c.eps_b = kv.get_double("material.eps_b");
    c.R_nm = kv.get_double("geometry.R_nm");
    c.r_m_nm = kv.get_double("geometry.r_m_nm");
    c.s_alpha = kv.get_double("geometry.s_alpha");
    c.mu_enm = kv.get_double("geometry.mu_enm");
    c.exciton_detuning = kv.get_double("dot.detuning_meV");
    c.gamma_x = kv.get_double("dot.gamma_x_meV");
    c.rabi = kv.get_double("drive.rabi_meV");
    c.drive_offset = kv.get_double("drive.offset_meV");
    c.sweep = read_axis(kv, "sweep");
    if (kv.contains("sweep2.start")) c.sweep2 = read_axis(kv, "sweep2");

    const auto n_max = kv.get_string("solver.n_max");
    if (n_max != "auto") c.n_max = kv.get_int("solver.n_max");
    c.fock_tol = kv.get_double("solver.fock_tol");
    c.fock_cap = kv.get_int("solver.fock_cap");
    c.correlator_count = kv.get_int("correlator.count");
    const auto span = kv.get_string("correlator.span_ps");
    if (span != "auto") c.correlator_span_ps = kv.get_double("correlator.span_ps");

    const auto target = kv.get_string("g2.target");
    if (target == "dip") c.g2_target = G2Target::dip;
    else if (target == "peak") c.g2_target = G2Target::peak;
    else if (target == "fixed") c.g2_target = G2Target::fixed;
    else throw ConfigError("g2.target must be dip, peak or fixed");
    const auto source = kv.get_string("g2.source");
    if (source == "scattered") c.g2_source = G2Source::scattered;
    else if (source == "incoherent") c.g2_source = G2Source::incoherent;
    else throw ConfigError("g2.source must be scattered or incoherent");
    c.locate = read_axis(kv, "locate");

    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    check_axis(sweep, "sweep");
    if (sweep2) check_axis(*sweep2, "sweep2");
    check_axis(locate, "locate");
    if (kind == ExperimentKind::damping_map && !sweep2) throw ConfigError("damping-map needs a sweep2 axis");
    if (!(eps_b > 0.0)) throw ConfigError("material.eps_b must be positive");
    if (!(r_m_nm > 0.0)) throw ConfigError("geometry.r_m_nm must be positive");
    if (!(R_nm > r_m_nm)) throw ConfigError("geometry.R_nm must exceed geometry.r_m_nm");
    if (s_alpha != 2.0 && s_alpha != -1.0) throw ConfigError("geometry.s_alpha must be 2 or -1");
    if (!(mu_enm > 0.0)) throw ConfigError("geometry.mu_enm must be positive");
    if (!(gamma_x > 0.0)) throw ConfigError("dot.gamma_x_meV must be positive");
    if (!(rabi >= 0.0)) throw ConfigError("drive.rabi_meV must be non-negative");
    if (n_max && *n_max < 1) throw ConfigError("solver.n_max must be >= 1 or auto");
    if (!(fock_tol > 0.0)) throw ConfigError("solver.fock_tol must be positive");
    if (fock_cap < 2) throw ConfigError("solver.fock_cap must be >= 2");
    if (correlator_count < 2) throw ConfigError("correlator.count must be >= 2");
    if (correlator_span_ps && !(*correlator_span_ps > 0.0)) throw ConfigError("correlator.span_ps must be positive");
    if (kind == ExperimentKind::g2_trace && !(sweep.start == 0.0 && sweep.stop > 0.0 && !sweep.logarithmic)) {
        throw ConfigError("g2-trace sweeps tau: linear axis from 0 to a positive stop");
    }
    if (kind == ExperimentKind::coupling_vs_distance || kind == ExperimentKind::damping_map) {
        if (!(std::min(sweep.start, sweep.stop) > r_m_nm)) throw ConfigError("distance sweep must stay outside the particle");
    }
    if (kind == ExperimentKind::power_series && !(std::min(sweep.start, sweep.stop) >= 0.0)) {
        throw ConfigError("power-series sweeps the Rabi energy, which must be non-negative");
    }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::describe() const {
    auto axis = [](const SweepAxis& a) {
        return format_number(a.start) + " .. " + format_number(a.stop) + " x " + std::to_string(a.count) +
               (a.logarithmic ? " (log)" : " (linear)");
    };
    std::vector<std::pair<std::string, std::string>> out = {
        {"experiment.kind", to_string(kind)},
        {"experiment.name", name},
        {"material.table", table.filename().string()},
        {"material.eps_b", format_number(eps_b)},
        {"geometry.R_nm", format_number(R_nm)},
        {"geometry.r_m_nm", format_number(r_m_nm) + (r_m_nm == 7.0 ? "  # assumed" : "")},
        {"geometry.s_alpha", format_number(s_alpha)},
        {"geometry.mu_enm", format_number(mu_enm)},
        {"dot.detuning_meV", format_number(exciton_detuning)},
        {"dot.gamma_x_meV", format_number(gamma_x) + (gamma_x == 1e-3 ? "  # assumed" : "")},
        {"drive.rabi_meV", format_number(rabi)},
        {"drive.offset_meV", format_number(drive_offset)},
        {"sweep", axis(sweep)},
    };
    if (sweep2) out.emplace_back("sweep2", axis(*sweep2));
    out.emplace_back("solver.n_max", n_max ? std::to_string(*n_max) : "auto");
    out.emplace_back("solver.fock_tol", format_number(fock_tol));
    out.emplace_back("solver.fock_cap", std::to_string(fock_cap));
    out.emplace_back("correlator.count", std::to_string(correlator_count));
    out.emplace_back("correlator.span_ps", correlator_span_ps ? format_number(*correlator_span_ps) : "auto");
    out.emplace_back("g2.target", g2_target == G2Target::dip ? "dip" : g2_target == G2Target::peak ? "peak" : "fixed");
    out.emplace_back("g2.source", g2_source == G2Source::scattered ? "scattered" : "incoherent");
    out.emplace_back("locate", axis(locate));
    return out;
}

}  // namespace qdmnp
