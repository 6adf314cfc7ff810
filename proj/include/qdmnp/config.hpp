#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qdmnp {

/// Flat `key = value` configuration with dotted keys and `#` comments.
/// Later assignments override earlier ones.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in, const std::string& source = "<input>");
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;

    /// Overlay `other` on top of this configuration.
    void merge(const KeyValueConfig& other);

private:
    std::map<std::string, std::string> values_;
};

enum class ExperimentKind {
    coupling_vs_distance,
    damping_map,
    scattering_sweep,
    power_series,
    rf_spectrum,
    g2_scan,
    g2_trace,
    convergence_report,
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

struct SweepAxis {
    double start = 0.0;
    double stop = 0.0;
    int count = 2;
    bool logarithmic = false;

    std::vector<double> points() const;
};

enum class G2Target { dip, peak, fixed };
enum class G2Source { scattered, incoherent };

/// Fully resolved experiment description.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::scattering_sweep;
    std::string name;

    std::filesystem::path table;
    double eps_b = 3.0;

    double R_nm = 14.0;
    double r_m_nm = 7.0;
    double s_alpha = 2.0;
    double mu_enm = 0.7;

    double exciton_detuning = 0.0;  ///< omega_x - omega_sp [meV]
    double gamma_x = 1e-3;          ///< [meV]

    double rabi = 0.02;         ///< [meV]
    double drive_offset = 0.0;  ///< omega_i - omega_x [meV]

    SweepAxis sweep;
    std::optional<SweepAxis> sweep2;

    std::optional<int> n_max;  ///< empty: converge automatically
    double fock_tol = 1e-6;
    int fock_cap = 64;

    int correlator_count = 2048;
    std::optional<double> correlator_span_ps;

    G2Target g2_target = G2Target::fixed;
    G2Source g2_source = G2Source::scattered;
    SweepAxis locate{-3.0, 3.0, 601, false};

    /// Built-in defaults; identical to configs/defaults.conf.
    static KeyValueConfig defaults();
    /// Resolve and validate; relative table paths are taken relative to `base_dir`.
    static ExperimentConfig from(const KeyValueConfig& kv, const std::filesystem::path& base_dir = {});

    void validate() const;
    /// Every resolved key with a provenance tag, in a fixed order.
    std::vector<std::pair<std::string, std::string>> describe() const;
};

}  // namespace qdmnp
