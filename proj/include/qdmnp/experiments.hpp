#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdmnp/config.hpp"
#include "qdmnp/observables.hpp"

namespace qdmnp {

struct SolverSettings {
    std::optional<int> n_max;  ///< empty: converge the cutoff on <P- P+>
    double fock_tol = 1e-6;
    int fock_cap = 64;
};

/// Steady state of one parameter point together with everything needed to
/// compute correlators on it.
struct PointSolution {
    HilbertSpace space;
    Liouvillian L;
    Matrix rho;
    SystemOperators<double> ops;
    PolarizationOps pol;
    double residual;
};

PointSolution solve_point(const SystemParams& p, const SolverSettings& settings);

/// Quasi-mode parameters from the configured table and background.
QuasiModeParams quasi_mode_from(const ExperimentConfig& cfg);
/// The configured system with the drive at omega_x + drive_offset.
SystemParams system_from(const ExperimentConfig& cfg, const QuasiModeParams& mode);

struct FanoExtrema {
    double omega_dip;
    double omega_peak;
    double dip_value;
    double peak_value;
};

/// Local minimum of the scattered intensity nearest omega_x and the local
/// maximum nearest to that minimum. NotFoundError if either is missing.
FanoExtrema locate_fano_extrema(std::span<const double> omega_i, std::span<const double> intensity, double omega_x);

/// Golden-section refinement of both extrema within +-half_width of the
/// coarse estimates, using the full steady state at each trial frequency.
FanoExtrema refine_fano_extrema(const SystemParams& p, const FanoExtrema& coarse, double half_width,
                                const SolverSettings& settings);

/// Scan I_s over omega_x + offsets, locate, then refine to a tenth of a step.
FanoExtrema find_fano_extrema(const SystemParams& p, const SweepAxis& offsets, const SolverSettings& settings,
                              int workers = 1);

/// Depth of the destructive-interference dip relative to the particle-only
/// baseline at the same drive frequency: 1 - I_s(dip) / I_particle(dip).
double fano_contrast(const SystemParams& p, double omega_dip, const SolverSettings& settings);

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> failures;
    std::vector<std::pair<std::string, std::string>> meta;
    bool all_failed = false;
};

/// Runs one experiment. Sweep points are spread over `workers` threads and
/// gathered in sweep order. Solver errors are caught per point.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

/// results.csv and meta.txt under `dir`. The metadata is written even when
/// every point failed.
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir);

/// CSV number format: scientific, 17 significant digits.
std::string format_csv_number(double v);

/// Runs `fn(k)` for k < count on `workers` threads; exceptions are caught
/// and returned per index (empty string on success).
std::vector<std::string> parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace qdmnp
