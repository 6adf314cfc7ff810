#include "qdmnp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <mutex>
#include <thread>

#include "qdmnp/errors.hpp"

namespace qdmnp {

namespace {

std::string describe_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double total_intensity(const Matrix& rho, const SystemOperators<double>& ops, const SystemParams& p) {
    const auto pol = polarization_ops(p, ops);
    return scattering_intensities(rho, pol, p.drive.omega_i).total;
}

double scattered_at(const SystemParams& base, double omega_i, const SolverSettings& s) {
    SystemParams p = base;
    p.drive.omega_i = omega_i;
    const auto sol = solve_point(p, s);
    return scattering_intensities(sol.rho, sol.pol, omega_i).total;
}

// Golden-section search for a minimum of f on [a, b].
template <typename F>
std::pair<double, double> golden_minimum(F f, double a, double b, int iterations = 60) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iterations; ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> errors;
};

Table sweep_rows(const std::vector<double>& xs, std::vector<std::string> columns, int workers,
                 const std::function<std::vector<double>(double)>& row) {
    Table t;
    t.columns = std::move(columns);
    std::vector<std::vector<double>> rows(xs.size());
    const auto errors = parallel_for(static_cast<int>(xs.size()), workers,
                                     [&](int k) { rows[static_cast<std::size_t>(k)] = row(xs[k]); });
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (errors[k].empty()) {
            t.rows.push_back(std::move(rows[k]));
        } else {
            t.rows.emplace_back(t.columns.size(), std::numeric_limits<double>::quiet_NaN());
            t.errors.push_back("point " + std::to_string(k) + " (x = " + describe_number(xs[k]) + "): " + errors[k]);
        }
    }
    return t;
}

TauGrid correlator_grid(const ExperimentConfig& cfg, const SystemParams& p) {
    if (!cfg.correlator_span_ps) return default_tau_grid(p, cfg.correlator_count);
    return TauGrid{0.0, *cfg.correlator_span_ps / (cfg.correlator_count - 1), cfg.correlator_count};
}

}  // namespace

std::string format_csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::vector<std::string> parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    std::vector<std::string> errors(static_cast<std::size_t>(std::max(count, 0)));
    std::atomic<int> next{0};
    const auto work = [&] {
        for (int k = next++; k < count; k = next++) {
            try {
                fn(k);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(k)] = e.what();
                if (errors[static_cast<std::size_t>(k)].empty()) errors[static_cast<std::size_t>(k)] = "error";
            }
        }
    };
    const int n = std::clamp(workers, 1, std::max(count, 1));
    if (n == 1) {
        work();
        return errors;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return errors;
}

PointSolution solve_point(const SystemParams& p, const SolverSettings& settings) {
    int n_max = 0;
    if (settings.n_max) {
        n_max = *settings.n_max;
    } else {
        n_max = converge_fock_cutoff(p, total_intensity, settings.fock_tol, std::min(4, settings.fock_cap),
                                     settings.fock_cap)
                    .n_max;
    }
    const HilbertSpace space(n_max);
    auto L = build_liouvillian(p, space);
    Matrix rho = steady_state(L);
    auto ops = build_system_operators(space);
    auto pol = polarization_ops(p, ops);
    const double residual = steady_state_residual(L, rho);
    return PointSolution{space, std::move(L), std::move(rho), std::move(ops), std::move(pol), residual};
}

QuasiModeParams quasi_mode_from(const ExperimentConfig& cfg) {
    return quasi_mode_params(load_permittivity_table(cfg.table), cfg.eps_b);
}

SystemParams system_from(const ExperimentConfig& cfg, const QuasiModeParams& mode) {
    GeometryParams geo;
    geo.R_nm = cfg.R_nm;
    geo.r_m_nm = cfg.r_m_nm;
    geo.s_alpha = cfg.s_alpha;
    geo.mu_enm = cfg.mu_enm;
    const double omega_x = mode.omega_sp + cfg.exciton_detuning;
    return make_system(mode, geo, omega_x, cfg.gamma_x, DriveParams{omega_x + cfg.drive_offset, cfg.rabi});
}

FanoExtrema locate_fano_extrema(std::span<const double> omega_i, std::span<const double> intensity, double omega_x) {
    if (omega_i.size() != intensity.size()) throw DimensionError("locate_fano_extrema: length mismatch");
    const std::size_t n = omega_i.size();
    std::vector<std::size_t> minima, maxima;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double v = intensity[k];
        if (v < intensity[k - 1] && v <= intensity[k + 1]) minima.push_back(k);
        if (v > intensity[k - 1] && v >= intensity[k + 1]) maxima.push_back(k);
    }
    if (minima.empty()) throw NotFoundError("no local minimum of the scattered intensity in the scan");
    if (maxima.empty()) throw NotFoundError("no local maximum of the scattered intensity in the scan");
    const auto nearest = [&](const std::vector<std::size_t>& idx, double target) {
        return *std::min_element(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(omega_i[a] - target) < std::abs(omega_i[b] - target);
        });
    };
    const std::size_t dip = nearest(minima, omega_x);
    const std::size_t peak = nearest(maxima, omega_i[dip]);
    return FanoExtrema{omega_i[dip], omega_i[peak], intensity[dip], intensity[peak]};
}

FanoExtrema refine_fano_extrema(const SystemParams& p, const FanoExtrema& coarse, double half_width,
                                const SolverSettings& settings) {
    FanoExtrema out = coarse;
    const auto [w_dip, v_dip] = golden_minimum([&](double w) { return scattered_at(p, w, settings); },
                                               coarse.omega_dip - half_width, coarse.omega_dip + half_width);
    const auto [w_peak, v_peak] = golden_minimum([&](double w) { return -scattered_at(p, w, settings); },
                                                 coarse.omega_peak - half_width, coarse.omega_peak + half_width);
    if (v_dip <= coarse.dip_value) {
        out.omega_dip = w_dip;
        out.dip_value = v_dip;
    }
    if (-v_peak >= coarse.peak_value) {
        out.omega_peak = w_peak;
        out.peak_value = -v_peak;
    }
    return out;
}

FanoExtrema find_fano_extrema(const SystemParams& p, const SweepAxis& offsets, const SolverSettings& settings,
                              int workers) {
    const auto xs = offsets.points();
    std::vector<double> omega(xs.size()), intensity(xs.size());
    const auto errors = parallel_for(static_cast<int>(xs.size()), workers, [&](int k) {
        omega[k] = p.omega_x + xs[k];
        intensity[k] = scattered_at(p, omega[k], settings);
    });
    for (const auto& e : errors)
        if (!e.empty()) throw SolverError("Fano scan failed: " + e);
    const auto coarse = locate_fano_extrema(omega, intensity, p.omega_x);
    const double step = std::abs(offsets.stop - offsets.start) / (offsets.count - 1);
    return refine_fano_extrema(p, coarse, step, settings);
}

double fano_contrast(const SystemParams& p, double omega_dip, const SolverSettings& settings) {
    const double hybrid = scattered_at(p, omega_dip, settings);
    const double baseline = scattered_at(particle_only(p), omega_dip, settings);
    return 1.0 - hybrid / baseline;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
    const SolverSettings solver{cfg.n_max, cfg.fock_tol, cfg.fock_cap};
    const QuasiModeParams mode = quasi_mode_from(cfg);
    const SystemParams base = system_from(cfg, mode);

    ExperimentResult result;
    auto& meta = result.meta;
    meta.emplace_back("derived.omega_sp_meV", describe_number(mode.omega_sp));
    meta.emplace_back("derived.eta_meV", describe_number(mode.eta));
    meta.emplace_back("derived.gamma_sp_meV", describe_number(mode.gamma_sp));
    meta.emplace_back("derived.omega_x_meV", describe_number(base.omega_x));
    meta.emplace_back("derived.g_meV", describe_number(base.coupling.g_meV));
    meta.emplace_back("derived.chi_over_mu", describe_number(base.chi_over_mu()));
    meta.emplace_back("derived.gamma_prime_meV", describe_number(base.gamma_prime()));
    meta.emplace_back("derived.mu_debye", describe_number(units::dipole_to_debye(cfg.mu_enm)));

    std::vector<int> cutoffs;
    std::vector<double> residuals;
    std::mutex stats_mutex;
    const auto record = [&](const PointSolution& s) {
        std::lock_guard lock(stats_mutex);
        cutoffs.push_back(s.space.n_max);
        residuals.push_back(s.residual);
    };
    const auto solve = [&](const SystemParams& p) {
        auto s = solve_point(p, solver);
        record(s);
        return s;
    };

    Table table;
    const auto xs = cfg.sweep.points();
    switch (cfg.kind) {
    case ExperimentKind::coupling_vs_distance:
        table = sweep_rows(xs, {"R_nm", "g_meV", "field_V_per_m", "gamma_prime_meV"}, workers, [&](double R) {
            GeometryParams geo = base.geometry;
            geo.R_nm = R;
            const auto c = coupling_constants(geo, mode);
            return std::vector<double>{R, c.g_meV, c.field_SI(), effective_qd_damping(c.g_meV, mode, base.omega_x)};
        });
        break;

    case ExperimentKind::damping_map: {
        const auto ys = cfg.sweep2->points();
        std::vector<double> flat(xs.size() * ys.size());
        for (std::size_t k = 0; k < flat.size(); ++k) flat[k] = static_cast<double>(k);
        table = sweep_rows(flat, {"R_nm", "detuning_meV", "gamma_prime_meV"}, workers, [&](double idx) {
            const auto k = static_cast<std::size_t>(idx);
            const double R = xs[k / ys.size()], det = ys[k % ys.size()];
            GeometryParams geo = base.geometry;
            geo.R_nm = R;
            const auto c = coupling_constants(geo, mode);
            return std::vector<double>{R, det, effective_qd_damping(c.g_meV, mode, mode.omega_sp + det)};
        });
        break;
    }

    case ExperimentKind::scattering_sweep:
        table = sweep_rows(xs,
                           {"omega_i_meV", "offset_meV", "I_total", "I_coherent", "I_incoherent", "I_particle_only",
                            "n_max"},
                           workers, [&](double off) {
                               SystemParams p = base;
                               p.drive.omega_i = base.omega_x + off;
                               const auto s = solve(p);
                               const auto r = scattering_intensities(s.rho, s.pol, p.drive.omega_i);
                               const auto b = solve(particle_only(p));
                               const double baseline = scattering_intensities(b.rho, b.pol, p.drive.omega_i).total;
                               return std::vector<double>{p.drive.omega_i, off,        r.total,
                                                          r.coherent,      r.incoherent, baseline,
                                                          static_cast<double>(s.space.n_max)};
                           });
        break;

    case ExperimentKind::power_series:
        table = sweep_rows(xs,
                           {"rabi_meV", "I_total", "I_coherent", "I_incoherent", "I_incoherent_dot_only", "population",
                            "n_max"},
                           workers, [&](double rabi) {
                               SystemParams p = base;
                               p.drive.rabi = rabi;
                               const auto s = solve(p);
                               const auto r = scattering_intensities(s.rho, s.pol, p.drive.omega_i);
                               const auto d = solve(dot_only(p));
                               const double bare = scattering_intensities(d.rho, d.pol, p.drive.omega_i).incoherent;
                               return std::vector<double>{rabi,         r.total, r.coherent, r.incoherent, bare,
                                                          expectation(s.rho, s.ops.excited).real(),
                                                          static_cast<double>(s.space.n_max)};
                           });
        break;

    case ExperimentKind::rf_spectrum: {
        table.columns = {"omega_s_meV", "detection_offset_meV", "S"};
        try {
            const auto s = solve(base);
            const auto grid = correlator_grid(cfg, base);
            std::vector<double> omega_s(xs.size());
            for (std::size_t k = 0; k < xs.size(); ++k) omega_s[k] = base.drive.omega_i + xs[k];
            const auto spec = fluorescence_spectrum(s.L, s.rho, s.pol, base.drive.omega_i, omega_s, grid);
            const auto r = scattering_intensities(s.rho, s.pol, base.drive.omega_i);
            double integral = 0.0;
            for (std::size_t k = 0; k + 1 < omega_s.size(); ++k)
                integral += 0.5 * (spec.values[k] + spec.values[k + 1]) * (omega_s[k + 1] - omega_s[k]);
            integral /= 2.0 * units::pi;
            for (std::size_t k = 0; k < omega_s.size(); ++k)
                table.rows.push_back({omega_s[k], omega_s[k] - base.omega_x, spec.values[k]});
            meta.emplace_back("spectrum.window", spec.window);
            meta.emplace_back("spectrum.tau_span_ps", describe_number(grid.stop()));
            meta.emplace_back("spectrum.I_incoherent", describe_number(r.incoherent));
            meta.emplace_back("spectrum.integral_over_2pi", describe_number(integral));
        } catch (const Error& e) {
            table.errors.push_back(e.what());
        }
        break;
    }

    case ExperimentKind::g2_scan:
        table = sweep_rows(xs, {"omega_i_meV", "offset_meV", "I_total", "I_total_squared", "two_photon", "g2_zero"},
                           workers, [&](double off) {
                               SystemParams p = base;
                               p.drive.omega_i = base.omega_x + off;
                               const auto s = solve(p);
                               const auto r = scattering_intensities(s.rho, s.pol, p.drive.omega_i);
                               const Matrix fourth = s.pol.minus * s.pol.minus * s.pol.plus * s.pol.plus;
                               const double two = expectation(s.rho, fourth).real();
                               return std::vector<double>{p.drive.omega_i, off, r.total, r.total * r.total, two,
                                                          two / (r.total * r.total)};
                           });
        break;

    case ExperimentKind::g2_trace: {
        table.columns = {"tau_ps", "g2"};
        try {
            SystemParams p = base;
            if (cfg.g2_target != G2Target::fixed) {
                const auto ext = find_fano_extrema(base, cfg.locate, solver, workers);
                p.drive.omega_i = cfg.g2_target == G2Target::dip ? ext.omega_dip : ext.omega_peak;
                meta.emplace_back("fano.omega_dip_meV", describe_number(ext.omega_dip));
                meta.emplace_back("fano.omega_peak_meV", describe_number(ext.omega_peak));
            }
            meta.emplace_back("g2.omega_i_meV", describe_number(p.drive.omega_i));
            const auto s = solve(p);
            const TauGrid grid{0.0, cfg.sweep.stop / (cfg.sweep.count - 1), cfg.sweep.count};
            const auto g2 = cfg.g2_source == G2Source::scattered ? g2_scattered(s.L, s.rho, s.pol, grid)
                                                                  : g2_incoherent(s.L, s.rho, s.ops, grid);
            for (std::size_t k = 0; k < g2.tau.size(); ++k) table.rows.push_back({g2.tau[k], g2.values[k]});
            meta.emplace_back("g2.max_imag", describe_number(g2.max_imag));
        } catch (const Error& e) {
            table.errors.push_back(e.what());
        }
        break;
    }

    case ExperimentKind::convergence_report:
        table = sweep_rows(xs, {"omega_i_meV", "offset_meV", "n_max", "I_total", "relative_change"}, workers,
                           [&](double off) {
                               SystemParams p = base;
                               p.drive.omega_i = base.omega_x + off;
                               const auto c = converge_fock_cutoff(p, total_intensity, cfg.fock_tol, 4, cfg.fock_cap);
                               return std::vector<double>{p.drive.omega_i, off, static_cast<double>(c.n_max), c.value,
                                                          c.relative_change};
                           });
        break;
    }

    result.columns = std::move(table.columns);
    result.rows = std::move(table.rows);
    result.failures = std::move(table.errors);
    result.all_failed = !result.failures.empty() && result.failures.size() >= result.rows.size();
    if (!cutoffs.empty()) {
        const auto [lo, hi] = std::minmax_element(cutoffs.begin(), cutoffs.end());
        meta.emplace_back("solver.n_max_used", std::to_string(*lo) + " .. " + std::to_string(*hi));
        meta.emplace_back("solver.max_residual_per_ps",
                          describe_number(*std::max_element(residuals.begin(), residuals.end())));
    }
    return result;
}

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "results.csv", std::ios::binary);
        for (std::size_t k = 0; k < result.columns.size(); ++k) csv << (k ? "," : "") << result.columns[k];
        csv << '\n';
        for (const auto& row : result.rows) {
            for (std::size_t k = 0; k < row.size(); ++k) csv << (k ? "," : "") << format_csv_number(row[k]);
            csv << '\n';
        }
    }
    std::ofstream meta(dir / "meta.txt", std::ios::binary);
    meta << "# qdmnp experiment metadata\n";
    meta << "code_version = " << QDMNP_VERSION << '\n';
    meta << "status = " << (result.failures.empty() ? "ok" : result.all_failed ? "failed" : "partial") << '\n';
    meta << "rows = " << result.rows.size() << '\n';
    for (const auto& [k, v] : cfg.describe()) meta << k << " = " << v << '\n';
    for (const auto& [k, v] : result.meta) meta << k << " = " << v << '\n';
    meta << "failures = " << result.failures.size() << '\n';
    for (std::size_t k = 0; k < result.failures.size(); ++k) meta << "failure." << k << " = " << result.failures[k] << '\n';
}

}  // namespace qdmnp
