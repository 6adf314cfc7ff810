#include "qdmnp/material_optics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qdmnp/errors.hpp"
#include "qdmnp/log.hpp"
#include "qdmnp/units.hpp"

namespace qdmnp {

namespace {

std::vector<double> column(const std::vector<PermittivitySample>& rows, double PermittivitySample::*field) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.*field);
    return out;
}

double parse_number(const std::string& cell, int line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + cell + "'", line);
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw ParseError("trailing characters in '" + cell + "'", line);
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + cell + "'", line);
    return value;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

PermittivityTable::PermittivityTable(std::vector<PermittivitySample> rows, std::string source)
    : rows_(std::move(rows)), source_(std::move(source)) {
    if (rows_.size() < 4) {
        throw ValidationError("permittivity table needs at least 4 rows, got " + std::to_string(rows_.size()));
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (k > 0 && !(rows_[k].energy_eV > rows_[k - 1].energy_eV)) {
            std::ostringstream os;
            os << "energies must be strictly increasing: row " << k + 1 << " (" << rows_[k].energy_eV
               << " eV) after " << rows_[k - 1].energy_eV << " eV";
            throw ValidationError(os.str());
        }
        if (rows_[k].eps_im < 0.0) {
            std::ostringstream os;
            os << "negative Im eps at " << rows_[k].energy_eV << " eV (passive medium expected)";
            throw ValidationError(os.str());
        }
    }
    const auto e = column(rows_, &PermittivitySample::energy_eV);
    const auto re = column(rows_, &PermittivitySample::eps_re);
    const auto im = column(rows_, &PermittivitySample::eps_im);
    re_ = MonotoneCubic<double>(e, re);
    im_ = MonotoneCubic<double>(e, im);
}

void PermittivityTable::check_domain(double energy_eV) const {
    if (!(energy_eV >= min_energy() && energy_eV <= max_energy())) {
        std::ostringstream os;
        os << "energy " << energy_eV << " eV outside table range [" << min_energy() << ", " << max_energy()
           << "] eV";
        throw DomainError(os.str());
    }
}

std::complex<double> PermittivityTable::operator()(double energy_eV) const {
    check_domain(energy_eV);
    return {re_(energy_eV), im_(energy_eV)};
}

std::complex<double> PermittivityTable::derivative(double energy_eV) const {
    check_domain(energy_eV);
    return {re_.derivative(energy_eV), im_.derivative(energy_eV)};
}

PermittivityTable parse_permittivity_table(std::istream& in, const std::string& source) {
    std::string line;
    int line_no = 0;
    std::vector<PermittivitySample> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header_seen) {
            if (t != "energy_ev,eps_re,eps_im") {
                throw ParseError("expected header 'energy_ev,eps_re,eps_im', got '" + t + "'", line_no);
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(t);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (cells.size() != 3) {
            throw ParseError("expected 3 columns, got " + std::to_string(cells.size()), line_no);
        }
        rows.push_back({parse_number(cells[0], line_no), parse_number(cells[1], line_no),
                        parse_number(cells[2], line_no)});
    }
    if (!header_seen) throw ParseError("missing header", line_no);
    return PermittivityTable(std::move(rows), source);
}

PermittivityTable load_permittivity_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open permittivity table " + path.string());
    return parse_permittivity_table(in, path.filename().string());
}

std::filesystem::path default_silver_table() {
    return std::filesystem::path(QDMNP_DATA_DIR) / "silver_johnson_christy.csv";
}

std::complex<double> permittivity(const PermittivityTable& table, double energy_eV) { return table(energy_eV); }

std::vector<double> find_sp_resonances(const PermittivityTable& table, double eps_b) {
    const auto f = [&](double w) { return table(w).real() + 2.0 * eps_b; };
    const auto& rows = table.rows();
    std::vector<double> roots;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double fk = rows[k].eps_re + 2.0 * eps_b;
        if (fk == 0.0) {
            roots.push_back(rows[k].energy_eV);
            continue;
        }
        if (k + 1 == rows.size()) break;
        const double fn = rows[k + 1].eps_re + 2.0 * eps_b;
        if (fn == 0.0 || std::signbit(fk) == std::signbit(fn)) continue;
        // The interpolant is monotone on each interval, so a sign change
        // brackets exactly one root.
        double lo = rows[k].energy_eV, hi = rows[k + 1].energy_eV;
        double flo = fk;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if (std::signbit(fm) == std::signbit(flo)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
        roots.push_back(root);
    }
    return roots;
}

double find_sp_resonance(const PermittivityTable& table, double eps_b) {
    const auto roots = find_sp_resonances(table, eps_b);
    if (roots.empty()) {
        std::ostringstream os;
        os << "Re eps_m never crosses -2 eps_b = " << -2.0 * eps_b << " in table " << table.source();
        throw NoResonanceError(os.str());
    }
    if (roots.size() > 1) {
        std::ostringstream os;
        os << "several plasmon resonance roots (eV):";
        for (double r : roots) os << ' ' << r;
        os << "; using the lowest";
        log::warn(os.str());
    }
    return roots.front();
}

QuasiModeParams quasi_mode_params(const PermittivityTable& table, double eps_b) {
    const double w_eV = find_sp_resonance(table, eps_b);
    const double slope_per_eV = table.derivative(w_eV).real();
    if (!(slope_per_eV > 0.0)) {
        std::ostringstream os;
        os << "non-positive slope d Re eps/dw = " << slope_per_eV << " /eV at " << w_eV
           << " eV; quasi-mode reduction invalid";
        throw ModelError(os.str());
    }
    QuasiModeParams q;
    q.omega_sp = 1e3 * w_eV;
    q.eta = 1e3 / slope_per_eV;
    q.gamma_sp = 2.0 * q.eta * table(w_eV).imag();
    q.eps_b = eps_b;
    if (!(q.gamma_sp > 0.0)) throw ModelError("plasmon linewidth must be positive (Im eps_m = 0 at resonance)");
    return q;
}

std::complex<double> beta_lorentzian(double omega_meV, const QuasiModeParams& q) {
    using namespace std::complex_literals;
    return 3.0i * q.eps_b * q.eta / (1.0i * (q.omega_sp - omega_meV) + 0.5 * q.gamma_sp);
}

std::complex<double> beta_exact(const PermittivityTable& table, double omega_meV, double eps_b) {
    const auto eps = table(omega_meV * 1e-3);
    return (eps - eps_b) / (2.0 * eps_b + eps);
}

void GeometryParams::validate() const {
    if (!(r_m_nm > 0.0)) throw ValidationError("particle radius must be positive");
    if (!(R_nm > r_m_nm)) throw ValidationError("distance R must exceed the particle radius");
    if (!(mu_enm > 0.0)) throw ValidationError("dipole moment must be positive");
    if (s_alpha != 2.0 && s_alpha != -1.0) throw ValidationError("polarization factor must be 2 or -1");
}

double CouplingConstants::chi_SI() const { return units::dipole_to_SI(chi_enm); }
double CouplingConstants::field_SI() const { return units::field_to_SI(field); }

CouplingConstants coupling_constants(const GeometryParams& geo, const QuasiModeParams& q) {
    using namespace units;
    geo.validate();
    const double hbar_eta_J = energy_to_SI(q.eta);
    const double r3 = std::pow(geo.r_m_nm * nm_to_m, 3);
    const double R3 = std::pow(geo.R_nm * nm_to_m, 3);
    const double field_V_m =
        geo.s_alpha / R3 * std::sqrt(3.0 * hbar_eta_J * r3 / (4.0 * pi * vacuum_permittivity_F_per_m));
    const double chi_C_m = q.eps_b * std::sqrt(12.0 * pi * hbar_eta_J * vacuum_permittivity_F_per_m * r3);

    CouplingConstants c;
    c.field = field_from_SI(field_V_m);
    c.chi_enm = dipole_from_SI(chi_C_m);
    c.g_meV = energy_from_SI(dipole_to_SI(geo.mu_enm) * field_V_m);
    return c;
}

double effective_qd_damping(double g_meV, const QuasiModeParams& q, double omega_meV) {
    const double det = q.omega_sp - omega_meV;
    return g_meV * g_meV * q.gamma_sp / (0.25 * q.gamma_sp * q.gamma_sp + det * det);
}

}  // namespace qdmnp
