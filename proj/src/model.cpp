#include "matterwave/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "matterwave/constants.hpp"
#include "matterwave/specfun.hpp"

namespace matterwave::model {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

BeamParameters::BeamParameters(double gamma_, double mu_, double theta_, double xi_, double u0_)
    : gamma(gamma_), mu(mu_), theta(theta_), xi(xi_), u0(u0_) {
    require_finite(gamma, "gamma");
    require_finite(mu, "mu");
    require_finite(u0, "u0");
    if (gamma < 0.0) throw DomainError("beam speed gamma must be >= 0");
    if (!std::isfinite(theta) || theta <= 0.0) throw DomainError("theta must be > 0");
    if (!std::isfinite(xi) || xi < 0.0) throw DomainError("screening parameter xi must be >= 0");
}

Material::Material(std::string name_, double mu0_eV_, double Ep_eV_)
    : name(std::move(name_)), mu0_eV(mu0_eV_), Ep_eV(Ep_eV_) {
    if (!std::isfinite(mu0_eV) || mu0_eV <= 0.0)
        throw DomainError("material '" + name + "': mu0_eV must be > 0");
    if (!std::isfinite(Ep_eV) || Ep_eV <= 0.0)
        throw DomainError("material '" + name + "': Ep_eV must be > 0");
}

MaterialScales material_scales(const Material& m) {
    using namespace constants;
    const double Ep = m.Ep_eV * electron_volt;
    MaterialScales s;
    s.k_p = std::sqrt(2.0 * electron_mass * Ep) / hbar;
    s.v_p = hbar * s.k_p / electron_mass;
    s.T_p = Ep / boltzmann;
    s.omega_p = Ep / hbar;
    return s;
}

const char* to_string(ScreeningConvention c) {
    return c == ScreeningConvention::primary ? "primary" : "paper-compat";
}

double screening_parameter(double mu, double theta, ScreeningConvention /*convention*/) {
    // The formula is convention-independent; the convention fixes which
    // normalization of mu the caller feeds in.
    if (!std::isfinite(theta) || theta <= 0.0) throw DomainError("theta must be > 0");
    require_finite(mu, "mu");
    const double x = mu / theta;
    // Deep classical limit: both polylogs underflow to -e^x; their ratio is 1.
    if (x < -700.0) return 1.0 / std::sqrt(2.0 * theta);
    const double li_half = specfun::polylog_neg_exp(specfun::FermiOrder(-0.5), x);
    const double li_three_half = specfun::polylog_neg_exp(specfun::FermiOrder(0.5), x);
    // Both polylogs are negative; the ratio is positive.
    return std::sqrt(li_half / li_three_half / (2.0 * theta));
}

BeamParameters beam_from_material(const Material& material, double v_fraction, double theta,
                                  ScreeningConvention convention, double u0) {
    if (!std::isfinite(v_fraction) || v_fraction < 0.0)
        throw DomainError("v_fraction must be >= 0");
    const double mu = material.mu0_eV / (2.0 * material.Ep_eV);
    const double mu_for_xi =
        convention == ScreeningConvention::primary ? mu : material.mu0_eV;
    const double xi = screening_parameter(mu_for_xi, theta, convention);
    return BeamParameters(v_fraction, mu, theta, xi, u0);
}

const Material& aluminum() {
    static const Material m("Al", 11.7, 15.0);
    return m;
}

const Material& silver() {
    static const Material m("Ag", 5.49, 3.76);
    return m;
}

const std::vector<Material>& builtin_materials() {
    static const std::vector<Material> v = {aluminum(), silver()};
    return v;
}

std::vector<Material> load_materials(std::istream& in) {
    std::vector<Material> out;
    std::string name;
    double mu0 = 0.0, ep = 0.0;
    bool have_mu0 = false, have_ep = false;

    auto flush = [&]() {
        if (name.empty()) return;
        if (!have_mu0 || !have_ep)
            throw DomainError("material '" + name + "': config needs both mu0_eV and Ep_eV");
        out.emplace_back(name, mu0, ep);
        name.clear();
        have_mu0 = have_ep = false;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("material config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "name") {
            flush();
            name = value;
        } else if (key == "mu0_eV" || key == "Ep_eV") {
            if (name.empty())
                throw DomainError("material config line " + std::to_string(lineno) +
                                  ": '" + key + "' before any name=");
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != value.size() || value.empty())
                throw DomainError("material config line " + std::to_string(lineno) +
                                  ": bad number '" + value + "'");
            (key == "mu0_eV" ? mu0 : ep) = v;
            (key == "mu0_eV" ? have_mu0 : have_ep) = true;
        } else {
            throw DomainError("material config line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        }
    }
    flush();
    return out;
}

std::vector<Material> load_materials_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open material config '" + path + "'");
    return load_materials(in);
}

} // namespace matterwave::model
