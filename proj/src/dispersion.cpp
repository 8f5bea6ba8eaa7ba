#include "matterwave/dispersion.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace matterwave::dispersion {

namespace {

using cplx = std::complex<double>;

constexpr double boundary_tol = 1e-12;

// Principal square root with the branch cut pinned to +0 imaginary part, so
// that negative real arguments map to +i sqrt|x| regardless of how a -0.0
// crept into the imaginary part.
cplx principal_sqrt(cplx z) {
    if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
    return std::sqrt(z);
}

// Both k^2 roots of (k^2+xi^2)^2 - 2E(k^2+xi^2) + 1 = 0.  The pair is
// computed from the large root s = E + alpha and its exact reciprocal to
// avoid the E - alpha cancellation at large E.
struct RootPair {
    cplx k1_sq, k2_sq, alpha;
};

RootPair squared_roots(double E, double xi) {
    const cplx alpha = principal_sqrt(cplx(E * E - 1.0, 0.0));
    const cplx s = cplx(E, 0.0) + alpha;
    const double xi2 = xi * xi;
    return {1.0 / s - xi2, s - xi2, alpha};
}

RegimeClass regime_for(double gamma, double mu, double xi, bool refuse_above_one) {
    if (std::isnan(gamma) || std::isnan(mu) || std::isnan(xi))
        throw DomainError("regime classification: non-finite input");
    if (gamma < 0.0 || mu < 0.0) throw DomainError("regime classification requires gamma, mu >= 0");
    if (xi < 0.0) throw DomainError("regime classification requires xi >= 0");
    RegimeClass rc;
    rc.gamma_low = std::sqrt(mu + 2.0);
    rc.gamma_high = xi == 0.0 ? std::numeric_limits<double>::infinity()
                              : std::sqrt(mu + xi * xi + 1.0 / (xi * xi));
    rc.on_boundary = false;
    if (xi >= 1.0) {
        if (refuse_above_one)
            throw UnsupportedRegimeError("regime classification is defined for xi < 1 only");
        rc.tag = Regime::unclassified;
        return rc;
    }
    const double g_mu = std::sqrt(mu);
    rc.on_boundary = std::abs(gamma - g_mu) <= boundary_tol ||
                     std::abs(gamma - rc.gamma_low) <= boundary_tol ||
                     (std::isfinite(rc.gamma_high) && std::abs(gamma - rc.gamma_high) <= boundary_tol);
    // ties go to the higher regime
    if (gamma >= rc.gamma_high)
        rc.tag = Regime::wave_evanescent;
    else if (gamma >= rc.gamma_low)
        rc.tag = Regime::both_real;
    else if (gamma >= g_mu)
        rc.tag = Regime::oscillatory_conjugate;
    else
        rc.tag = Regime::sub_chemical;
    return rc;
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
    case Regime::sub_chemical: return "sub-chemical";
    case Regime::oscillatory_conjugate: return "oscillatory-conjugate";
    case Regime::both_real: return "both-real";
    case Regime::wave_evanescent: return "wave-evanescent";
    case Regime::unclassified: return "unclassified";
    }
    return "?";
}

double plasmon_energy(double k, double xi) {
    if (!std::isfinite(k) || !std::isfinite(xi)) throw DomainError("plasmon_energy: non-finite input");
    const double u = k * k + xi * xi;
    if (u == 0.0) throw SingularInputError("plasmon_energy is singular at k = xi = 0");
    return (1.0 + u * u) / (2.0 * u);
}

WavenumberPair characteristic_wavenumbers(double E) {
    if (!std::isfinite(E)) throw DomainError("characteristic_wavenumbers: E must be finite");
    const auto r = squared_roots(E, 0.0);
    WavenumberPair p;
    p.alpha = r.alpha;
    p.k1 = principal_sqrt(r.k1_sq);
    p.k2 = principal_sqrt(r.k2_sq);
    p.regime = RegimeClass{Regime::unclassified, false, std::sqrt(2.0),
                           std::numeric_limits<double>::infinity()};
    return p;
}

WavenumberPair debroglie_wavenumbers(const model::BeamParameters& beam) {
    const auto r = squared_roots(beam.energy(), beam.xi);
    WavenumberPair p;
    p.alpha = r.alpha;
    p.k1 = principal_sqrt(r.k1_sq);
    p.k2 = principal_sqrt(r.k2_sq);
    p.regime = regime_for(beam.gamma, beam.mu, beam.xi, /*refuse_above_one=*/false);
    return p;
}

RegimeClass classify_regime(double gamma, double mu, double xi) {
    return regime_for(gamma, mu, xi, /*refuse_above_one=*/true);
}

RegimeComponents regime_components(double gamma, double mu, double xi) {
    (void)classify_regime(gamma, mu, xi); // validates and refuses xi >= 1
    const double E = 0.5 * (gamma * gamma - mu);
    const double A = E - xi * xi;      // (gamma^2-mu)/2 - xi^2
    const double B = E * E - 1.0;      // inner radicand
    RegimeComponents c{};
    if (B < 0.0) {
        // Conjugate-pair regimes (sub-chemical and oscillatory): k2^2 lies at
        // (A, +sqrt(-B)); half-angle polar form with a quadrant-aware angle.
        const double rho = std::pow(A * A - B, 0.25);
        const double half = 0.5 * std::atan2(std::sqrt(-B), A);
        c.k2r = rho * std::cos(half);
        c.k2i = rho * std::sin(half);
        c.k1r = c.k2r;
        c.k1i = -c.k2i;
    } else {
        // Real k^2 roots: purely real or purely imaginary branches.
        const double root = std::sqrt(B);
        const double r1 = A - root, r2 = A + root;
        if (r1 >= 0.0) c.k1r = std::sqrt(r1); else c.k1i = std::sqrt(-r1);
        if (r2 >= 0.0) c.k2r = std::sqrt(r2); else c.k2i = std::sqrt(-r2);
    }
    return c;
}

CriticalSpeeds critical_speeds(double mu, double xi) {
    if (!std::isfinite(mu) || mu < 0.0) throw DomainError("critical_speeds requires mu >= 0");
    if (!std::isfinite(xi) || xi < 0.0) throw DomainError("critical_speeds requires xi >= 0");
    CriticalSpeeds cs;
    cs.gamma_low = std::sqrt(mu + 2.0);
    cs.gamma_high = xi == 0.0 ? std::numeric_limits<double>::infinity()
                              : std::sqrt(mu + xi * xi + 1.0 / (xi * xi));
    cs.window_empty = xi >= 1.0;
    return cs;
}

std::pair<std::complex<double>, std::complex<double>>
debroglie_coefficients(const model::BeamParameters& beam) {
    if (beam.gamma == 0.0)
        throw SingularInputError("debroglie_coefficients: gamma = 0 divides the wavenumbers");
    const auto p = debroglie_wavenumbers(beam);
    return {p.k1 / beam.gamma, p.k2 / beam.gamma};
}

double relative_difference(const model::BeamParameters& beam) {
    const auto rc = classify_regime(beam.gamma, beam.mu, beam.xi);
    if (rc.tag != Regime::both_real && rc.tag != Regime::wave_evanescent)
        throw UndefinedQuantityError(
            std::string("relative_difference needs a real particle branch; regime is ") +
            to_string(rc.tag));
    const auto p = debroglie_wavenumbers(beam);
    return 1.0 - p.k2.real() / beam.gamma;
}

DispersionCurve sample_dispersion(double xi, double k_min, double k_max, int n_points) {
    if (!(k_min >= 0.0) || !(k_min < k_max) || !std::isfinite(k_max))
        throw DomainError("sample_dispersion requires 0 <= k_min < k_max");
    if (n_points < 2) throw DomainError("sample_dispersion requires n_points >= 2");
    DispersionCurve c;
    c.xi = xi;
    c.k.reserve(n_points);
    c.energy.reserve(n_points);
    const double dk = (k_max - k_min) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double k = i + 1 == n_points ? k_max : k_min + i * dk;
        c.k.push_back(k);
        c.energy.push_back(plasmon_energy(k, xi));
    }
    return c;
}

} // namespace matterwave::dispersion
