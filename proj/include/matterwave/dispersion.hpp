#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "matterwave/model.hpp"

namespace matterwave::dispersion {

// Spatial character of the two de Broglie branches as the beam speed grows,
// for fixed (mu, xi < 1).  Boundaries are gamma = sqrt(mu), sqrt(mu+2) and
// sqrt(mu + xi^2 + 1/xi^2); exact ties resolve to the higher regime and are
// flagged on_boundary.
enum class Regime {
    sub_chemical,          // gamma < sqrt(mu)
    oscillatory_conjugate, // sqrt(mu) < gamma < sqrt(mu+2): conjugate pair
    both_real,             // stability window: both branches purely real
    wave_evanescent,       // wave branch purely imaginary, particle branch real
    unclassified,          // xi >= 1: evaluation works, classification refused
};

const char* to_string(Regime r);

struct RegimeClass {
    Regime tag;
    bool on_boundary;
    double gamma_low;  // sqrt(mu + 2)
    double gamma_high; // sqrt(mu + xi^2 + 1/xi^2); +inf at xi = 0
};

// Wave-like (k1) and particle-like (k2) branches, principal complex square
// roots throughout.  alpha = sqrt(E^2 - 1).
struct WavenumberPair {
    std::complex<double> k1;
    std::complex<double> k2;
    std::complex<double> alpha;
    RegimeClass regime;
};

struct RegimeComponents {
    double k1r, k1i, k2r, k2i;
};

struct CriticalSpeeds {
    double gamma_low;
    double gamma_high;
    bool window_empty; // xi >= 1: the stable range has vanished
};

struct DispersionCurve {
    std::vector<double> k;      // k_p units, strictly increasing
    std::vector<double> energy; // E = [1+(k^2+xi^2)^2] / [2(k^2+xi^2)]
    double xi;
};

// Screened plasmon dispersion E(k; xi).  E >= 1 with equality iff k^2+xi^2 = 1.
double plasmon_energy(double k, double xi);

// Unscreened characteristic wavenumbers of the coupled field system:
// k1 = sqrt(E - alpha), k2 = sqrt(E + alpha); k1 k2 = 1 for E >= 1.
WavenumberPair characteristic_wavenumbers(double E);

// Generalized de Broglie wavenumbers of a beam,
//   k_{1,2} = sqrt( (gamma^2-mu)/2 - xi^2 -/+ sqrt((gamma^2-mu)^2/4 - 1) ).
// For xi >= 1 values are still returned with regime = unclassified.
WavenumberPair debroglie_wavenumbers(const model::BeamParameters& beam);

RegimeClass classify_regime(double gamma, double mu, double xi);

// Componentwise closed forms per regime (polar evaluation with half-angle
// trig); must agree with the principal-branch complex values.
RegimeComponents regime_components(double gamma, double mu, double xi);

CriticalSpeeds critical_speeds(double mu, double xi);

// chi_{1,2} = k_{1,2} / gamma, so that k = chi * p/hbar in physical units.
// The classical dilute limit gives (0, 1).
std::pair<std::complex<double>, std::complex<double>>
debroglie_coefficients(const model::BeamParameters& beam);

// delta k / k = 1 - k2/gamma; defined where the particle branch is real.
double relative_difference(const model::BeamParameters& beam);

DispersionCurve sample_dispersion(double xi, double k_min, double k_max, int n_points);

} // namespace matterwave::dispersion
