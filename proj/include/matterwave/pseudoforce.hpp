#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "matterwave/model.hpp"

namespace matterwave::pseudoforce {

// Values and first derivatives at x = 0.
struct BoundaryConditions {
    double phi0 = 0.0;
    double psi0 = 0.0;
    double dphi0 = 0.0;
    double dpsi0 = 0.0;
};

struct PartSamples {
    std::vector<double> phi;
    std::vector<double> psi;
};

// Sampled field solution Phi(x), Psi(x) with an optional decomposition into
// additive parts (whichever the producing solver defines; present parts sum
// to the totals).
struct FieldSolution {
    std::vector<double> x; // strictly increasing, units 1/k_p
    std::vector<double> phi;
    std::vector<double> psi;
    std::optional<PartSamples> homogeneous;
    std::optional<PartSamples> driven;
    std::optional<PartSamples> transient;
    std::optional<PartSamples> steady;
};

std::vector<double> uniform_grid(double x0, double x1, int n_points);

// Shifted oscillation wavenumbers beta_j = sqrt(k_j^2 - xi^2) and resonance
// denominators eta_j = (kd^2 - k_j^2)^2 + 4 kd^2 xi^2 of the screened system.
// eta_j > 0 whenever xi > 0 and kd > 0, so the driven response never blows up.
struct DampedCoefficients {
    std::complex<double> beta1;
    std::complex<double> beta2;
    double eta1;
    double eta2;
};

DampedCoefficients damped_coefficients(double E, double xi, double kd);

// Amplitude and phase of the persistent component A cos(kd x - theta).
struct SteadyStateResponse {
    double amp_phi;   // = u0 / sqrt(eta1 eta2)
    double amp_psi;   // = u0 kd sqrt(kd^2 + 4 xi^2) / sqrt(eta1 eta2)
    double theta_phi; // in (-pi, pi]
    double theta_psi;
};

// Driven scalar mode Psi'' + k^2 Psi = k0^2 cos(kd x) with Psi(0) = Psi'(0) = 0:
//   Psi(x) = k0^2 [cos(k x) - cos(kd x)] / (kd^2 - k^2),
// switching to the resonant limit form k0^2 x sin(k x) / (2k) at kd ~ k.
std::vector<double> scalar_pseudoresonance(double k, double k0, double kd,
                                           std::span<const double> x_grid);

// Closed form of the undamped coupled system
//   Psi'' + Phi + 2E Psi = u0 cos(kd x),  Phi'' - Psi = 0
// with Phi(0), Psi(0) prescribed and zero derivatives (nonzero derivative
// boundary values are rejected).  Parts: homogeneous + driven.
FieldSolution solve_undamped(const model::BeamParameters& beam, const BoundaryConditions& bc,
                             std::span<const double> x_grid);

// Same system with explicit eigenvalue and drive, decoupled from a beam.
FieldSolution solve_undamped_system(double E, double u0, double kd, const BoundaryConditions& bc,
                                    std::span<const double> x_grid);

// Closed form of the screened (pseudodamped) system
//   Psi'' + 2 xi Psi' + Phi + 2E Psi = u0 cos(kd x),
//   Phi'' + 2 xi Phi' - Psi = 0.
// Parts: transient (e^{-xi x} modes fitted to the boundary values) + steady.
// xi = 0 delegates to solve_undamped.
FieldSolution solve_damped(const model::BeamParameters& beam, std::span<const double> x_grid,
                           const BoundaryConditions& bc = {});

FieldSolution solve_damped_system(double E, double xi, double u0, double kd,
                                  const BoundaryConditions& bc, std::span<const double> x_grid);

// Persistent oscillation of the screened system; requires xi > 0 and kd > 0.
SteadyStateResponse steady_state(const model::BeamParameters& beam);

// Decoupled-drive variant used for response scans over kd.
SteadyStateResponse steady_state_response(double E, double xi, double u0, double kd);

} // namespace matterwave::pseudoforce
