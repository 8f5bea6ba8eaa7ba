#pragma once

#include <vector>

#include "matterwave/model.hpp"
#include "matterwave/pseudoforce.hpp"

namespace matterwave::oracle {

// Which coupled field system to integrate.
enum class SystemKind {
    undamped, // Psi'' + Phi + 2E Psi = u0 cos(kd x);  Phi'' = Psi
    damped,   // adds 2 xi Psi', 2 xi Phi' friction terms
    lattice,  // undamped plus Ug cos(G x) sourcing the Phi equation
};

// Drive terms, decoupled from the beam so response scans can sweep kd.
struct Drive {
    double u0 = 0.0;
    double kd = 0.0;
    double ug = 0.0;
    double g = 0.0;
};

struct SystemSpec {
    SystemKind kind;
    model::BeamParameters beam;
    Drive drive;
};

SystemSpec from_beam(SystemKind kind, const model::BeamParameters& beam);

// Fixed-step classical 4th-order Runge-Kutta; deterministic by construction.
struct IntegratorConfig {
    double step = 1e-3;
    double x_end = 20.0;
    static constexpr const char* method = "rk4"; // the only scheme provided
};

// Integrates the 4-dimensional first-order form (Phi, Phi', Psi, Psi') from
// x = 0 and returns samples at every step.  The run is repeated at step/2;
// if the two disagree beyond 1e-8 (scaled by the solution magnitude) an
// accuracy error is raised, otherwise the finer result is returned.
pseudoforce::FieldSolution integrate_system(const SystemSpec& spec,
                                            const pseudoforce::BoundaryConditions& bc,
                                            const IntegratorConfig& cfg);

struct ResonancePeak {
    double gamma;     // drive wavenumber (= probe beam speed) at the maximum
    double amplitude; // late-x steady amplitude of Phi
};

// Sweeps the drive kd of a damped spec across [lo, hi], measures the
// persistent Phi amplitude by a least-squares cos/sin fit over the last
// third of the integration range, and returns the interior local maxima
// (parabolically refined).
std::vector<ResonancePeak> scan_resonances(const SystemSpec& base, double lo, double hi,
                                           int n_points);

} // namespace matterwave::oracle
