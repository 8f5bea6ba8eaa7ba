#pragma once

#include <span>
#include <vector>

#include "matterwave/model.hpp"
#include "matterwave/pseudoforce.hpp"

namespace matterwave::lattice {

// One-dimensional lattice drive acting on the field equation.
struct LatticeParameters {
    double G;   // reciprocal lattice vector, k_p units
    double Ug;  // lattice potential amplitude, E_p units
    int n_max;  // highest harmonic index examined

    LatticeParameters(double G_, double Ug_, int n_max_);

    double a() const; // lattice constant 2 pi / G, 1/k_p units
};

enum class BraggChannel { wave_like, particle_like };

const char* to_string(BraggChannel c);

// Resonant beam speed for the n-th reciprocal harmonic,
//   gamma = sqrt( 1/(n^2 G^2 + xi^2) + n^2 G^2 + xi^2 + mu ).
struct BraggResonance {
    int n;
    BraggChannel channel;
    double gamma_res;      // v_p units
    bool in_stable_window; // gamma_res >= sqrt(mu + 2); false entries are
                           // suppressed by de Broglie instabilities
};

// Bloch-component response to the n-th lattice harmonic (undamped system):
//   Psi'' + Phi + 2E Psi = u0 cos(kd x),  Phi'' - Psi = Ug cos(nG x).
// Pure driven part; requires beam.xi = 0 and all four resonance denominators
// away from zero.
pseudoforce::FieldSolution lattice_bloch_response(const model::BeamParameters& beam,
                                                  const LatticeParameters& lat, int n,
                                                  std::span<const double> x_grid);

// Periodic boundary-value solve over one lattice period: fixes the four
// homogeneous constants from Phi, Psi and derivatives matching at x = 0 and
// x = a.  Requires a commensurate drive (kd a in 2 pi Z); the homogeneous
// constants then vanish and the solution reduces to the Bloch response.
pseudoforce::FieldSolution solve_lattice_bvp(const model::BeamParameters& beam,
                                             const LatticeParameters& lat,
                                             std::span<const double> x_grid);

std::vector<BraggResonance> bragg_resonant_speeds(double mu, double xi,
                                                  const LatticeParameters& lat);

} // namespace matterwave::lattice
