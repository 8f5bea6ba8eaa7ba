#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "matterwave/errors.hpp"

namespace matterwave::model {

// Normalization ledger used throughout the library ("plasmon units"):
//   wavenumbers  in k_p = sqrt(2 m E_p)/hbar
//   lengths      in 1/k_p
//   speeds       in v_p = hbar k_p / m = sqrt(2 E_p / m)
//   temperatures in T_p = E_p / k_B
//   chemical potential mu = mu0 / (2 E_p)
//   eigenvalue   E  = (eps - mu0) / (2 E_p)
// Under this convention the characteristic polynomial of the coupled field
// system is k^4 - 2 E k^2 + 1 = 0 and the de Broglie wavenumber equals the
// fractional beam speed, k_d = gamma.

// Dimensionless state of an electron beam of arbitrary degeneracy.
struct BeamParameters {
    double gamma; // beam speed v / v_p
    double mu;    // chemical potential mu0 / (2 E_p)
    double theta; // fractional temperature T / T_p
    double xi;    // screening parameter K / k_p
    double u0;    // drive amplitude V0 / E_p

    BeamParameters(double gamma_, double mu_, double theta_, double xi_, double u0_);

    double kd() const { return gamma; }                          // normalization identity
    double energy() const { return 0.5 * (gamma * gamma - mu); } // eigenvalue E
    double kinetic_energy() const { return gamma * gamma; }      // E_K
};

// Physical constants of a host metal.
struct Material {
    std::string name;
    double mu0_eV; // equilibrium chemical potential
    double Ep_eV;  // plasmon energy hbar omega_p

    Material(std::string name_, double mu0_eV_, double Ep_eV_);
};

struct MaterialScales {
    double k_p;     // 1/m
    double v_p;     // m/s
    double T_p;     // K
    double omega_p; // 1/s
};

MaterialScales material_scales(const Material& m);

// How the chemical potential entering the screening formula is normalized.
//   primary      -- mu = mu0 / (2 E_p), the library-wide convention.
//   paper_compat -- mu = mu0 / (1 eV).  Not derivable from the primary
//                   normalization; kept because published xi values for Al
//                   and Ag are reproducible only this way.
enum class ScreeningConvention { primary, paper_compat };

const char* to_string(ScreeningConvention c);

// xi(mu, theta) = sqrt( Li_{1/2}(-e^{mu/theta}) / Li_{3/2}(-e^{mu/theta}) / (2 theta) ).
// `mu` must already be normalized per `convention` (see above).
double screening_parameter(double mu, double theta, ScreeningConvention convention);

// Binds material constants to the normalized beam model.  gamma = v_fraction,
// mu = mu0/(2 Ep), xi from screening_parameter under `convention`.
BeamParameters beam_from_material(const Material& material, double v_fraction, double theta,
                                  ScreeningConvention convention, double u0);

// Built-in presets.
const Material& aluminum();
const Material& silver();
const std::vector<Material>& builtin_materials();

// Plain-text material config: `name=`, `mu0_eV=`, `Ep_eV=` keys, one value
// per line; a `name=` line starts a new material.  '#' starts a comment.
std::vector<Material> load_materials(std::istream& in);
std::vector<Material> load_materials_file(const std::string& path);

} // namespace matterwave::model
