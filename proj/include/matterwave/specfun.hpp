#pragma once

#include "matterwave/errors.hpp"

namespace matterwave::specfun {

// Real order of a Fermi-Dirac integral.  The integral diverges for nu <= -1.
struct FermiOrder {
    double nu;
    FermiOrder(double nu_); // NOLINT(google-explicit-constructor): an order is a checked real
};

// Degeneracy state of the electron fluid: eta = mu0/(kB T), theta = T/T_p.
struct DegeneracyPoint {
    double eta;
    double theta;
    DegeneracyPoint(double eta_, double theta_);
};

// F_nu(eta) = int_0^inf x^nu / (exp(x-eta)+1) dx, relative accuracy <= 1e-10.
// Strictly positive and strictly increasing in eta.
double fermi_integral(FermiOrder order, double eta);

// The two evaluation routes behind fermi_integral, exposed so they can be
// cross-checked against each other:
//   series     -- alternating series sum_{k>=1} (-1)^{k+1} e^{k eta}/k^{nu+1},
//                 Euler / van Wijngaarden accelerated; valid for eta <= 0.
//   quadrature -- adaptive Gauss-Kronrod on the defining integral, split at
//                 x = eta with a truncated exponential tail; any finite eta.
double fermi_integral_series(FermiOrder order, double eta);
double fermi_integral_quadrature(FermiOrder order, double eta);

// Li_{nu+1}(-e^eta) = -F_nu(eta) / Gamma(nu+1).  Always negative, |value|
// increasing in eta.
double polylog_neg_exp(FermiOrder order, double eta);

// Solves F_nu(eta) = target for eta; |F_nu(eta) - target| <= 1e-10 * target.
// Bracketing by doubling from the classical-limit guess, then safeguarded
// Newton with dF_nu/deta = nu F_{nu-1} (secant fallback for nu <= 0).
double invert_eta(FermiOrder order, double target);

} // namespace matterwave::specfun
