#include "matterwave/pseudoforce.hpp"

#include <cmath>
#include <string>

#include "matterwave/constants.hpp"

namespace matterwave::pseudoforce {

namespace {

using cplx = std::complex<double>;

constexpr double resonance_tol = 1e-8; // in k_p units
// Below this the branch separation k2 - k1 is within roundoff of the 1/(2
// alpha) amplification and the general-solution matrix is unusable.
constexpr double alpha_tol = 1e-6;

cplx principal_sqrt(cplx z) {
    if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
    return std::sqrt(z);
}

struct Roots {
    cplx k1_sq, k2_sq, k1, k2, alpha;
};

Roots characteristic_roots(double E) {
    Roots r;
    r.alpha = principal_sqrt(cplx(E * E - 1.0, 0.0));
    const cplx s = cplx(E, 0.0) + r.alpha;
    r.k2_sq = s;
    r.k1_sq = 1.0 / s;
    r.k1 = principal_sqrt(r.k1_sq);
    r.k2 = principal_sqrt(r.k2_sq);
    return r;
}

void require_off_resonance(const Roots& r, double kd, const char* system) {
    if (std::abs(cplx(kd, 0.0) - r.k1) <= resonance_tol)
        throw ResonantInputError(std::string(system) +
                                 ": drive kd coincides with the wave-like branch k1");
    if (std::abs(cplx(kd, 0.0) - r.k2) <= resonance_tol)
        throw ResonantInputError(std::string(system) +
                                 ": drive kd coincides with the particle-like branch k2");
}

void require_nondegenerate(const Roots& r, const char* system) {
    if (std::abs(r.alpha) <= alpha_tol)
        throw DegenerateEigenvalueError(std::string(system) +
                                        ": alpha = sqrt(E^2-1) vanishes, branches merge at E = 1");
}

void validate_grid(std::span<const double> x) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1])) throw DomainError("x grid must be strictly increasing");
    if (!x.empty() && !std::isfinite(x.front()))
        throw DomainError("x grid must be finite");
}

PartSamples zeros(std::size_t n) { return PartSamples{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

} // namespace

std::vector<double> uniform_grid(double x0, double x1, int n_points) {
    if (!(x0 < x1) || n_points < 2) throw DomainError("uniform_grid requires x0 < x1, n >= 2");
    std::vector<double> g(n_points);
    const double dx = (x1 - x0) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) g[i] = x0 + i * dx;
    g.back() = x1;
    return g;
}

std::vector<double> scalar_pseudoresonance(double k, double k0, double kd,
                                           std::span<const double> x_grid) {
    if (!(k > 0.0)) throw DomainError("scalar_pseudoresonance requires k > 0");
    validate_grid(x_grid);
    std::vector<double> out;
    out.reserve(x_grid.size());
    if (std::abs(kd - k) <= resonance_tol) {
        for (double x : x_grid) out.push_back(k0 * k0 * x * std::sin(k * x) / (2.0 * k));
    } else {
        const double denom = kd * kd - k * k;
        for (double x : x_grid)
            out.push_back(k0 * k0 * (std::cos(k * x) - std::cos(kd * x)) / denom);
    }
    return out;
}

DampedCoefficients damped_coefficients(double E, double xi, double kd) {
    const Roots r = characteristic_roots(E);
    const double xi2 = xi * xi;
    DampedCoefficients d;
    d.beta1 = principal_sqrt(r.k1_sq - xi2);
    d.beta2 = principal_sqrt(r.k2_sq - xi2);
    const cplx w(-kd * kd, 2.0 * xi * kd);
    d.eta1 = std::norm(w + r.k1_sq);
    d.eta2 = std::norm(w + r.k2_sq);
    return d;
}

// ---------------------------------------------------------------------------
// Undamped system.  With even drive and zero derivative boundary values the
// solution is a sum of three cosines,
//   Phi = P1 cos(k1 x) + P2 cos(k2 x) + Q cos(kd x),   Psi = Phi'',
// where Q = u0 / ((kd^2-k1^2)(kd^2-k2^2)) and P1, P2 follow from the values
// at x = 0.  Complex branches are handled by evaluating the modes in complex
// arithmetic; conjugate symmetry keeps the total real.
// ---------------------------------------------------------------------------

FieldSolution solve_undamped_system(double E, double u0, double kd, const BoundaryConditions& bc,
                                    std::span<const double> x_grid) {
    if (bc.dphi0 != 0.0 || bc.dpsi0 != 0.0)
        throw DomainError("solve_undamped supports zero derivative boundary values only");
    validate_grid(x_grid);
    const Roots r = characteristic_roots(E);
    require_nondegenerate(r, "solve_undamped");
    require_off_resonance(r, kd, "solve_undamped");

    const cplx two_alpha = r.k2_sq - r.k1_sq;
    const cplx D = (kd * kd - r.k1_sq) * (kd * kd - r.k2_sq);
    const cplx Q = u0 / D;

    // homogeneous coefficients carry the boundary values alone
    const cplx P1h = (bc.psi0 + r.k2_sq * bc.phi0) / two_alpha;
    const cplx P2h = -(bc.psi0 + r.k1_sq * bc.phi0) / two_alpha;
    // drive-induced cosine corrections cancel the driven part at x = 0
    const cplx P1d = u0 * (kd * kd - r.k2_sq) / (two_alpha * D);
    const cplx P2d = -u0 * (kd * kd - r.k1_sq) / (two_alpha * D);

    const std::size_t n = x_grid.size();
    FieldSolution sol;
    sol.x.assign(x_grid.begin(), x_grid.end());
    sol.phi.resize(n);
    sol.psi.resize(n);
    sol.homogeneous = zeros(n);
    sol.driven = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x_grid[i];
        const cplx c1 = std::cos(r.k1 * x), c2 = std::cos(r.k2 * x);
        const double cd = std::cos(kd * x);
        const cplx ph = P1h * c1 + P2h * c2;
        const cplx pd = P1d * c1 + P2d * c2 + Q * cd;
        const cplx sh = -r.k1_sq * P1h * c1 - r.k2_sq * P2h * c2;
        const cplx sd = -r.k1_sq * P1d * c1 - r.k2_sq * P2d * c2 - kd * kd * Q * cd;
        sol.homogeneous->phi[i] = ph.real();
        sol.homogeneous->psi[i] = sh.real();
        sol.driven->phi[i] = pd.real();
        sol.driven->psi[i] = sd.real();
        sol.phi[i] = ph.real() + pd.real();
        sol.psi[i] = sh.real() + sd.real();
    }
    return sol;
}

FieldSolution solve_undamped(const model::BeamParameters& beam, const BoundaryConditions& bc,
                             std::span<const double> x_grid) {
    return solve_undamped_system(beam.energy(), beam.u0, beam.kd(), bc, x_grid);
}

// ---------------------------------------------------------------------------
// Screened system.  Steady part from the phasor solution
//   Phi_s = Re[ Fhat e^{i kd x} ],  Fhat = u0 / ((w+k1^2)(w+k2^2)),
//   Psi_s = Re[ w Fhat e^{i kd x} ],  w = -kd^2 + 2 i xi kd,
// so |Fhat| = u0 / sqrt(eta1 eta2).  Transient part from the homogeneous
// modes e^{(-xi +/- i beta_j) x} with Psi = -k_j^2 Phi per mode; the four
// constants are fitted to the boundary values.
// ---------------------------------------------------------------------------

namespace {

struct DampedForm {
    Roots roots;
    cplx beta1, beta2;
    cplx phi_hat, psi_hat; // steady phasors
    cplx a1, b1, a2, b2;   // transient mode coefficients
    double xi, kd;
};

DampedForm damped_form(double E, double xi, double u0, double kd, const BoundaryConditions& bc) {
    DampedForm f;
    f.xi = xi;
    f.kd = kd;
    f.roots = characteristic_roots(E);
    require_nondegenerate(f.roots, "solve_damped");
    const double xi2 = xi * xi;
    f.beta1 = principal_sqrt(f.roots.k1_sq - xi2);
    f.beta2 = principal_sqrt(f.roots.k2_sq - xi2);
    if (std::abs(f.beta1) <= 1e-6 || std::abs(f.beta2) <= 1e-6)
        throw DegenerateEigenvalueError("solve_damped: a shifted wavenumber beta_j vanishes (k_j^2 = xi^2)");

    const cplx w(-kd * kd, 2.0 * xi * kd);
    f.phi_hat = u0 / ((w + f.roots.k1_sq) * (w + f.roots.k2_sq));
    f.psi_hat = w * f.phi_hat;

    // Boundary residual the transient has to supply.
    const double c1 = bc.phi0 - f.phi_hat.real();
    const double c2 = bc.psi0 - f.psi_hat.real();
    const double c3 = bc.dphi0 + kd * f.phi_hat.imag(); // d/dx Re[ph e^{ikd x}](0) = -kd Im ph
    const double c4 = bc.dpsi0 + kd * f.psi_hat.imag();

    // Values: a1 + a2 = c1, -k1^2 a1 - k2^2 a2 = c2.
    const cplx det = f.roots.k2_sq - f.roots.k1_sq; // 2 alpha
    f.a1 = (f.roots.k2_sq * c1 + c2) / det;
    f.a2 = -(f.roots.k1_sq * c1 + c2) / det;
    // Slopes: u_j = -xi a_j + beta_j b_j obey the same 2x2 system.
    const cplx u1 = (f.roots.k2_sq * c3 + c4) / det;
    const cplx u2 = -(f.roots.k1_sq * c3 + c4) / det;
    f.b1 = (u1 + xi * f.a1) / f.beta1;
    f.b2 = (u2 + xi * f.a2) / f.beta2;
    return f;
}

} // namespace

FieldSolution solve_damped_system(double E, double xi, double u0, double kd,
                                  const BoundaryConditions& bc, std::span<const double> x_grid) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("solve_damped requires xi >= 0");
    if (xi == 0.0) return solve_undamped_system(E, u0, kd, bc, x_grid);
    validate_grid(x_grid);
    const DampedForm f = damped_form(E, xi, u0, kd, bc);

    const std::size_t n = x_grid.size();
    FieldSolution sol;
    sol.x.assign(x_grid.begin(), x_grid.end());
    sol.phi.resize(n);
    sol.psi.resize(n);
    sol.transient = zeros(n);
    sol.steady = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x_grid[i];
        const double decay = std::exp(-f.xi * x);
        const cplx m1 = f.a1 * std::cos(f.beta1 * x) + f.b1 * std::sin(f.beta1 * x);
        const cplx m2 = f.a2 * std::cos(f.beta2 * x) + f.b2 * std::sin(f.beta2 * x);
        const cplx tr_phi = decay * (m1 + m2);
        const cplx tr_psi = decay * (-f.roots.k1_sq * m1 - f.roots.k2_sq * m2);
        const cplx rot = std::polar(1.0, f.kd * x);
        const double st_phi = (f.phi_hat * rot).real();
        const double st_psi = (f.psi_hat * rot).real();
        sol.transient->phi[i] = tr_phi.real();
        sol.transient->psi[i] = tr_psi.real();
        sol.steady->phi[i] = st_phi;
        sol.steady->psi[i] = st_psi;
        sol.phi[i] = tr_phi.real() + st_phi;
        sol.psi[i] = tr_psi.real() + st_psi;
    }
    return sol;
}

FieldSolution solve_damped(const model::BeamParameters& beam, std::span<const double> x_grid,
                           const BoundaryConditions& bc) {
    return solve_damped_system(beam.energy(), beam.xi, beam.u0, beam.kd(), bc, x_grid);
}

SteadyStateResponse steady_state_response(double E, double xi, double u0, double kd) {
    if (!(xi > 0.0)) throw DomainError("steady_state requires xi > 0");
    if (kd == 0.0) throw NoDriveError("steady_state: kd = 0 carries no propagating drive");
    const Roots r = characteristic_roots(E);
    const cplx w(-kd * kd, 2.0 * xi * kd);
    const cplx phi_hat = u0 / ((w + r.k1_sq) * (w + r.k2_sq));
    const cplx psi_hat = w * phi_hat;
    SteadyStateResponse s;
    s.amp_phi = std::abs(phi_hat);
    s.amp_psi = std::abs(psi_hat);
    // Re[h e^{i kd x}] = |h| cos(kd x - theta) with theta = -arg h, folded
    // into (-pi, pi].
    const double pi = constants::pi;
    s.theta_phi = -std::arg(phi_hat);
    s.theta_psi = -std::arg(psi_hat);
    if (s.theta_phi <= -pi) s.theta_phi += 2.0 * pi;
    if (s.theta_psi <= -pi) s.theta_psi += 2.0 * pi;
    return s;
}

SteadyStateResponse steady_state(const model::BeamParameters& beam) {
    return steady_state_response(beam.energy(), beam.xi, beam.u0, beam.kd());
}

} // namespace matterwave::pseudoforce
