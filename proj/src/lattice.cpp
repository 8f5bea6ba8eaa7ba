#include "matterwave/lattice.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "matterwave/constants.hpp"

namespace matterwave::lattice {

namespace {

using cplx = std::complex<double>;

constexpr double resonance_tol = 1e-8;

cplx principal_sqrt(cplx z) {
    if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
    return std::sqrt(z);
}

struct Roots {
    cplx k1_sq, k2_sq, k1, k2;
};

Roots roots_of(double E) {
    const cplx alpha = principal_sqrt(cplx(E * E - 1.0, 0.0));
    if (std::abs(alpha) <= 1e-6)
        throw DegenerateEigenvalueError("lattice: branches merge at E = 1");
    Roots r;
    r.k2_sq = cplx(E, 0.0) + alpha;
    r.k1_sq = 1.0 / r.k2_sq;
    r.k1 = principal_sqrt(r.k1_sq);
    r.k2 = principal_sqrt(r.k2_sq);
    return r;
}

void check_denominator(const Roots& r, double q, const char* which) {
    if (std::abs(cplx(q, 0.0) - r.k1) <= resonance_tol)
        throw ResonantInputError(std::string("lattice: ") + which +
                                 " coincides with the wave-like branch k1");
    if (std::abs(cplx(q, 0.0) - r.k2) <= resonance_tol)
        throw ResonantInputError(std::string("lattice: ") + which +
                                 " coincides with the particle-like branch k2");
}

// Particular solution of the doubly driven system for harmonic q = nG:
//   Phi_p = u0 cos(kd x)/Dd - Ug (q^2 - k1^2 - k2^2) cos(q x)/Dq
//   Psi_p = -u0 kd^2 cos(kd x)/Dd - Ug cos(q x)/Dq
struct Particular {
    cplx phi_kd, psi_kd; // cos(kd x) coefficients
    cplx phi_q, psi_q;   // cos(q x) coefficients
    double kd, q;

    double phi(double x) const {
        return (phi_kd * std::cos(kd * x) + phi_q * std::cos(q * x)).real();
    }
    double psi(double x) const {
        return (psi_kd * std::cos(kd * x) + psi_q * std::cos(q * x)).real();
    }
    double dphi(double x) const {
        return (-kd * phi_kd * std::sin(kd * x) - q * phi_q * std::sin(q * x)).real();
    }
    double dpsi(double x) const {
        return (-kd * psi_kd * std::sin(kd * x) - q * psi_q * std::sin(q * x)).real();
    }
};

Particular particular_solution(const Roots& r, double u0, double kd, double ug, double q) {
    const cplx Dd = (kd * kd - r.k1_sq) * (kd * kd - r.k2_sq);
    const cplx Dq = (q * q - r.k1_sq) * (q * q - r.k2_sq);
    Particular p;
    p.kd = kd;
    p.q = q;
    p.phi_kd = u0 / Dd;
    p.psi_kd = -u0 * kd * kd / Dd;
    p.phi_q = -ug * (q * q - r.k1_sq - r.k2_sq) / Dq;
    p.psi_q = -ug / Dq;
    return p;
}

void validate_grid(std::span<const double> x) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1])) throw DomainError("x grid must be strictly increasing");
}

// Gaussian elimination with partial pivoting on a 4x4 complex system.
std::array<cplx, 4> solve4(std::array<std::array<cplx, 4>, 4> m, std::array<cplx, 4> rhs) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        if (std::abs(m[piv][col]) < 1e-12)
            throw DegenerateLatticeError("lattice: singular periodicity system (k_j a in 2 pi Z?)");
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int row = col + 1; row < 4; ++row) {
            const cplx f = m[row][col] / m[col][col];
            for (int c2 = col; c2 < 4; ++c2) m[row][c2] -= f * m[col][c2];
            rhs[row] -= f * rhs[col];
        }
    }
    std::array<cplx, 4> x{};
    for (int row = 3; row >= 0; --row) {
        cplx acc = rhs[row];
        for (int c2 = row + 1; c2 < 4; ++c2) acc -= m[row][c2] * x[c2];
        x[row] = acc / m[row][row];
    }
    return x;
}

} // namespace

LatticeParameters::LatticeParameters(double G_, double Ug_, int n_max_)
    : G(G_), Ug(Ug_), n_max(n_max_) {
    if (!std::isfinite(G) || G <= 0.0) throw DomainError("lattice vector G must be > 0");
    if (!std::isfinite(Ug)) throw DomainError("lattice amplitude Ug must be finite");
    if (n_max < 1) throw DomainError("n_max must be >= 1");
}

double LatticeParameters::a() const { return 2.0 * constants::pi / G; }

const char* to_string(BraggChannel c) {
    return c == BraggChannel::wave_like ? "wave-like" : "particle-like";
}

pseudoforce::FieldSolution lattice_bloch_response(const model::BeamParameters& beam,
                                                  const LatticeParameters& lat, int n,
                                                  std::span<const double> x_grid) {
    if (n < 1) throw DomainError("harmonic index n must be >= 1");
    if (beam.xi != 0.0)
        throw DomainError("the lattice system is undamped; beam.xi must be 0");
    validate_grid(x_grid);
    const Roots r = roots_of(beam.energy());
    const double kd = beam.kd(), q = n * lat.G;
    check_denominator(r, kd, "drive kd");
    check_denominator(r, q, "lattice harmonic nG");

    const Particular p = particular_solution(r, beam.u0, kd, lat.Ug, q);
    pseudoforce::FieldSolution sol;
    sol.x.assign(x_grid.begin(), x_grid.end());
    const std::size_t m = x_grid.size();
    sol.phi.resize(m);
    sol.psi.resize(m);
    sol.driven = pseudoforce::PartSamples{std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t i = 0; i < m; ++i) {
        sol.phi[i] = p.phi(x_grid[i]);
        sol.psi[i] = p.psi(x_grid[i]);
        sol.driven->phi[i] = sol.phi[i];
        sol.driven->psi[i] = sol.psi[i];
    }
    return sol;
}

pseudoforce::FieldSolution solve_lattice_bvp(const model::BeamParameters& beam,
                                             const LatticeParameters& lat,
                                             std::span<const double> x_grid) {
    if (beam.xi != 0.0)
        throw DomainError("the lattice system is undamped; beam.xi must be 0");
    validate_grid(x_grid);
    const double a = lat.a(), kd = beam.kd();
    const double cycles = kd * a / (2.0 * constants::pi);
    if (std::abs(cycles - std::round(cycles)) > 1e-9)
        throw IncommensurateError("solve_lattice_bvp: kd a = " + std::to_string(kd * a) +
                                  " is not a multiple of 2 pi; cos(kd x) is not a-periodic");
    const Roots r = roots_of(beam.energy());
    check_denominator(r, kd, "drive kd");
    check_denominator(r, lat.G, "lattice vector G");

    const Particular p = particular_solution(r, beam.u0, kd, lat.Ug, lat.G);

    // Periodicity of the homogeneous part: mode j contributes
    //   Phi_j = a_j cos(k_j x) + b_j sin(k_j x),  Psi_j = -k_j^2 Phi_j.
    // The particular part is already a-periodic, so the four matching
    // conditions close on (a1, b1, a2, b2) alone.
    const std::array<cplx, 2> ks = {r.k1, r.k2};
    const std::array<cplx, 2> ksq = {r.k1_sq, r.k2_sq};
    std::array<std::array<cplx, 4>, 4> m{};
    for (int j = 0; j < 2; ++j) {
        const cplx ca = std::cos(ks[j] * a), sa = std::sin(ks[j] * a);
        m[0][2 * j] = ca - 1.0;          // Phi(a) - Phi(0)
        m[0][2 * j + 1] = sa;
        m[1][2 * j] = -ks[j] * sa;       // Phi'(a) - Phi'(0)
        m[1][2 * j + 1] = ks[j] * (ca - 1.0);
        m[2][2 * j] = -ksq[j] * (ca - 1.0); // Psi rows
        m[2][2 * j + 1] = -ksq[j] * sa;
        m[3][2 * j] = ksq[j] * ks[j] * sa;
        m[3][2 * j + 1] = -ksq[j] * ks[j] * (ca - 1.0);
    }
    // The commensurate particular part is a-periodic up to roundoff; feeding
    // its actual mismatch keeps the solve exact.
    const std::array<cplx, 4> rhs = {
        -(p.phi(a) - p.phi(0.0)),
        -(p.dphi(a) - p.dphi(0.0)),
        -(p.psi(a) - p.psi(0.0)),
        -(p.dpsi(a) - p.dpsi(0.0)),
    };
    const auto coeff = solve4(m, rhs);

    pseudoforce::FieldSolution sol;
    sol.x.assign(x_grid.begin(), x_grid.end());
    const std::size_t npts = x_grid.size();
    sol.phi.resize(npts);
    sol.psi.resize(npts);
    sol.homogeneous = pseudoforce::PartSamples{std::vector<double>(npts), std::vector<double>(npts)};
    sol.driven = pseudoforce::PartSamples{std::vector<double>(npts), std::vector<double>(npts)};
    for (std::size_t i = 0; i < npts; ++i) {
        const double x = x_grid[i];
        cplx hp = 0.0, hs = 0.0;
        for (int j = 0; j < 2; ++j) {
            const cplx mode = coeff[2 * j] * std::cos(ks[j] * x) + coeff[2 * j + 1] * std::sin(ks[j] * x);
            hp += mode;
            hs += -ksq[j] * mode;
        }
        sol.homogeneous->phi[i] = hp.real();
        sol.homogeneous->psi[i] = hs.real();
        sol.driven->phi[i] = p.phi(x);
        sol.driven->psi[i] = p.psi(x);
        sol.phi[i] = hp.real() + p.phi(x);
        sol.psi[i] = hs.real() + p.psi(x);
    }
    return sol;
}

std::vector<BraggResonance> bragg_resonant_speeds(double mu, double xi,
                                                  const LatticeParameters& lat) {
    if (!std::isfinite(mu) || mu < 0.0) throw DomainError("bragg_resonant_speeds requires mu >= 0");
    if (!std::isfinite(xi) || xi < 0.0) throw DomainError("bragg_resonant_speeds requires xi >= 0");
    std::vector<BraggResonance> out;
    out.reserve(lat.n_max);
    const double gamma_low = std::sqrt(mu + 2.0);
    for (int n = 1; n <= lat.n_max; ++n) {
        const double u = n * n * lat.G * lat.G + xi * xi;
        BraggResonance r;
        r.n = n;
        r.gamma_res = std::sqrt(mu + u + 1.0 / u);
        // nG below the beating point (u < 1) meets the wave branch, above it
        // the particle branch; at xi >= 1 only the particle channel survives.
        r.channel = u < 1.0 ? BraggChannel::wave_like : BraggChannel::particle_like;
        r.in_stable_window = r.gamma_res >= gamma_low - 1e-12;
        out.push_back(r);
    }
    return out;
}

} // namespace matterwave::lattice
