#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "matterwave/dispersion.hpp"
#include "support/oracles.hpp"

using namespace matterwave;
using dispersion::Regime;
using model::BeamParameters;

namespace {
BeamParameters beam(double gamma, double mu, double xi) {
    return BeamParameters(gamma, mu, 0.1, xi, 0.1);
}
} // namespace

TEST_CASE("plasmon energy closed form") {
    CHECK(dispersion::plasmon_energy(1.0, 0.0) == 1.0);
    CHECK(dispersion::plasmon_energy(2.0, 0.0) == doctest::Approx(2.125).epsilon(1e-15));
    CHECK(dispersion::plasmon_energy(1.0, 1.0) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK_THROWS_AS((void)dispersion::plasmon_energy(0.0, 0.0), SingularInputError);
    // E >= 1, equality exactly at k^2 + xi^2 = 1
    for (double k = 0.1; k < 4.0; k += 0.13)
        CHECK(dispersion::plasmon_energy(k, 0.3) >= 1.0);
}

TEST_CASE("characteristic wavenumbers and complementarity") {
    const auto at1 = dispersion::characteristic_wavenumbers(1.0);
    CHECK(std::abs(at1.k1 - 1.0) <= 1e-12);
    CHECK(std::abs(at1.k2 - 1.0) <= 1e-12);
    CHECK(std::abs(at1.alpha) <= 1e-12);

    const auto at125 = dispersion::characteristic_wavenumbers(1.25);
    CHECK(at125.alpha.real() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(at125.k1.real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(at125.k2.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    const auto at2 = dispersion::characteristic_wavenumbers(2.0);
    CHECK(at2.k1.real() == doctest::Approx(0.51763809020504152).epsilon(1e-13));
    CHECK(at2.k2.real() == doctest::Approx(1.93185165257813657).epsilon(1e-13));

    oracles::Rng rng(31415);
    for (int i = 0; i < 2000; ++i) {
        const double E = rng.uniform(1.0, 1000.0);
        const auto p = dispersion::characteristic_wavenumbers(E);
        CHECK(std::abs(p.k1 * p.k2 - 1.0) <= 1e-12);
    }
}

TEST_CASE("de Broglie wavenumbers") {
    const auto real_case = dispersion::debroglie_wavenumbers(beam(2.0, 0.0, 0.0));
    CHECK(real_case.k1.imag() == 0.0);
    CHECK(real_case.k2.imag() == 0.0);
    CHECK(real_case.k1.real() == doctest::Approx(0.51763809020504152).epsilon(1e-13));
    CHECK(real_case.k2.real() == doctest::Approx(1.93185165257813657).epsilon(1e-13));

    // below the critical speed: conjugate pair on the unit circle
    const auto conj_case = dispersion::debroglie_wavenumbers(beam(1.0, 0.0, 0.0));
    CHECK(std::abs(conj_case.k1 - std::conj(conj_case.k2)) <= 1e-14);
    CHECK(std::abs(std::abs(conj_case.k1) - 1.0) <= 1e-14);
    CHECK(conj_case.k1.imag() != 0.0);

    // single-particle limit
    const auto fast = dispersion::debroglie_wavenumbers(beam(1e3, 0.0, 0.0));
    CHECK(fast.k2.real() / 1e3 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(fast.k1) <= 1.1e-3);

    // screened values solve the quartic (k^2+xi^2)^2 - 2E(k^2+xi^2) + 1 = 0
    oracles::Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        const double g = rng.uniform(0.05, 5.0), mu = rng.uniform(0.0, 2.0),
                     xi = rng.uniform(0.0, 1.5);
        const auto p = dispersion::debroglie_wavenumbers(beam(g, mu, xi));
        const double E = 0.5 * (g * g - mu);
        for (auto k : {p.k1, p.k2}) {
            const std::complex<double> u = k * k + xi * xi;
            CHECK(std::abs(u * u - 2.0 * E * u + 1.0) <= 1e-10);
            // real branches land back on the dispersion curve
            if (k.imag() == 0.0 && k.real() > 0.0)
                CHECK(dispersion::plasmon_energy(k.real(), xi) ==
                      doctest::Approx(E).epsilon(1e-12));
        }
    }
}

TEST_CASE("regime classification") {
    CHECK(dispersion::classify_regime(1.0, 0.0, 0.0).tag == Regime::oscillatory_conjugate);
    CHECK(dispersion::classify_regime(2.0, 0.0, 0.5).tag == Regime::both_real);
    CHECK(dispersion::classify_regime(2.5, 0.0, 0.5).tag == Regime::wave_evanescent);
    CHECK(dispersion::classify_regime(0.5, 1.0, 0.0).tag == Regime::sub_chemical);
    // xi = 0: no upper boundary
    CHECK(dispersion::classify_regime(100.0, 0.0, 0.0).tag == Regime::both_real);
    CHECK_THROWS_AS((void)dispersion::classify_regime(1.0, 0.0, 1.0), UnsupportedRegimeError);
    CHECK_THROWS_AS((void)dispersion::classify_regime(-1.0, 0.0, 0.0), DomainError);

    // ties resolve upward and are flagged
    const double g_low = std::sqrt(2.0);
    const auto tie = dispersion::classify_regime(g_low, 0.0, 0.5);
    CHECK(tie.tag == Regime::both_real);
    CHECK(tie.on_boundary);
    const auto off = dispersion::classify_regime(g_low + 1e-6, 0.0, 0.5);
    CHECK_FALSE(off.on_boundary);

    // tags partition gamma > 0 for fixed mu, xi < 1
    oracles::Rng rng(4242);
    for (int i = 0; i < 200; ++i) {
        const double mu = rng.uniform(0.0, 2.0), xi = rng.uniform(0.0, 0.99);
        double prev_rank = -1.0;
        for (double g = 0.01; g < 5.0; g += 0.05) {
            const auto rc = dispersion::classify_regime(g, mu, xi);
            const double rank = static_cast<double>(rc.tag);
            CHECK(rank >= prev_rank); // regime index never decreases with gamma
            prev_rank = rank;
        }
    }
}

TEST_CASE("regime components equal the principal-branch evaluation") {
    // the three worked examples
    const auto br = dispersion::regime_components(2.0, 0.0, 0.0);
    CHECK(br.k1i == 0.0);
    CHECK(br.k2i == 0.0);
    CHECK(br.k1r == doctest::Approx(0.51763809020504152).epsilon(1e-12));
    CHECK(br.k2r == doctest::Approx(1.93185165257813657).epsilon(1e-12));

    const auto oc = dispersion::regime_components(1.0, 0.0, 0.0);
    CHECK(oc.k1r == doctest::Approx(oc.k2r).epsilon(1e-14));
    CHECK(oc.k1i == doctest::Approx(-oc.k2i).epsilon(1e-14));
    CHECK(oc.k2i > 0.0);

    const auto we = dispersion::regime_components(3.0, 0.0, 0.5);
    CHECK(we.k1r == 0.0);
    CHECK(we.k1i > 0.0);
    CHECK(we.k2i == 0.0);

    // randomized componentwise agreement (the full grid runs in acceptance)
    oracles::Rng rng(2718);
    for (int i = 0; i < 2000; ++i) {
        const double g = rng.uniform(1e-3, 5.0), mu = rng.uniform(0.0, 2.0),
                     xi = rng.uniform(0.0, 0.99);
        const auto c = dispersion::regime_components(g, mu, xi);
        const auto p = dispersion::debroglie_wavenumbers(beam(g, mu, xi));
        CHECK(std::abs(c.k1r - p.k1.real()) <= 1e-10);
        CHECK(std::abs(c.k1i - p.k1.imag()) <= 1e-10);
        CHECK(std::abs(c.k2r - p.k2.real()) <= 1e-10);
        CHECK(std::abs(c.k2i - p.k2.imag()) <= 1e-10);
    }
}

TEST_CASE("critical speeds") {
    const auto unscreened = dispersion::critical_speeds(0.0, 0.0);
    CHECK(unscreened.gamma_low == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::isinf(unscreened.gamma_high));
    CHECK_FALSE(unscreened.window_empty);

    const auto screened = dispersion::critical_speeds(0.0, 0.5);
    CHECK(screened.gamma_low == doctest::Approx(1.4142135623730951).epsilon(1e-14));
    CHECK(screened.gamma_high == doctest::Approx(2.0615528128088303).epsilon(1e-14));

    // window closes as xi -> 1
    const auto tight = dispersion::critical_speeds(0.0, 0.999);
    CHECK(tight.gamma_high - tight.gamma_low <= 1e-3);
    CHECK(tight.gamma_high >= tight.gamma_low);
    CHECK(dispersion::critical_speeds(0.3, 1.0).window_empty);
}

TEST_CASE("de Broglie coefficients") {
    const auto [chi1, chi2] = dispersion::debroglie_coefficients(beam(2.0, 0.0, 0.0));
    CHECK(chi1.real() == doctest::Approx(0.25881904510252074).epsilon(1e-13));
    CHECK(chi2.real() == doctest::Approx(0.96592582628906829).epsilon(1e-13));

    const auto [m1, m2] = dispersion::debroglie_coefficients(beam(std::sqrt(2.0), 0.0, 0.0));
    CHECK(std::abs(m1 - m2) <= 1e-7); // branch-meeting point
    CHECK(m1.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));

    const auto [c1, c2] = dispersion::debroglie_coefficients(beam(100.0, 1e-6, 0.0));
    CHECK(std::abs(c1) <= 1e-3);
    CHECK(std::abs(c2 - 1.0) <= 1e-3);

    CHECK_THROWS_AS((void)dispersion::debroglie_coefficients(beam(0.0, 0.0, 0.0)),
                    SingularInputError);
}

TEST_CASE("relative wavenumber difference") {
    CHECK(dispersion::relative_difference(beam(2.0, 0.0, 0.0)) ==
          doctest::Approx(0.034074173710931688).epsilon(1e-12));
    // with screening: 1 - k2/gamma where k2 = 1 + sqrt(3)/2 at these inputs
    CHECK(dispersion::relative_difference(beam(2.0, 0.0, 0.5)) ==
          doctest::Approx(0.066987298107780702).epsilon(1e-12));
    CHECK(dispersion::relative_difference(beam(1e4, 0.0, 0.0)) <= 1e-7);
    CHECK_THROWS_AS((void)dispersion::relative_difference(beam(1.0, 0.0, 0.0)),
                    UndefinedQuantityError);

    // matches the radical-chain form written directly in gamma
    oracles::Rng rng(5150);
    for (int i = 0; i < 200; ++i) {
        const double mu = rng.uniform(0.0, 1.5), xi = rng.uniform(0.0, 0.9);
        const double g_low = std::sqrt(mu + 2.0);
        const double g_high = xi == 0.0 ? g_low + 3.0 : std::sqrt(mu + xi * xi + 1.0 / (xi * xi));
        const double g = rng.uniform(g_low + 1e-3, g_high - 1e-3);
        const double direct = 1.0 - std::sqrt(0.5 * (1.0 - mu / (g * g)) - xi * xi / (g * g) +
                                              std::sqrt(0.25 * std::pow(1.0 - mu / (g * g), 2) -
                                                        1.0 / std::pow(g, 4)));
        CHECK(dispersion::relative_difference(beam(g, mu, xi)) ==
              doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("sampled dispersion curve") {
    // grid containing k = 1 exactly: minimum sits there at E = 1
    const auto curve = dispersion::sample_dispersion(0.0, 0.5, 1.5, 101);
    double emin = 1e300, kmin = 0.0;
    for (std::size_t i = 0; i < curve.k.size(); ++i) {
        CHECK(curve.energy[i] ==
              doctest::Approx(dispersion::plasmon_energy(curve.k[i], 0.0)).epsilon(1e-12));
        if (i) CHECK(curve.k[i] > curve.k[i - 1]);
        if (curve.energy[i] < emin) {
            emin = curve.energy[i];
            kmin = curve.k[i];
        }
    }
    CHECK(emin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kmin == doctest::Approx(1.0).epsilon(1e-12));

    // particle-branch asymptote at k = 10
    CHECK(dispersion::plasmon_energy(10.0, 0.0) / (0.5 * 100.0) ==
          doctest::Approx(1.0001).epsilon(2e-4));

    // xi = 1: wave branch gone, curve monotone increasing from E(0) = 1
    const auto flat = dispersion::sample_dispersion(1.0, 0.0, 3.0, 300);
    CHECK(flat.energy.front() == doctest::Approx(1.0).epsilon(1e-4));
    for (std::size_t i = 1; i < flat.energy.size(); ++i)
        CHECK(flat.energy[i] >= flat.energy[i - 1]);

    CHECK_THROWS_AS((void)dispersion::sample_dispersion(0.0, 2.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS((void)dispersion::sample_dispersion(0.0, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("dispersion gap with and without screening") {
    for (double xi : {0.0, 0.4, 0.8, 1.0, 1.3}) {
        double emin = 1e300;
        for (double k = 1e-4; k < 6.0; k += 1e-4)
            emin = std::min(emin, dispersion::plasmon_energy(k, xi));
        const double expected = xi >= 1.0 ? (1.0 + std::pow(xi, 4)) / (2.0 * xi * xi) : 1.0;
        CHECK(std::abs(emin - expected) <= 1e-7); // grid-limited; exact value checked below
        if (xi < 1.0)
            CHECK(dispersion::plasmon_energy(std::sqrt(1.0 - xi * xi), xi) ==
                  doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("branches are continuous across regime boundaries") {
    // At gamma = sqrt(mu) the branches are smooth, so a tight tolerance
    // applies.  The other two boundaries are square-root branch points:
    // k varies like sqrt(|gamma - gamma_c|) there, so the left/right gap at
    // distance d scales like sqrt(d); the checks below assert that scaling
    // and the shrink-to-zero behavior rather than a fixed Lipschitz bound.
    for (double xi : {0.3, 0.6}) {
        const double mu = 0.7;
        const auto s0 = dispersion::debroglie_wavenumbers(beam(std::sqrt(mu) - 1e-8, mu, xi));
        const auto s1 = dispersion::debroglie_wavenumbers(beam(std::sqrt(mu) + 1e-8, mu, xi));
        CHECK(std::abs(s0.k1 - s1.k1) <= 1e-6);
        CHECK(std::abs(s0.k2 - s1.k2) <= 1e-6);

        const auto cs = dispersion::critical_speeds(mu, xi);
        for (double gc : {cs.gamma_low, cs.gamma_high}) {
            double prev_gap = 1e300;
            for (double d : {1e-4, 1e-6, 1e-8}) {
                const auto lo = dispersion::debroglie_wavenumbers(beam(gc - d, mu, xi));
                const auto hi = dispersion::debroglie_wavenumbers(beam(gc + d, mu, xi));
                const double gap =
                    std::max(std::abs(lo.k1 - hi.k1), std::abs(lo.k2 - hi.k2));
                CHECK(gap <= 10.0 * std::sqrt(gc * d)); // square-root modulus of continuity
                CHECK(gap < prev_gap);
                prev_gap = gap;
            }
        }
    }
}
