#include "matterwave/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace matterwave::specfun {

namespace {

bool finite(double x) { return std::isfinite(x); }

// ---------------------------------------------------------------------------
// Alternating-series route, eta <= 0:
//   F_nu(eta) = Gamma(nu+1) * sum_{k>=1} (-1)^{k+1} e^{k eta} / k^{nu+1}.
// Terms decay geometrically for eta << 0 and like k^{-(nu+1)} at eta = 0,
// where plain summation is hopeless; the Euler transformation in van
// Wijngaarden's incremental form turns the tail into a geometrically
// convergent one.
// ---------------------------------------------------------------------------

// Incremental Euler summation of sum_j term_j (terms passed with sign),
// after Numerical Recipes eulsum.
class EulerSum {
public:
    // Returns the increment applied to the running sum.
    double add(double term) {
        if (n_ == 0) {
            table_[n_++] = term;
            double inc = 0.5 * term;
            sum_ += inc;
            return inc;
        }
        double tmp = table_[0];
        table_[0] = term;
        for (std::size_t j = 1; j < n_; ++j) {
            double dum = table_[j];
            table_[j] = 0.5 * (table_[j - 1] + tmp);
            tmp = dum;
        }
        double next = 0.5 * (table_[n_ - 1] + tmp);
        double inc;
        if (std::abs(next) <= std::abs(table_[n_ - 1]) && n_ + 1 < table_.size()) {
            table_[n_++] = next;
            inc = 0.5 * next;
        } else {
            inc = next;
        }
        sum_ += inc;
        return inc;
    }

    double sum() const { return sum_; }

private:
    std::array<double, 64> table_{};
    std::size_t n_ = 0;
    double sum_ = 0.0;
};

double series_sum(double nu, double eta) {
    const double q = std::exp(eta);
    if (q == 0.0) return 0.0;
    if (eta <= -3.0) {
        // ratio of consecutive terms < e^-3; plain summation converges fast
        double sum = 0.0, p = q;
        for (int k = 1; k < 64; ++k) {
            double term = (k & 1 ? p : -p) / std::pow(k, nu + 1.0);
            sum += term;
            if (std::abs(term) < 1e-16 * std::abs(sum)) break;
            p *= q;
        }
        return sum;
    }
    EulerSum acc;
    double p = q;
    double inc = 0.0;
    int small_incs = 0;
    for (int k = 1; k <= 512; ++k) {
        double term = (k & 1 ? p : -p) / std::pow(k, nu + 1.0);
        inc = acc.add(term);
        p *= q;
        if (std::abs(inc) < 1e-16 * std::abs(acc.sum())) {
            if (++small_incs >= 2) break;
        } else {
            small_incs = 0;
        }
    }
    return acc.sum();
}

// ---------------------------------------------------------------------------
// Quadrature route: adaptive 7-15 Gauss-Kronrod.
// ---------------------------------------------------------------------------

// QUADPACK dqk15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kron_x = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr std::array<double, 8> kron_w = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> gauss_w = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double rk = 0.0, rg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double fv = (i < 7) ? f(c - h * kron_x[i]) + f(c + h * kron_x[i]) : f(c);
        rk += kron_w[i] * fv;
        if (i % 2 == 1) rg += gauss_w[i / 2] * fv; // odd indices hold the Gauss-7 nodes
    }
    kronrod = rk * h;
    err = std::abs((rk - rg) * h);
}

// Recursive bisection with a length-proportional error budget.
template <class F>
double adaptive(const F& f, double a, double b, double tol, int depth = 0) {
    double k, err;
    gk15(f, a, b, k, err);
    if (err <= tol || depth >= 40) return k;
    const double m = 0.5 * (a + b);
    return adaptive(f, a, m, 0.5 * tol, depth + 1) + adaptive(f, m, b, 0.5 * tol, depth + 1);
}

// Crude magnitude estimate of F_nu(eta), used only to scale tolerances.
double fermi_magnitude(double nu, double eta) {
    const double deg = eta > 0 ? std::pow(eta, nu + 1.0) / (nu + 1.0) : 0.0;
    const double cls = std::tgamma(nu + 1.0) * std::exp(std::min(eta, 0.0));
    return std::max(deg, cls);
}

double quadrature(double nu, double eta) {
    const auto integrand = [nu, eta](double x) {
        // fermi factor written to avoid overflow for x >> eta
        const double t = x - eta;
        const double fermi = t > 0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
        return std::pow(x, nu) * fermi;
    };
    // Error budget scaled by the integral's magnitude so the route keeps
    // relative accuracy even where F underflows toward e^eta; headroom below
    // the 1e-10 API contract.
    const double scale = fermi_magnitude(nu, eta);
    const double tol = (1e-12 + 1e-11) * scale;
    const double x0 = std::max(eta, 0.0);
    double head = 0.0;
    if (eta > 0.0) head = adaptive(integrand, 0.0, eta, 0.5 * tol);
    // Tail beyond x0 decays like e^-t; truncating at t = 70 leaves less than
    // e^-70 (x0+70)^nu, negligible against the tolerance above.
    const auto tail = [&](double t) { return integrand(x0 + t); };
    return head + adaptive(tail, 0.0, 70.0, 0.5 * tol);
}

} // namespace

FermiOrder::FermiOrder(double nu_) : nu(nu_) {
    if (!finite(nu) || nu <= -1.0)
        throw DomainError("Fermi order must be finite and > -1, got " + std::to_string(nu_));
}

DegeneracyPoint::DegeneracyPoint(double eta_, double theta_) : eta(eta_), theta(theta_) {
    if (!finite(eta)) throw DomainError("degeneracy parameter eta must be finite");
    if (!finite(theta) || theta <= 0.0)
        throw DomainError("fractional temperature theta must be > 0, got " + std::to_string(theta_));
}

double fermi_integral_series(FermiOrder order, double eta) {
    if (!finite(eta)) throw DomainError("eta must be finite");
    if (eta > 0.0) throw DomainError("series route requires eta <= 0");
    return std::tgamma(order.nu + 1.0) * series_sum(order.nu, eta);
}

double fermi_integral_quadrature(FermiOrder order, double eta) {
    if (!finite(eta)) throw DomainError("eta must be finite");
    return quadrature(order.nu, eta);
}

double fermi_integral(FermiOrder order, double eta) {
    if (!finite(eta)) throw DomainError("eta must be finite");
    return eta <= 0.0 ? fermi_integral_series(order, eta) : fermi_integral_quadrature(order, eta);
}

double polylog_neg_exp(FermiOrder order, double eta) {
    return -fermi_integral(order, eta) / std::tgamma(order.nu + 1.0);
}

double invert_eta(FermiOrder order, double target) {
    if (!finite(target) || target <= 0.0)
        throw DomainError("invert_eta requires target > 0, got " + std::to_string(target));
    const double nu = order.nu;
    const auto f = [&](double eta) { return fermi_integral(order, eta); };

    // Classical-limit initial guess F ~ Gamma(nu+1) e^eta, then expand a
    // bracket by doubling.  F is strictly increasing, so one side suffices.
    double lo = std::log(target / std::tgamma(nu + 1.0));
    double hi = lo;
    double step = 1.0;
    if (f(lo) < target) {
        while (f(hi) < target) {
            lo = hi;
            hi += step;
            step *= 2.0;
            if (hi > 1e6) throw AccuracyError("invert_eta: bracketing failed (target too large)");
        }
    } else {
        while (f(lo) >= target) {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (lo < -1e6) throw AccuracyError("invert_eta: bracketing failed (target too small)");
        }
    }

    // Safeguarded Newton within [lo, hi]; bisection whenever the Newton step
    // leaves the bracket or stalls.
    double eta = 0.5 * (lo + hi);
    double prev_f = std::numeric_limits<double>::quiet_NaN();
    double prev_eta = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < 128; ++it) {
        const double fe = f(eta);
        if (std::abs(fe - target) <= 1e-10 * target) return eta;
        if (fe < target) lo = eta; else hi = eta;

        double deriv;
        if (nu > 0.0) {
            deriv = nu * fermi_integral(FermiOrder(nu - 1.0), eta);
        } else if (finite(prev_f) && prev_eta != eta) {
            deriv = (fe - prev_f) / (eta - prev_eta); // secant
        } else {
            deriv = 0.0;
        }
        prev_f = fe;
        prev_eta = eta;

        double next = deriv > 0.0 ? eta - (fe - target) / deriv : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == eta) return eta; // interval exhausted at double precision
        eta = next;
    }
    throw AccuracyError("invert_eta: no convergence within 128 iterations");
}

} // namespace matterwave::specfun
