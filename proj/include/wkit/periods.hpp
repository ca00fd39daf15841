#pragma once

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"
#include "invariants.hpp"

namespace wkit {

inline bool is_finite(complex_t z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Half-periods of the lattice and the quasi-period constants eta_i = zeta(omega_i).
// Conventions: ThreeReal has omega1 real positive and omega2 purely imaginary with
// positive imaginary part; OneReal has omega2 = conj(omega1) in the open first
// quadrant, so that omega3 = omega1 + omega2 is real and Im(omega2/omega1) > 0.
// Degenerate kinds carry one infinite entry.
struct HalfPeriods {
    complex_t omega1, omega2, omega3;
    complex_t eta1, eta2;
};

namespace detail {

// integral_0^inf du / sqrt(u^4 + p u^2 + q) for quartics with no real zeros
// (q > 0 and either p >= 0 or p^2 < 4q). Head by adaptive Gauss-Kronrod,
// tail from the large-u expansion of the integrand.
inline double quartic_period_integral(double p, double q) {
    const double scale = std::max({1.0, std::sqrt(std::abs(p)), std::pow(q, 0.25)});
    const double U = 100.0 * scale;
    auto f = [p, q](double u) {
        const double u2 = u * u;
        return 1.0 / std::sqrt((u2 + p) * u2 + q);
    };
    double err = 0.0;
    const double head = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, U, 18, 1e-13, &err);
    const double U2 = U * U, U3 = U2 * U, U5 = U3 * U2, U7 = U5 * U2;
    const double tail = 1.0 / U - p / (6.0 * U3) + (3.0 * p * p - 4.0 * q) / (40.0 * U5) +
                        (12.0 * p * q - 5.0 * p * p * p) / (112.0 * U7);
    const double result = head + tail;
    if (!std::isfinite(result)) throw numerical_error("period quadrature failed");
    return result;
}

} // namespace detail

// Period integrals (Weierstrass layer fills eta1/eta2 for the non-degenerate
// kinds; the degenerate closed forms are complete here).
inline HalfPeriods half_periods_raw(const Invariants&, const CubicRoots& roots) {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    HalfPeriods hp;
    hp.eta1 = hp.eta2 = complex_t(nan, nan);
    switch (roots.kind) {
        case RootKind::Triple:
            throw triple_root_error();
        case RootKind::ThreeReal: {
            const double e1 = roots.e1.real(), e2 = roots.e2.real(), e3 = roots.e3.real();
            const double d2 = e1 - e2, d3 = e1 - e3;
            hp.omega1 = detail::quartic_period_integral(d2 + d3, d2 * d3);
            const double D1 = e1 - e3, D2 = e2 - e3;
            hp.omega2 = complex_t(0.0, detail::quartic_period_integral(D1 + D2, D1 * D2));
            break;
        }
        case RootKind::OneReal: {
            // substitute t = e2 +- u^2 in the period integrals
            const double e2 = roots.e2.real();
            const double al = roots.e1.real(), be = roots.e1.imag();
            const double c = e2 - al;
            const double q = c * c + be * be;
            const double A = detail::quartic_period_integral(2.0 * c, q);  // omega1 + omega2
            const double B = detail::quartic_period_integral(-2.0 * c, q); // (omega2 - omega1) / i
            // conjugate pair ordered so that Im(omega2 / omega1) > 0; omega3 stays real
            hp.omega1 = complex_t(A / 2.0, -B / 2.0);
            hp.omega2 = std::conj(hp.omega1);
            break;
        }
        case RootKind::DoubleLarger: {
            const double e0 = roots.degenerate_e0();
            const double k = std::sqrt(3.0 * e0);
            hp.omega1 = complex_t(inf, 0.0);
            hp.omega2 = complex_t(0.0, M_PI / (2.0 * k));
            hp.eta1 = complex_t(-inf, 0.0); // zeta(x) ~ -e0 x + k for large real x
            hp.eta2 = -e0 * hp.omega2;
            break;
        }
        case RootKind::DoubleSmaller: {
            const double e0 = roots.degenerate_e0();
            const double k = std::sqrt(3.0 * e0);
            hp.omega1 = complex_t(M_PI / (2.0 * k), 0.0);
            hp.omega2 = complex_t(0.0, inf);
            hp.eta1 = e0 * hp.omega1;
            hp.eta2 = complex_t(0.0, inf); // zeta(iy) ~ i(e0 y - k) for large y
            break;
        }
    }
    hp.omega3 = hp.omega1 + hp.omega2;
    return hp;
}

namespace detail {

// bring a half-period basis into the modular fundamental domain
inline void reduce_basis(complex_t& w1, complex_t& w2) {
    complex_t tau = w2 / w1;
    if (tau.imag() < 0.0) { w2 = -w2; tau = -tau; }
    for (int it = 0; it < 256; ++it) {
        const double n = std::round(tau.real());
        if (n != 0.0) { w2 -= n * w1; tau = w2 / w1; }
        if (std::abs(tau) < 1.0 - 1e-14) {
            const complex_t t = w1;
            w1 = w2;
            w2 = -t;
            tau = w2 / w1;
            continue;
        }
        if (std::abs(tau.real()) <= 0.5 + 1e-14) return;
    }
    throw numerical_error("period basis reduction did not converge");
}

} // namespace detail

// Eisenstein invariants of the lattice spanned by 2*w1 and 2*w2, summed in
// closed Fourier form after reducing the basis (the raw lattice sums converge
// too slowly for the demanded tail bound). Complex-valued version.
inline RescaledInvariants lattice_invariants(complex_t w1, complex_t w2) {
    if (std::abs(w1) == 0.0 || std::abs(w2) == 0.0) throw degenerate_lattice_error();
    const complex_t tau0 = w2 / w1;
    if (std::abs(tau0.imag()) < 1e-12 * std::max(1.0, std::abs(tau0)))
        throw degenerate_lattice_error();
    detail::reduce_basis(w1, w2);
    const complex_t tau = w2 / w1;
    const complex_t Q = std::exp(complex_t(0.0, 2.0 * M_PI) * tau);
    complex_t s4 = 0.0, s6 = 0.0;
    complex_t Qn = 1.0;
    for (int n = 1; n <= 64; ++n) {
        Qn *= Q;
        const double n2 = double(n) * double(n);
        const complex_t base = Qn / (1.0 - Qn);
        const complex_t t4 = (n2 * double(n)) * base;
        const complex_t t6 = (n2 * n2 * double(n)) * base;
        s4 += t4;
        s6 += t6;
        if (std::abs(t4) < 1e-18 * (1.0 + std::abs(s4)) &&
            std::abs(t6) < 1e-18 * (1.0 + std::abs(s6)))
            break;
    }
    const complex_t E4 = 1.0 + 240.0 * s4;
    const complex_t E6 = 1.0 - 504.0 * s6;
    const complex_t pw = M_PI / w1;
    const complex_t pw2 = pw * pw;
    const complex_t pw4 = pw2 * pw2;
    return {pw4 * E4 / 12.0, pw4 * pw2 * E6 / 216.0};
}

inline Invariants invariants_from_periods(complex_t w1, complex_t w2) {
    const RescaledInvariants gi = lattice_invariants(w1, w2);
    const double tol = 1e-8;
    if (std::abs(gi.g2.imag()) > tol * (1.0 + std::abs(gi.g2)) ||
        std::abs(gi.g3.imag()) > tol * (1.0 + std::abs(gi.g3)))
        throw domain_error("lattice does not have real invariants");
    return {gi.g2.real(), gi.g3.real()};
}

// Change of lattice basis: (omega1', omega2') = m (omega1, omega2). The
// quasi-period constants transform the same way because zeta(a w1 + b w2)
// = a eta1 + b eta2 for any integers a, b not both even.
inline HalfPeriods modular_transform(const HalfPeriods& hp,
                                     const std::array<std::array<long, 2>, 2>& m) {
    const long det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det != 1 && det != -1) throw non_unimodular_error();
    if (!is_finite(hp.omega1) || !is_finite(hp.omega2))
        throw domain_error("degenerate lattice admits no modular transform");
    HalfPeriods out;
    out.omega1 = double(m[0][0]) * hp.omega1 + double(m[0][1]) * hp.omega2;
    out.omega2 = double(m[1][0]) * hp.omega1 + double(m[1][1]) * hp.omega2;
    out.omega3 = out.omega1 + out.omega2;
    out.eta1 = double(m[0][0]) * hp.eta1 + double(m[0][1]) * hp.eta2;
    out.eta2 = double(m[1][0]) * hp.eta1 + double(m[1][1]) * hp.eta2;
    return out;
}

} // namespace wkit
