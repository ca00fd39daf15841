#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "error.hpp"
#include "invariants.hpp"
#include "periods.hpp"

namespace wkit {

// Coefficients a_k of wp(z) = 1/z^2 + sum_k a_k z^{2k}, from the quadratic
// recursion the ODE wp'' = 6 wp^2 - g2/2 imposes. 24 terms keep the
// truncation error below 4^-24 at the series switch radius (half the
// shortest lattice distance).
struct LaurentTable {
    static constexpr int n_terms = 24;
    std::array<double, n_terms> a{};
};

inline LaurentTable laurent_table(const Invariants& inv) {
    LaurentTable t;
    t.a[0] = inv.g2 / 20.0;
    t.a[1] = inv.g3 / 28.0;
    for (int m = 3; m <= LaurentTable::n_terms; ++m) {
        double s = 0.0;
        for (int j = 1; j <= m - 2; ++j) s += t.a[j - 1] * t.a[m - 2 - j];
        t.a[m - 1] = 3.0 * s / ((2.0 * m + 3.0) * (m - 2.0));
    }
    return t;
}

// z = z_reduced + 2m omega1 + 2n omega2 with z_reduced in the cell centered at 0
struct CellReducedPoint {
    complex_t z_reduced;
    long m = 0;
    long n = 0;
};

struct EllipticContext {
    Invariants inv;
    CubicRoots roots;
    HalfPeriods hp;
    LaurentTable laurent;
    double min_lattice = 0.0;   // shortest nonzero lattice vector
    double series_radius = 0.0; // Laurent series used inside this radius
    double pole_guard = 0.0;

    bool degenerate() const {
        return roots.kind != RootKind::ThreeReal && roots.kind != RootKind::OneReal;
    }
};

namespace detail {

inline long round_half_to_zero(double x) {
    return (x >= 0.0) ? (long)std::ceil(x - 0.5) : (long)std::floor(x + 0.5);
}

inline complex_t wp_series(const EllipticContext& c, complex_t z) {
    const complex_t z2 = z * z;
    complex_t acc = 0.0;
    for (int k = LaurentTable::n_terms; k >= 1; --k) acc = (acc + c.laurent.a[k - 1]) * z2;
    return 1.0 / z2 + acc;
}

inline complex_t wp_prime_series(const EllipticContext& c, complex_t z) {
    const complex_t z2 = z * z;
    complex_t acc = 0.0;
    for (int k = LaurentTable::n_terms; k >= 1; --k)
        acc = acc * z2 + 2.0 * k * c.laurent.a[k - 1];
    return -2.0 / (z2 * z) + acc * z;
}

inline complex_t zeta_series(const EllipticContext& c, complex_t z) {
    const complex_t z2 = z * z;
    complex_t acc = 0.0;
    for (int k = LaurentTable::n_terms; k >= 1; --k)
        acc = acc * z2 + c.laurent.a[k - 1] / (2.0 * k + 1.0);
    return 1.0 / z - acc * z2 * z;
}

inline complex_t sigma_series(const EllipticContext& c, complex_t z) {
    const complex_t z2 = z * z;
    complex_t acc = 0.0;
    for (int k = LaurentTable::n_terms; k >= 1; --k)
        acc = acc * z2 + c.laurent.a[k - 1] / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    return z * std::exp(-acc * z2 * z2);
}

// wp and wp' together, by series inside the radius and the duplication
// formulas outside. The halved arguments stay away from the stationary
// points, so wp' never vanishes along the way.
inline std::pair<complex_t, complex_t> wp_pair(const EllipticContext& c, complex_t z) {
    if (std::abs(z) <= c.series_radius) return {wp_series(c, z), wp_prime_series(c, z)};
    const auto [p, s] = wp_pair(c, 0.5 * z);
    const complex_t cc = 6.0 * p * p - 0.5 * c.inv.g2;
    const complex_t r = cc / (2.0 * s);
    const complex_t p2 = -2.0 * p + r * r;
    const complex_t s2 = -s + 3.0 * p * cc / s - cc * cc * cc / (4.0 * s * s * s);
    return {p2, s2};
}

// zeta without the quasi-periodic extension: halve into the series disk,
// then walk back up with zeta(2u) = 2 zeta(u) + wp''(u) / (2 wp'(u))
inline complex_t zeta_chain(const EllipticContext& c, complex_t z) {
    int k = 0;
    complex_t w = z;
    while (std::abs(w) > c.series_radius) {
        w *= 0.5;
        ++k;
    }
    complex_t val = zeta_series(c, w);
    for (int j = 0; j < k; ++j) {
        const auto [p, s] = wp_pair(c, w);
        const complex_t cc = 6.0 * p * p - 0.5 * c.inv.g2;
        val = 2.0 * val + cc / (2.0 * s);
        w *= 2.0;
    }
    return val;
}

// sigma without the extension, via sigma(2u) = -wp'(u) sigma(u)^4
inline complex_t sigma_chain(const EllipticContext& c, complex_t z) {
    if (std::abs(z) <= c.series_radius) return sigma_series(c, z);
    const complex_t h = 0.5 * z;
    const complex_t s = wp_pair(c, h).second;
    const complex_t sh = sigma_chain(c, h);
    const complex_t sh2 = sh * sh;
    return -s * sh2 * sh2;
}

// distance from z to the singularity set of the degenerate closed forms
inline double degenerate_pole_distance(RootKind kind, double k, complex_t z) {
    if (kind == RootKind::Triple) return std::abs(z);
    const double spacing = M_PI / k;
    if (kind == RootKind::DoubleLarger) {
        const double n = std::round(z.imag() / spacing);
        return std::hypot(z.real(), z.imag() - n * spacing);
    }
    const double n = std::round(z.real() / spacing);
    return std::hypot(z.real() - n * spacing, z.imag());
}

inline void check_degenerate_args(RootKind kind, double e0, complex_t z) {
    if (kind == RootKind::ThreeReal || kind == RootKind::OneReal)
        throw domain_error("wp_degenerate requires a degenerate kind");
    if (kind != RootKind::Triple && e0 <= 0.0)
        throw domain_error("degenerate closed forms need e0 > 0");
    const double k = (kind == RootKind::Triple) ? 1.0 : std::sqrt(3.0 * e0);
    const double guard = 1e-12 * ((kind == RootKind::Triple) ? 1.0 : M_PI / k);
    if (degenerate_pole_distance(kind, k, z) < guard) throw pole_error(z);
}

} // namespace detail

// Closed forms of the degenerate limits.
inline complex_t wp_degenerate(RootKind kind, double e0, complex_t z) {
    detail::check_degenerate_args(kind, e0, z);
    if (kind == RootKind::Triple) return 1.0 / (z * z);
    const double k = std::sqrt(3.0 * e0);
    if (kind == RootKind::DoubleLarger) {
        const complex_t s = std::sinh(k * z);
        return e0 + 3.0 * e0 / (s * s);
    }
    const complex_t s = std::sin(k * z);
    return -e0 + 3.0 * e0 / (s * s);
}

inline complex_t wp_prime_degenerate(RootKind kind, double e0, complex_t z) {
    detail::check_degenerate_args(kind, e0, z);
    if (kind == RootKind::Triple) return -2.0 / (z * z * z);
    const double k = std::sqrt(3.0 * e0);
    if (kind == RootKind::DoubleLarger) {
        const complex_t s = std::sinh(k * z);
        return -6.0 * e0 * k * std::cosh(k * z) / (s * s * s);
    }
    const complex_t s = std::sin(k * z);
    return -6.0 * e0 * k * std::cos(k * z) / (s * s * s);
}

inline complex_t zeta_degenerate(RootKind kind, double e0, complex_t z) {
    detail::check_degenerate_args(kind, e0, z);
    if (kind == RootKind::Triple) return 1.0 / z;
    const double k = std::sqrt(3.0 * e0);
    if (kind == RootKind::DoubleLarger) return -e0 * z + k * std::cosh(k * z) / std::sinh(k * z);
    return e0 * z + k * std::cos(k * z) / std::sin(k * z);
}

inline complex_t sigma_degenerate(RootKind kind, double e0, complex_t z) {
    if (kind == RootKind::ThreeReal || kind == RootKind::OneReal)
        throw domain_error("wp_degenerate requires a degenerate kind");
    if (kind == RootKind::Triple) return z;
    if (e0 <= 0.0) throw domain_error("degenerate closed forms need e0 > 0");
    const double k = std::sqrt(3.0 * e0);
    if (kind == RootKind::DoubleLarger)
        return std::sinh(k * z) / k * std::exp(-e0 * z * z / 2.0);
    return std::sin(k * z) / k * std::exp(e0 * z * z / 2.0);
}

inline EllipticContext make_context(const Invariants& inv, const CubicRoots& roots) {
    EllipticContext c;
    c.inv = inv;
    c.roots = roots;
    c.laurent = laurent_table(inv);
    const double inf = std::numeric_limits<double>::infinity();
    switch (roots.kind) {
        case RootKind::Triple: {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            c.hp.omega1 = c.hp.omega2 = c.hp.omega3 = complex_t(inf, inf);
            c.hp.eta1 = c.hp.eta2 = complex_t(nan, nan);
            c.min_lattice = inf;
            c.series_radius = inf;
            c.pole_guard = 1e-12;
            return c;
        }
        case RootKind::DoubleLarger:
        case RootKind::DoubleSmaller: {
            c.hp = half_periods_raw(inv, roots);
            const double k = std::sqrt(3.0 * roots.degenerate_e0());
            c.min_lattice = M_PI / k; // the one finite period
            c.series_radius = 0.5 * c.min_lattice;
            c.pole_guard = 1e-12 * c.min_lattice;
            return c;
        }
        default:
            break;
    }
    c.hp = half_periods_raw(inv, roots);
    double shortest = inf;
    for (int m = -1; m <= 1; ++m)
        for (int n = -1; n <= 1; ++n) {
            if (m == 0 && n == 0) continue;
            shortest = std::min(shortest,
                                std::abs(2.0 * double(m) * c.hp.omega1 +
                                         2.0 * double(n) * c.hp.omega2));
        }
    c.min_lattice = shortest;
    c.series_radius = 0.5 * shortest;
    c.pole_guard = 1e-12 * shortest;
    c.hp.eta1 = detail::zeta_chain(c, c.hp.omega1);
    c.hp.eta2 = detail::zeta_chain(c, c.hp.omega2);
    const complex_t legendre =
        c.hp.omega2 * c.hp.eta1 - c.hp.omega1 * c.hp.eta2 - complex_t(0.0, M_PI / 2.0);
    // sanity check, budgeted by the size of the products: nearly degenerate
    // lattices stretch one period and lose a few digits in the constants
    const double legendre_scale =
        1.0 + std::abs(c.hp.omega2 * c.hp.eta1) + std::abs(c.hp.omega1 * c.hp.eta2);
    if (std::abs(legendre) > 1e-9 * legendre_scale)
        throw numerical_error("quasi-period constants violate the Legendre relation");
    return c;
}

inline EllipticContext make_context(const Invariants& inv) {
    return make_context(inv, cubic_roots(inv));
}

// Periods plus quasi-period constants. The constants come from the zeta
// duplication chain, so the Legendre relation stays an independent check
// rather than a definition.
inline HalfPeriods half_periods(const Invariants& inv, const CubicRoots& roots) {
    if (roots.kind == RootKind::Triple) throw triple_root_error();
    return make_context(inv, roots).hp;
}

inline CellReducedPoint cell_reduce(const EllipticContext& c, complex_t z) {
    if (c.degenerate()) throw domain_error("cell reduction needs a rank-2 lattice");
    const complex_t u = 2.0 * c.hp.omega1, v = 2.0 * c.hp.omega2;
    const double det = u.real() * v.imag() - u.imag() * v.real();
    const double alpha = (z.real() * v.imag() - z.imag() * v.real()) / det;
    const double beta = (u.real() * z.imag() - u.imag() * z.real()) / det;
    CellReducedPoint out;
    out.m = detail::round_half_to_zero(alpha);
    out.n = detail::round_half_to_zero(beta);
    out.z_reduced = z - double(out.m) * u - double(out.n) * v;
    return out;
}

inline complex_t wp(const EllipticContext& c, complex_t z) {
    if (c.degenerate()) return wp_degenerate(c.roots.kind, c.roots.degenerate_e0(), z);
    const CellReducedPoint r = cell_reduce(c, z);
    if (std::abs(r.z_reduced) < c.pole_guard) throw pole_error(z);
    return detail::wp_pair(c, r.z_reduced).first;
}

inline complex_t wp_prime(const EllipticContext& c, complex_t z) {
    if (c.degenerate()) return wp_prime_degenerate(c.roots.kind, c.roots.degenerate_e0(), z);
    const CellReducedPoint r = cell_reduce(c, z);
    if (std::abs(r.z_reduced) < c.pole_guard) throw pole_error(z);
    return detail::wp_pair(c, r.z_reduced).second;
}

inline complex_t zeta(const EllipticContext& c, complex_t z) {
    if (c.degenerate()) return zeta_degenerate(c.roots.kind, c.roots.degenerate_e0(), z);
    const CellReducedPoint r = cell_reduce(c, z);
    if (std::abs(r.z_reduced) < c.pole_guard) throw pole_error(z);
    complex_t val = detail::zeta_chain(c, r.z_reduced);
    if (r.m != 0 || r.n != 0)
        val += 2.0 * double(r.m) * c.hp.eta1 + 2.0 * double(r.n) * c.hp.eta2;
    return val;
}

inline complex_t sigma(const EllipticContext& c, complex_t z) {
    if (c.degenerate()) return sigma_degenerate(c.roots.kind, c.roots.degenerate_e0(), z);
    const CellReducedPoint r = cell_reduce(c, z);
    const complex_t base = detail::sigma_chain(c, r.z_reduced);
    if (r.m == 0 && r.n == 0) return base;
    const double sign = ((r.m + r.n + r.m * r.n) % 2 == 0) ? 1.0 : -1.0;
    const complex_t eta_shift = 2.0 * double(r.m) * c.hp.eta1 + 2.0 * double(r.n) * c.hp.eta2;
    const complex_t midpoint =
        r.z_reduced + double(r.m) * c.hp.omega1 + double(r.n) * c.hp.omega2;
    return sign * std::exp(eta_shift * midpoint) * base;
}

// Addition theorem: wp(z+w) = -wp(z) - wp(w) + ((wp'(z)-wp'(w)) / (2(wp(z)-wp(w))))^2
inline complex_t wp_add(const EllipticContext& c, complex_t z, complex_t w) {
    if (!c.degenerate()) {
        const CellReducedPoint r = cell_reduce(c, z + w);
        if (std::abs(r.z_reduced) < c.pole_guard) throw pole_error(z + w);
    } else {
        const double e0 = c.roots.degenerate_e0();
        const double k = (c.roots.kind == RootKind::Triple) ? 1.0 : std::sqrt(3.0 * e0);
        const double guard =
            1e-12 * ((c.roots.kind == RootKind::Triple) ? 1.0 : M_PI / k);
        if (detail::degenerate_pole_distance(c.roots.kind, k, z + w) < guard)
            throw pole_error(z + w);
    }
    const complex_t pz = wp(c, z), pw = wp(c, w);
    const complex_t sz = wp_prime(c, z), sw = wp_prime(c, w);
    const complex_t diff = pz - pw;
    if (std::abs(diff) < 1e-10 * (1.0 + std::abs(pz) + std::abs(pw)))
        throw degenerate_arguments_error();
    const complex_t ratio = (sz - sw) / (2.0 * diff);
    return -pz - pw + ratio * ratio;
}

// Duplication in the rational form (1/4) wp + (3 g2 wp^2 + 9 g3 wp + g2^2/4) / (4 wp'^2)
inline complex_t wp_duplicate(const EllipticContext& c, complex_t z) {
    const complex_t p = wp(c, z);
    const complex_t s = wp_prime(c, z);
    if (std::norm(s) < 1e-20 * (1.0 + std::norm(p) * std::abs(p)))
        throw stationary_point_error();
    const double g2 = c.inv.g2, g3 = c.inv.g3;
    return 0.25 * p + (3.0 * g2 * p * p + 9.0 * g3 * p + 0.25 * g2 * g2) / (4.0 * s * s);
}

// Half-period shift through the rational closed form; which selects omega_1,
// omega_2 or omega_3, i.e. the root e1, e3 or e2 respectively.
inline complex_t wp_half_shift(const EllipticContext& c, complex_t z, int which) {
    if (which < 1 || which > 3) throw domain_error("half-period index must be 1, 2 or 3");
    if (c.roots.kind == RootKind::Triple) throw degenerate_roots_error();
    if (c.roots.kind == RootKind::DoubleLarger && which != 2)
        throw domain_error("only the omega_2 shift stays finite for this kind");
    if (c.roots.kind == RootKind::DoubleSmaller && which != 1)
        throw domain_error("only the omega_1 shift stays finite for this kind");
    complex_t E, P;
    switch (which) {
        case 1: E = c.roots.e1; P = c.roots.e2 * c.roots.e3; break;
        case 2: E = c.roots.e3; P = c.roots.e1 * c.roots.e2; break;
        default: E = c.roots.e2; P = c.roots.e3 * c.roots.e1; break;
    }
    const complex_t p = wp(c, z);
    return E + (2.0 * E * E + P) / (p - E);
}

} // namespace wkit
