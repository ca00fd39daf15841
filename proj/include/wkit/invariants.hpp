#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "error.hpp"

namespace wkit {

using complex_t = std::complex<double>;

// Real invariants (g2, g3) of the curve y^2 = 4t^3 - g2 t - g3.
struct Invariants {
    double g2 = 0.0;
    double g3 = 0.0;

    double discriminant() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
};

enum class RootKind {
    ThreeReal,     // e1 > e2 > e3, all real
    OneReal,       // e2 real, e1 = conj(e3), Im e1 > 0
    DoubleLarger,  // e1 = e2 = e0 > 0, e3 = -2 e0
    DoubleSmaller, // e1 = 2 e0, e2 = e3 = -e0 < 0
    Triple         // e1 = e2 = e3 = 0
};

inline const char* to_string(RootKind k) {
    switch (k) {
        case RootKind::ThreeReal: return "ThreeReal";
        case RootKind::OneReal: return "OneReal";
        case RootKind::DoubleLarger: return "DoubleLarger";
        case RootKind::DoubleSmaller: return "DoubleSmaller";
        case RootKind::Triple: return "Triple";
    }
    return "?";
}

struct CubicRoots {
    complex_t e1, e2, e3;
    RootKind kind = RootKind::Triple;

    // e0 of the degenerate closed forms: the repeated root magnitude.
    double degenerate_e0() const {
        if (kind == RootKind::DoubleLarger) return e1.real();
        if (kind == RootKind::DoubleSmaller) return -e2.real();
        return 0.0;
    }
};

namespace detail {

inline double cubic_residual(const Invariants& inv, complex_t t) {
    complex_t q = 4.0 * t * t * t - inv.g2 * t - inv.g3;
    return std::abs(q);
}

// Two Newton steps on Q(t) = 4t^3 - g2 t - g3. Guarded: a step is kept only
// if it does not increase |Q|.
inline complex_t polish_root(const Invariants& inv, complex_t t) {
    for (int i = 0; i < 2; ++i) {
        complex_t q = 4.0 * t * t * t - inv.g2 * t - inv.g3;
        complex_t dq = 12.0 * t * t - inv.g2;
        if (std::abs(dq) == 0.0) break;
        complex_t cand = t - q / dq;
        if (cubic_residual(inv, cand) <= std::abs(q)) t = cand;
    }
    return t;
}

} // namespace detail

// Roots of 4t^3 - g2 t - g3, ordered and classified.
inline CubicRoots cubic_roots(const Invariants& inv) {
    if (!std::isfinite(inv.g2) || !std::isfinite(inv.g3))
        throw domain_error("invariants must be finite");

    const double g2 = inv.g2, g3 = inv.g3;
    CubicRoots out;

    if (g2 == 0.0 && g3 == 0.0) {
        out.e1 = out.e2 = out.e3 = 0.0;
        out.kind = RootKind::Triple;
        return out;
    }

    // 4t^3 - g2 t - g3 = 0  <=>  t^3 + pt + q = 0 with p = -g2/4, q = -g3/4.
    const double p = -g2 / 4.0, q = -g3 / 4.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q; // of t^3 + pt + q

    complex_t r1, r2, r3;
    if (disc >= 0.0 && p < 0.0) {
        // three real roots, trigonometric form
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        r1 = m * std::cos(phi);
        r2 = m * std::cos(phi - 2.0 * M_PI / 3.0);
        r3 = m * std::cos(phi - 4.0 * M_PI / 3.0);
    } else {
        // Cardano. u^3 = -q/2 + sqrt(q^2/4 + p^3/27)
        const complex_t inner = q * q / 4.0 + p * p * p / 27.0;
        complex_t s = std::sqrt(inner);
        complex_t u3 = -q / 2.0 + s;
        if (std::abs(u3) < 1e-300) u3 = -q / 2.0 - s;
        const complex_t u = std::pow(u3, 1.0 / 3.0);
        const complex_t w(-0.5, std::sqrt(3.0) / 2.0);
        complex_t us[3] = {u, u * w, u * w * w};
        complex_t rs[3];
        for (int i = 0; i < 3; ++i) {
            complex_t v = (std::abs(us[i]) > 0.0) ? -p / (3.0 * us[i]) : complex_t(0.0);
            rs[i] = us[i] + v;
        }
        r1 = rs[0]; r2 = rs[1]; r3 = rs[2];
    }

    r1 = detail::polish_root(inv, r1);
    r2 = detail::polish_root(inv, r2);
    r3 = detail::polish_root(inv, r3);

    const double scale = std::max({1.0, std::abs(r1), std::abs(r2), std::abs(r3)});
    const double sep_tol = 1e-9 * scale;

    // Real roots have imaginary parts at noise level only.
    auto realish = [&](complex_t r) { return std::abs(r.imag()) < sep_tol; };

    complex_t roots[3] = {r1, r2, r3};
    int n_real = 0;
    for (auto& r : roots)
        if (realish(r)) { r = complex_t(r.real(), 0.0); ++n_real; }

    if (n_real == 3) {
        double v[3] = {roots[0].real(), roots[1].real(), roots[2].real()};
        std::sort(v, v + 3, std::greater<double>());
        const bool d12 = std::abs(v[0] - v[1]) < sep_tol;
        const bool d23 = std::abs(v[1] - v[2]) < sep_tol;
        if (d12 && d23) {
            out.e1 = out.e2 = out.e3 = 0.0;
            out.kind = RootKind::Triple;
        } else if (d12) {
            const double e0 = (v[0] + v[1]) / 2.0;
            out.e1 = out.e2 = e0;
            out.e3 = -2.0 * e0;
            out.kind = RootKind::DoubleLarger;
        } else if (d23) {
            const double e0 = -(v[1] + v[2]) / 2.0;
            out.e2 = out.e3 = -e0;
            out.e1 = 2.0 * e0;
            out.kind = RootKind::DoubleSmaller;
        } else {
            out.e1 = v[0]; out.e2 = v[1]; out.e3 = v[2];
            out.kind = RootKind::ThreeReal;
        }
    } else {
        // one real root, a conjugate pair
        complex_t real_root = roots[0], c1 = roots[1], c2 = roots[2];
        for (int i = 0; i < 3; ++i) {
            if (realish(roots[i])) {
                real_root = roots[i];
                c1 = roots[(i + 1) % 3];
                c2 = roots[(i + 2) % 3];
                break;
            }
        }
        if (c1.imag() < 0.0) std::swap(c1, c2);
        // enforce the exact conjugate-pair structure
        const double re = (c1.real() + c2.real()) / 2.0;
        const double im = (c1.imag() - c2.imag()) / 2.0;
        out.e2 = complex_t(real_root.real(), 0.0);
        out.e1 = complex_t(re, im);
        out.e3 = std::conj(out.e1);
        out.kind = RootKind::OneReal;
    }
    return out;
}

// Homogeneity: wp(z; g2, g3) = mu^2 wp(mu z; g2/mu^4, g3/mu^6). For real
// results only mu with mu^4, mu^6 real are useful, but any nonzero complex
// mu is accepted; the returned parts are the real projections, valid when
// the imaginary parts vanish.
struct RescaledInvariants {
    complex_t g2, g3;
};

inline RescaledInvariants rescale(const Invariants& inv, complex_t mu) {
    if (std::abs(mu) == 0.0) throw zero_scale_error();
    const complex_t mu2 = mu * mu;
    const complex_t mu4 = mu2 * mu2;
    return {inv.g2 / mu4, inv.g3 / (mu4 * mu2)};
}

} // namespace wkit
