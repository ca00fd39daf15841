#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "error.hpp"
#include "invariants.hpp"
#include "weierstrass.hpp"

namespace wkit {

enum class BandLabel { Valence, Conduction, Gap, Edge };

inline const char* to_string(BandLabel b) {
    switch (b) {
        case BandLabel::Valence: return "valence";
        case BandLabel::Conduction: return "conduction";
        case BandLabel::Gap: return "gap";
        default: return "edge";
    }
}

struct BlochState {
    complex_t a{0.0, 0.0};
    double lambda = 0.0;
    complex_t k{0.0, 0.0};
    BandLabel band = BandLabel::Gap;
};

struct BandInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool unbounded_above = false;
};

struct BandStructure {
    RootKind kind = RootKind::ThreeReal;
    std::vector<BandInterval> intervals;
    std::vector<BlochState> states;
};

struct Eigenpair {
    complex_t a{0.0, 0.0};
    double lambda = 0.0;
    complex_t k{0.0, 0.0};
    std::function<complex_t(double)> y_plus, y_minus;
    std::function<complex_t(double)> u_plus, u_minus;
};

namespace detail {

inline void require_lattice(const EllipticContext& ctx) {
    if (ctx.degenerate()) throw degenerate_roots_error();
}

inline void require_three_real(const EllipticContext& ctx) {
    if (ctx.roots.kind == RootKind::OneReal) throw one_real_classification_error();
    if (ctx.roots.kind != RootKind::ThreeReal) throw degenerate_roots_error();
}

inline void check_sign(int sign) {
    if (sign * sign != 1) throw domain_error("sign must be +1 or -1");
}

inline void check_spectral_parameter(const EllipticContext& ctx, complex_t a) {
    if (std::abs(cell_reduce(ctx, a).z_reduced) < ctx.pole_guard)
        throw spectral_parameter_error();
}

// half-period of the potential: the real period of 2 wp(x) is 2 omega_1 for
// three real roots and 2 omega_3 otherwise
inline complex_t potential_half_period(const EllipticContext& ctx) {
    return (ctx.roots.kind == RootKind::ThreeReal) ? ctx.hp.omega1 : ctx.hp.omega3;
}

inline complex_t potential_eta(const EllipticContext& ctx) {
    return (ctx.roots.kind == RootKind::ThreeReal) ? ctx.hp.eta1
                                                   : ctx.hp.eta1 + ctx.hp.eta2;
}

} // namespace detail

// y_sign(x) = sigma(x + sign a) / (sigma(x) sigma(sign a)) exp(-zeta(sign a) x)
inline std::function<complex_t(double)> eigenfunction(const EllipticContext& ctx,
                                                      complex_t a, int sign) {
    detail::require_lattice(ctx);
    detail::check_sign(sign);
    detail::check_spectral_parameter(ctx, a);
    const complex_t sa = double(sign) * a;
    const complex_t sig_sa = sigma(ctx, sa);
    const complex_t zeta_sa = zeta(ctx, sa);
    return [ctx, sa, sig_sa, zeta_sa](double x) {
        const complex_t zx(x, 0.0);
        if (std::abs(cell_reduce(ctx, zx).z_reduced) < ctx.pole_guard) throw pole_error(zx);
        return sigma(ctx, zx + sa) / (sigma(ctx, zx) * sig_sa) * std::exp(-zeta_sa * zx);
    };
}

// closed-form derivative: y' = (1/2)(wp'(x) - sign wp'(a)) / (wp(x) - wp(a)) y
inline std::function<complex_t(double)> eigenfunction_derivative(const EllipticContext& ctx,
                                                                 complex_t a, int sign) {
    auto y = eigenfunction(ctx, a, sign);
    const complex_t pa = wp(ctx, a);
    const complex_t ppa = wp_prime(ctx, a);
    const double s = double(sign);
    return [ctx, y, pa, ppa, s](double x) {
        const complex_t zx(x, 0.0);
        const complex_t px = wp(ctx, zx);
        return 0.5 * (wp_prime(ctx, zx) - s * ppa) / (px - pa) * y(x);
    };
}

// the second solution at the band edges, sqrt(wp - e) (zeta(x + omega) + e x),
// with the pairings (omega1, e1), (omega2, e3), (omega3, e2)
inline std::function<complex_t(double)> special_eigenfunction(const EllipticContext& ctx,
                                                              int which) {
    if (which < 1 || which > 3) throw domain_error("half-period index must be 1, 2 or 3");
    if (ctx.roots.kind != RootKind::ThreeReal) throw degenerate_roots_error();
    complex_t om, e;
    switch (which) {
        case 1: om = ctx.hp.omega1; e = ctx.roots.e1; break;
        case 2: om = ctx.hp.omega2; e = ctx.roots.e3; break;
        default: om = ctx.hp.omega3; e = ctx.roots.e2; break;
    }
    return [ctx, om, e](double x) {
        const complex_t zx(x, 0.0);
        if (std::abs(cell_reduce(ctx, zx).z_reduced) < ctx.pole_guard) throw pole_error(zx);
        return std::sqrt(wp(ctx, zx) - e) * (zeta(ctx, zx + om) + e * zx);
    };
}

// f(a) = a zeta(omega_L) - omega_L zeta(a); y(x + 2 omega_L) = exp(2 f(a)) y(x)
inline complex_t bloch_phase(const EllipticContext& ctx, complex_t a) {
    detail::require_lattice(ctx);
    detail::check_spectral_parameter(ctx, a);
    return a * detail::potential_eta(ctx) - detail::potential_half_period(ctx) * zeta(ctx, a);
}

// i k = f(a) / omega_L; k real exactly when f is purely imaginary
inline complex_t crystal_momentum(const EllipticContext& ctx, complex_t a) {
    return complex_t(0.0, -1.0) * bloch_phase(ctx, a) / detail::potential_half_period(ctx);
}

inline BlochState classify_spectral_point(const EllipticContext& ctx, complex_t a,
                                          double tol = 1e-9) {
    BlochState st;
    st.a = a;
    const complex_t pa = wp(ctx, a);
    st.lambda = -pa.real();
    const complex_t f = bloch_phase(ctx, a);
    st.k = complex_t(0.0, -1.0) * f / detail::potential_half_period(ctx);
    const bool three = (ctx.roots.kind == RootKind::ThreeReal);
    const std::array<complex_t, 3> es{ctx.roots.e1, ctx.roots.e2, ctx.roots.e3};
    for (int i = 0; i < 3; ++i) {
        if (!three && i != 1) continue; // only e2 is real
        if (std::abs(pa - es[i]) < 1e-9 * (1.0 + std::abs(es[i]))) {
            st.band = BandLabel::Edge;
            st.lambda = -es[i].real();
            return st;
        }
    }
    if (std::abs(f.real()) < tol * (1.0 + std::abs(f))) {
        if (three && st.lambda <= -ctx.roots.e2.real())
            st.band = BandLabel::Valence;
        else
            st.band = BandLabel::Conduction;
    } else {
        st.band = BandLabel::Gap;
    }
    return st;
}

// Walk the boundary of the spectral domain and classify every sample; the
// allowed energies come out as [-e1,-e2] and [-e3,inf) for three real roots
// and as the single band [-e2,inf) otherwise.
inline BandStructure band_structure(const EllipticContext& ctx, int n_samples,
                                    double tol = 1e-9) {
    detail::require_lattice(ctx);
    if (n_samples < 16) throw domain_error("need at least 16 samples per segment");
    BandStructure out;
    out.kind = ctx.roots.kind;
    const double inf = std::numeric_limits<double>::infinity();
    const double eps = 1e-6;

    auto scan = [&](complex_t from, complex_t to, double t_lo, double t_hi) {
        for (int i = 0; i < n_samples; ++i) {
            const double t = t_lo + (t_hi - t_lo) * double(i) / double(n_samples - 1);
            out.states.push_back(classify_spectral_point(ctx, from + t * (to - from), tol));
        }
    };

    if (ctx.roots.kind == RootKind::ThreeReal) {
        const complex_t om1 = ctx.hp.omega1, om2 = ctx.hp.omega2, om3 = ctx.hp.omega3;
        scan(complex_t(0.0, 0.0), om1, eps, 1.0);            // gap, f real < 0
        scan(om1, om3, 0.0, 1.0);                            // valence band
        const size_t ridge_begin = out.states.size();
        scan(om3, om2, 0.0, 1.0);                            // gap, Re f dips negative
        double ridge_min = 0.0;
        for (size_t i = ridge_begin + 1; i + 1 < out.states.size(); ++i)
            ridge_min = std::min(ridge_min, bloch_phase(ctx, out.states[i].a).real());
        if (!(ridge_min < 0.0))
            throw numerical_error("expected Re f < 0 between omega_3 and omega_2");
        scan(om2, complex_t(0.0, 0.0), 0.0, 1.0 - eps);      // conduction band
        out.intervals.push_back({-ctx.roots.e1.real(), -ctx.roots.e2.real(), false});
        out.intervals.push_back({-ctx.roots.e3.real(), inf, true});
        return out;
    }

    const complex_t om3 = ctx.hp.omega3;              // real
    const complex_t omD = ctx.hp.omega1 - ctx.hp.omega2; // purely imaginary
    scan(complex_t(0.0, 0.0), om3, eps, 1.0);         // gap, f real rising to 0
    const size_t cond_begin = out.states.size();
    scan(complex_t(0.0, 0.0), omD, eps, 1.0);         // conduction band
    // f restricted to this segment is purely imaginary with one interior
    // stationary point; f' = eta_L + omega_L wp(a) is real there
    bool sign_change = false;
    double prev = 0.0;
    for (size_t i = cond_begin; i < out.states.size(); ++i) {
        const complex_t fp = detail::potential_eta(ctx) +
                             detail::potential_half_period(ctx) * wp(ctx, out.states[i].a);
        if (i > cond_begin && fp.real() * prev < 0.0) sign_change = true;
        prev = fp.real();
    }
    if (!sign_change)
        throw numerical_error("expected a stationary point of f on the conduction segment");
    out.intervals.push_back({-ctx.roots.e2.real(), inf, true});
    return out;
}

// psi_sign(x) = sigma(x + omega2 + sign a) sigma(omega2)
//             / (sigma(x + omega2) sigma(omega2 + sign a)) exp(-zeta(sign a) x)
inline std::function<complex_t(double)> bounded_eigenfunction(const EllipticContext& ctx,
                                                              complex_t a, int sign) {
    detail::require_three_real(ctx);
    detail::check_sign(sign);
    detail::check_spectral_parameter(ctx, a);
    const complex_t sa = double(sign) * a;
    const complex_t om2 = ctx.hp.omega2;
    if (std::abs(cell_reduce(ctx, om2 + sa).z_reduced) < ctx.pole_guard)
        throw spectral_parameter_error();
    const complex_t sig_om2 = sigma(ctx, om2);
    const complex_t sig_om2_sa = sigma(ctx, om2 + sa);
    const complex_t zeta_sa = zeta(ctx, sa);
    return [ctx, sa, om2, sig_om2, sig_om2_sa, zeta_sa](double x) {
        const complex_t zx(x, 0.0);
        return sigma(ctx, zx + om2 + sa) * sig_om2 /
               (sigma(ctx, zx + om2) * sig_om2_sa) * std::exp(-zeta_sa * zx);
    };
}

// W(x) = wp'(x) / (2 (wp(x) - e3)); W^2 - W' and W^2 + W' are the bounded and
// unbounded potentials up to the shift e3
inline double superpotential(const EllipticContext& ctx, double x) {
    detail::require_three_real(ctx);
    const complex_t zx(x, 0.0);
    if (std::abs(cell_reduce(ctx, zx).z_reduced) < ctx.pole_guard) throw pole_error(zx);
    const complex_t p = wp(ctx, zx);
    const complex_t denom = p - ctx.roots.e3;
    if (std::abs(denom) < 1e-12 * (1.0 + std::abs(p)))
        throw domain_error("superpotential singular where wp(x) = e3");
    return (wp_prime(ctx, zx) / (2.0 * denom)).real();
}

// (-d/dx + W) y_sign; equals (wp(a) - e3) psi_sign pointwise
inline std::function<complex_t(double)> apply_creation(const EllipticContext& ctx,
                                                       complex_t a, int sign) {
    detail::require_three_real(ctx);
    auto y = eigenfunction(ctx, a, sign);
    auto yp = eigenfunction_derivative(ctx, a, sign);
    return [ctx, y, yp](double x) { return -yp(x) + superpotential(ctx, x) * y(x); };
}

inline Eigenpair make_eigenpair(const EllipticContext& ctx, complex_t a) {
    detail::require_lattice(ctx);
    Eigenpair ep;
    ep.a = a;
    ep.lambda = -wp(ctx, a).real();
    ep.k = crystal_momentum(ctx, a);
    ep.y_plus = eigenfunction(ctx, a, +1);
    ep.y_minus = eigenfunction(ctx, a, -1);
    const complex_t k = ep.k;
    auto yp = ep.y_plus;
    auto ym = ep.y_minus;
    ep.u_plus = [yp, k](double x) {
        return yp(x) * std::exp(complex_t(0.0, -1.0) * k * complex_t(x, 0.0));
    };
    ep.u_minus = [ym, k](double x) {
        return ym(x) * std::exp(complex_t(0.0, 1.0) * k * complex_t(x, 0.0));
    };
    return ep;
}

} // namespace wkit
