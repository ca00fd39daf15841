#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "error.hpp"
#include "invariants.hpp"
#include "weierstrass.hpp"

namespace wkit {

enum class Branch { Unbounded, Bounded };

struct MotionSample {
    double x = 0.0;
    double v = 0.0;
    bool scattered = false;
};

struct MotionSolution {
    Branch branch = Branch::Unbounded;
    complex_t shift{0.0, 0.0};
    double t0 = 0.0;
    double period_or_tof = 0.0; // +inf when the motion never repeats
    std::function<MotionSample(double)> evaluator;
};

// v^2 = 4x^3 + F0 x + E
struct CubicProblem {
    double F0 = 0.0;
    double E = 0.0;
};

// (1/2) v^2 - omega^2 cos(theta) = E
struct PendulumProblem {
    double omega = 1.0;
    double E = 0.0;
};

// (1/2) v^2 + s (omega^2/2) (e^x - tau e^-x) = E
struct HyperbolicProblem {
    double omega = 1.0;
    int sign_s = -1;
    int sign_tau = 1;
    double E = 0.0;
};

namespace detail {

inline MotionSample scattered_sample(double direction) {
    MotionSample m;
    m.x = direction * std::numeric_limits<double>::infinity();
    m.v = std::numeric_limits<double>::infinity();
    m.scattered = true;
    return m;
}

inline bool sample_ok(const MotionSample& m) {
    return std::isfinite(m.x) && std::isfinite(m.v) &&
           std::abs(m.x) <= 1e15 && std::abs(m.v) <= 1e15;
}

inline std::function<MotionSample(double)>
wp_track_evaluator(const EllipticContext& ctx, complex_t shift, double t0) {
    return [ctx, shift, t0](double t) {
        const complex_t w = complex_t(t - t0, 0.0) + shift;
        MotionSample m;
        try {
            m.x = wp(ctx, w).real();
            m.v = wp_prime(ctx, w).real();
        } catch (const pole_error&) {
            return scattered_sample(1.0);
        }
        if (!sample_ok(m)) return scattered_sample(1.0);
        return m;
    };
}

inline std::function<MotionSample(double)>
log_track_evaluator(const EllipticContext& ctx, double s, double E, double w2,
                    complex_t shift, double t0) {
    return [ctx, s, E, w2, shift, t0](double t) {
        const complex_t w = complex_t(t - t0, 0.0) + shift;
        double P, Pp;
        try {
            P = wp(ctx, w).real();
            Pp = wp_prime(ctx, w).real();
        } catch (const pole_error&) {
            return scattered_sample(1.0); // wp pole, x runs off to +inf
        }
        const double arg = -s * (2.0 / w2) * (2.0 * P - E / 3.0);
        if (!(arg > 0.0) || !std::isfinite(arg))
            return scattered_sample(-1.0); // log argument hits zero, x -> -inf
        MotionSample m;
        m.x = std::log(arg);
        m.v = 2.0 * Pp / (2.0 * P - E / 3.0);
        if (!sample_ok(m)) return scattered_sample(m.x > 0.0 ? 1.0 : -1.0);
        return m;
    };
}

inline double parity_sign(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

} // namespace detail

inline Invariants cubic_invariants(const CubicProblem& p) {
    return Invariants{-p.F0, -p.E};
}

inline MotionSolution cubic_solve(const CubicProblem& p, Branch branch, double t0) {
    const Invariants inv = cubic_invariants(p);
    CubicRoots roots = cubic_roots(inv);
    // boundary energies must take the closed forms: the generic route would
    // see a double root split by rounding noise and lose the periods
    if (p.F0 < 0.0) {
        const double e0 = std::sqrt(-p.F0 / 12.0);
        const double E0 = 8.0 * e0 * e0 * e0;
        const double energy_tol = 1e-6 * std::max(1.0, E0);
        if (std::abs(p.E + E0) <= energy_tol) {
            roots = CubicRoots{complex_t(2.0 * e0, 0.0), complex_t(-e0, 0.0), complex_t(-e0, 0.0),
                               RootKind::DoubleSmaller};
        } else if (std::abs(p.E - E0) <= energy_tol) {
            roots = CubicRoots{complex_t(e0, 0.0), complex_t(e0, 0.0), complex_t(-2.0 * e0, 0.0),
                               RootKind::DoubleLarger};
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    MotionSolution sol;
    sol.branch = branch;
    sol.t0 = t0;

    switch (roots.kind) {
        case RootKind::Triple: { // F0 = E = 0
            if (branch == Branch::Bounded) throw no_bounded_branch_error();
            sol.period_or_tof = inf;
            sol.evaluator = [t0](double t) {
                const double u = t - t0;
                MotionSample m;
                m.x = 1.0 / (u * u);
                m.v = -2.0 / (u * u * u);
                if (!detail::sample_ok(m)) return detail::scattered_sample(1.0);
                return m;
            };
            return sol;
        }
        case RootKind::DoubleSmaller: { // E = -E0: two lower turning points merge
            const double e0 = roots.degenerate_e0();
            const double k = std::sqrt(3.0 * e0);
            if (branch == Branch::Bounded) {
                sol.period_or_tof = M_PI / k; // limiting small-oscillation period
                sol.evaluator = [e0](double) { return MotionSample{-e0, 0.0, false}; };
            } else {
                sol.period_or_tof = M_PI / k;
                sol.evaluator = [e0, k, t0](double t) {
                    const double u = t - t0;
                    const double sn = std::sin(k * u);
                    MotionSample m;
                    m.x = -e0 + 3.0 * e0 / (sn * sn);
                    m.v = -6.0 * e0 * k * std::cos(k * u) / (sn * sn * sn);
                    if (!detail::sample_ok(m)) return detail::scattered_sample(1.0);
                    return m;
                };
            }
            return sol;
        }
        case RootKind::DoubleLarger: { // E = +E0: both branches take forever
            const double e0 = roots.degenerate_e0();
            const double k = std::sqrt(3.0 * e0);
            sol.period_or_tof = inf;
            if (branch == Branch::Bounded) {
                sol.evaluator = [e0, k, t0](double t) {
                    const double u = t - t0;
                    const double ch = std::cosh(k * u);
                    MotionSample m;
                    m.x = e0 - 3.0 * e0 / (ch * ch);
                    m.v = 6.0 * e0 * k * std::sinh(k * u) / (ch * ch * ch);
                    return m;
                };
            } else {
                sol.evaluator = [e0, k, t0](double t) {
                    const double u = t - t0;
                    const double sh = std::sinh(k * u);
                    MotionSample m;
                    m.x = e0 + 3.0 * e0 / (sh * sh);
                    m.v = -6.0 * e0 * k * std::cosh(k * u) / (sh * sh * sh);
                    if (!detail::sample_ok(m)) return detail::scattered_sample(1.0);
                    return m;
                };
            }
            return sol;
        }
        case RootKind::OneReal: {
            if (branch == Branch::Bounded) throw no_bounded_branch_error();
            const EllipticContext ctx = make_context(inv, roots);
            sol.period_or_tof = 2.0 * ctx.hp.omega3.real(); // real period of the lattice
            sol.evaluator = detail::wp_track_evaluator(ctx, complex_t(0.0, 0.0), t0);
            return sol;
        }
        default: { // ThreeReal
            const EllipticContext ctx = make_context(inv, roots);
            sol.period_or_tof = 2.0 * ctx.hp.omega1.real();
            sol.shift = (branch == Branch::Bounded) ? ctx.hp.omega2 : complex_t(0.0, 0.0);
            sol.evaluator = detail::wp_track_evaluator(ctx, sol.shift, t0);
            return sol;
        }
    }
}

// Time of flight at energy E as the magnitude of the imaginary period, paired
// with the oscillation period of the sign-flipped problem; the two agree
// because negating E reflects the root set.
inline std::pair<double, double> cubic_inverted_periods(const CubicProblem& p) {
    const Invariants inv = cubic_invariants(p);
    const CubicRoots roots = cubic_roots(inv);
    if (roots.kind != RootKind::ThreeReal)
        throw domain_error("inverted-period identity needs three distinct real roots");
    const Invariants inv_flipped = cubic_invariants(CubicProblem{p.F0, -p.E});
    const CubicRoots roots_flipped = cubic_roots(inv_flipped);
    const HalfPeriods a = half_periods_raw(inv, roots);
    const HalfPeriods b = half_periods_raw(inv_flipped, roots_flipped);
    return {std::abs(2.0 * a.omega2), 2.0 * b.omega1.real()};
}

struct PendulumRoots {
    double x1;
    double x2;
    double x3;
};

inline PendulumRoots pendulum_roots(const PendulumProblem& p) {
    if (p.omega <= 0.0) throw domain_error("pendulum frequency must be positive");
    const double w2 = p.omega * p.omega;
    return {p.E / 3.0, -p.E / 6.0 + w2 / 2.0, -p.E / 6.0 - w2 / 2.0};
}

inline Invariants pendulum_invariants(const PendulumProblem& p) {
    if (p.omega <= 0.0) throw domain_error("pendulum frequency must be positive");
    const double w4 = p.omega * p.omega * p.omega * p.omega;
    return Invariants{p.E * p.E / 3.0 + w4, (p.E / 3.0) * (p.E * p.E / 9.0 - w4)};
}

inline MotionSolution pendulum_solve(const PendulumProblem& p, double t0) {
    if (p.omega <= 0.0) throw domain_error("pendulum frequency must be positive");
    const double w2 = p.omega * p.omega;
    // boundary energies take the closed forms by direct comparison; the root
    // classifier cannot see them through the rounding of the invariants
    const double energy_tol = 1e-6 * std::max(1.0, w2);
    if (p.E < -w2 - energy_tol) throw below_minimum_energy_error();
    MotionSolution sol;
    sol.t0 = t0;

    if (p.E <= -w2 + energy_tol) { // E = -omega^2, rest at the bottom
        sol.branch = Branch::Bounded;
        sol.period_or_tof = 2.0 * M_PI / p.omega;
        sol.evaluator = [](double) { return MotionSample{0.0, 0.0, false}; };
        return sol;
    }
    if (std::abs(p.E - w2) <= energy_tol) { // E = +omega^2, separatrix
        sol.branch = Branch::Bounded;
        sol.period_or_tof = std::numeric_limits<double>::infinity();
        const double om = p.omega;
        sol.evaluator = [om, t0](double t) {
            const double u = t - t0;
            MotionSample m;
            m.x = 2.0 * std::asin(std::tanh(om * u));
            m.v = 2.0 * om / std::cosh(om * u);
            return m;
        };
        return sol;
    }

    const Invariants inv = pendulum_invariants(p);
    const EllipticContext ctx = make_context(inv, cubic_roots(inv));
    const double om1 = ctx.hp.omega1.real();
    const complex_t om2 = ctx.hp.omega2;
    const double E = p.E;
    sol.shift = om2;

    if (p.E > w2) { // rotating
        sol.branch = Branch::Unbounded;
        sol.period_or_tof = 2.0 * om1; // theta advances by 2 pi per period
        sol.evaluator = [ctx, om1, om2, E, w2, t0](double t) {
            const double u = t - t0;
            const double P = wp(ctx, complex_t(u, 0.0) + om2).real();
            double c = -(2.0 * P + E / 3.0) / w2;
            c = std::clamp(c, -1.0, 1.0);
            const double sgn = detail::parity_sign((long)std::floor(u / om1));
            const double winding = std::floor(u / (2.0 * om1) + 0.5);
            MotionSample m;
            m.x = sgn * std::acos(c) + 2.0 * M_PI * winding;
            m.v = std::sqrt(std::max(0.0, 2.0 * (E + w2 * c)));
            return m;
        };
        return sol;
    }

    // oscillating, |E| < omega^2
    sol.branch = Branch::Bounded;
    sol.period_or_tof = 4.0 * om1;
    sol.evaluator = [ctx, om1, om2, E, w2, t0](double t) {
        const double u = t - t0;
        const complex_t z = complex_t(u, 0.0) + om2;
        const double P = wp(ctx, z).real();
        double c = -(2.0 * P + E / 3.0) / w2;
        c = std::clamp(c, -1.0, 1.0);
        const double sgn = detail::parity_sign((long)std::floor(u / (2.0 * om1)));
        const double swing = (wp_prime(ctx, z).real() >= 0.0) ? 1.0 : -1.0;
        MotionSample m;
        m.x = sgn * std::acos(c);
        m.v = sgn * swing * std::sqrt(std::max(0.0, 2.0 * (E + w2 * c)));
        return m;
    };
    return sol;
}

struct HyperbolicClassification {
    RootKind kind;
    std::array<int, 3> x_of_e; // 1-based index of the x-root assigned to e1, e2, e3
};

namespace detail {

inline void check_hyperbolic(const HyperbolicProblem& p) {
    if (p.omega <= 0.0) throw domain_error("hyperbolic frequency must be positive");
    if (p.sign_s * p.sign_s != 1 || p.sign_tau * p.sign_tau != 1)
        throw domain_error("sign parameters must be +1 or -1");
}

} // namespace detail

inline Invariants hyperbolic_invariants(const HyperbolicProblem& p) {
    detail::check_hyperbolic(p);
    const double w4 = p.omega * p.omega * p.omega * p.omega;
    const double tau = double(p.sign_tau);
    return Invariants{p.E * p.E / 3.0 + tau * w4 / 4.0,
                      -(p.E / 3.0) * (p.E * p.E / 9.0 + tau * w4 / 8.0)};
}

// x1 = E/6, x2/x3 = -E/12 +- (1/4) sqrt(E^2 + tau omega^4)
inline std::array<complex_t, 3> hyperbolic_x_roots(const HyperbolicProblem& p) {
    detail::check_hyperbolic(p);
    const double w4 = p.omega * p.omega * p.omega * p.omega;
    const complex_t rad = std::sqrt(complex_t(p.E * p.E + p.sign_tau * w4, 0.0));
    return {complex_t(p.E / 6.0, 0.0), -p.E / 12.0 + 0.25 * rad, -p.E / 12.0 - 0.25 * rad};
}

inline HyperbolicClassification classify_hyperbolic(const HyperbolicProblem& p) {
    detail::check_hyperbolic(p);
    const CubicRoots roots = cubic_roots(hyperbolic_invariants(p));
    HyperbolicClassification c;
    c.kind = roots.kind;
    if (p.sign_tau > 0) {
        c.x_of_e = {2, 1, 3};
        return c;
    }
    switch (roots.kind) {
        case RootKind::OneReal: c.x_of_e = {2, 1, 3}; break;       // |E| < omega^2
        case RootKind::DoubleSmaller: c.x_of_e = {1, 2, 3}; break; // E = +omega^2
        case RootKind::DoubleLarger: c.x_of_e = {2, 3, 1}; break;  // E = -omega^2
        default: c.x_of_e = (p.E > 0.0) ? std::array<int, 3>{1, 2, 3}
                                        : std::array<int, 3>{2, 3, 1};
    }
    return c;
}

inline MotionSolution hyperbolic_solve(const HyperbolicProblem& p, double t0) {
    detail::check_hyperbolic(p);
    const double w2 = p.omega * p.omega;
    const double s = double(p.sign_s);
    const Invariants inv = hyperbolic_invariants(p);
    const double inf = std::numeric_limits<double>::infinity();
    // boundary energies take the closed forms by direct comparison; the root
    // classifier cannot see them through the rounding of the invariants
    const double energy_tol = 1e-6 * std::max(1.0, w2);
    MotionSolution sol;
    sol.t0 = t0;

    if (p.sign_tau < 0 && p.sign_s > 0) {
        // V = (omega^2/2)(e^x + e^-x) has its minimum omega^2 at x = 0
        if (std::abs(p.E - w2) <= energy_tol) { // E = omega^2: rest at the bottom
            sol.branch = Branch::Bounded;
            sol.period_or_tof = 2.0 * M_PI / p.omega;
            sol.evaluator = [](double) { return MotionSample{0.0, 0.0, false}; };
            return sol;
        }
        if (p.E < w2) throw no_real_solution_error();
        const CubicRoots roots = cubic_roots(inv);
        const EllipticContext ctx = make_context(inv, roots);
        sol.branch = Branch::Bounded;
        sol.shift = ctx.hp.omega3;
        sol.period_or_tof = 2.0 * ctx.hp.omega1.real();
        sol.evaluator = detail::log_track_evaluator(ctx, s, p.E, w2, sol.shift, t0);
        return sol;
    }

    if (p.sign_tau < 0) { // s = -1: V = -omega^2 cosh x, barrier top at -omega^2
        if (std::abs(p.E + w2) <= energy_tol) { // E = -omega^2: creeps up to the top
            sol.branch = Branch::Unbounded;
            sol.period_or_tof = inf;
            const double om = p.omega;
            sol.evaluator = [om, t0](double t) {
                const double u = t - t0;
                MotionSample m;
                m.x = 2.0 * std::log(std::abs(1.0 / std::tanh(0.5 * om * u)));
                m.v = -2.0 * om / std::sinh(om * u);
                if (!detail::sample_ok(m)) return detail::scattered_sample(1.0);
                return m;
            };
            return sol;
        }
        if (p.E < -w2) { // reflected; the branch on the right of the barrier
            const EllipticContext ctx = make_context(inv, cubic_roots(inv));
            sol.branch = Branch::Unbounded;
            sol.shift = ctx.hp.omega1;
            sol.period_or_tof = 2.0 * ctx.hp.omega1.real();
            sol.evaluator = detail::log_track_evaluator(ctx, s, p.E, w2, sol.shift, t0);
            return sol;
        }
        if (std::abs(p.E - w2) <= energy_tol) { // E = +omega^2 transit
            sol.branch = Branch::Unbounded;
            sol.period_or_tof = M_PI / p.omega;
            const double om = p.omega;
            sol.evaluator = [om, t0](double t) {
                const double u = t - t0;
                MotionSample m;
                const double ct = 1.0 / std::tan(0.5 * om * u + 0.25 * M_PI);
                m.x = 2.0 * std::log(std::abs(ct));
                m.v = -2.0 * om / std::cos(om * u);
                if (!detail::sample_ok(m))
                    return detail::scattered_sample(std::abs(ct) > 1.0 ? 1.0 : -1.0);
                return m;
            };
            return sol;
        }
        // transmitted over the barrier; x(t0) = 0 by the half-half-period shift
        const CubicRoots roots = cubic_roots(inv);
        const EllipticContext ctx = make_context(inv, roots);
        sol.branch = Branch::Unbounded;
        if (roots.kind == RootKind::OneReal) { // |E| < omega^2
            sol.shift = 0.5 * ctx.hp.omega3;
            sol.period_or_tof = ctx.hp.omega3.real();
        } else { // E > omega^2
            sol.shift = 0.5 * ctx.hp.omega1;
            sol.period_or_tof = ctx.hp.omega1.real();
        }
        sol.evaluator = detail::log_track_evaluator(ctx, s, p.E, w2, sol.shift, t0);
        return sol;
    }

    // tau = +1: V = +-omega^2 sinh x, always three real roots, always scattering
    const EllipticContext ctx = make_context(inv, cubic_roots(inv));
    sol.branch = Branch::Unbounded;
    sol.shift = (p.sign_s < 0) ? ctx.hp.omega1 : ctx.hp.omega2;
    sol.period_or_tof = 2.0 * ctx.hp.omega1.real();
    sol.evaluator = detail::log_track_evaluator(ctx, s, p.E, w2, sol.shift, t0);
    return sol;
}

} // namespace wkit
