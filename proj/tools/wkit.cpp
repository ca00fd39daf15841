// Command line front end. Every subcommand is a pure batch job: same flags,
// same bytes out. CSV for plotting pipelines, JSON for structured consumers.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wkit/wkit.hpp>

using nlohmann::json;
using wkit::complex_t;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits; non-finite values as the bare literals inf/-inf/nan
std::string num17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON has no non-finite numbers, so those become the same literals as strings
json jnum(double v) {
    if (std::isfinite(v)) return v;
    return num17(v);
}

json jcomplex(complex_t z) { return json{{"re", jnum(z.real())}, {"im", jnum(z.imag())}}; }

// band classification tolerance; WKIT_TOL overrides the documented 1e-9
double tolerance_from_env() {
    const char* env = std::getenv("WKIT_TOL");
    if (env == nullptr || *env == '\0') return 1e-9;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0.0)
        throw usage_error("WKIT_TOL must be a positive number");
    return v;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw usage_error("cannot open output file: " + path);
    f << text;
}

struct CommonOpts {
    double g2 = 0.0, g3 = 0.0;
    std::string format = "csv";
    std::string out;
};

void add_format_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

void add_invariant_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--g2", o.g2, "invariant g2 of the cubic 4t^3 - g2 t - g3")->required();
    cmd->add_option("--g3", o.g3, "invariant g3")->required();
}

double real_period_of(const wkit::CubicRoots& roots, const wkit::HalfPeriods& hp) {
    switch (roots.kind) {
        case wkit::RootKind::ThreeReal:
        case wkit::RootKind::DoubleSmaller: return 2.0 * hp.omega1.real();
        case wkit::RootKind::OneReal: return 2.0 * hp.omega3.real();
        default: return std::numeric_limits<double>::infinity();
    }
}

void run_periods(const CommonOpts& o) {
    const wkit::Invariants inv{o.g2, o.g3};
    const wkit::CubicRoots roots = wkit::cubic_roots(inv);
    const wkit::HalfPeriods hp = wkit::half_periods(inv, roots);
    const double period = real_period_of(roots, hp);
    if (o.format == "json") {
        json doc{{"schema", 1},
                 {"command", "periods"},
                 {"g2", jnum(o.g2)},
                 {"g3", jnum(o.g3)},
                 {"kind", wkit::to_string(roots.kind)},
                 {"omega1", jcomplex(hp.omega1)},
                 {"omega2", jcomplex(hp.omega2)},
                 {"omega3", jcomplex(hp.omega3)},
                 {"eta1", jcomplex(hp.eta1)},
                 {"eta2", jcomplex(hp.eta2)},
                 {"roots",
                  json{{"e1", jcomplex(roots.e1)}, {"e2", jcomplex(roots.e2)},
                       {"e3", jcomplex(roots.e3)}}},
                 {"real_period", jnum(period)}};
        write_output(o.out, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream s;
    s << "kind,re_omega1,im_omega1,re_omega2,im_omega2,re_omega3,im_omega3,"
         "re_eta1,im_eta1,re_eta2,im_eta2,re_e1,im_e1,re_e2,im_e2,re_e3,im_e3,real_period\n";
    s << wkit::to_string(roots.kind);
    for (const complex_t z : {hp.omega1, hp.omega2, hp.omega3, hp.eta1, hp.eta2, roots.e1,
                              roots.e2, roots.e3})
        s << ',' << num17(z.real()) << ',' << num17(z.imag());
    s << ',' << num17(period) << '\n';
    write_output(o.out, s.str());
}

void run_eval(const CommonOpts& o, const std::string& fn, const std::vector<double>& z_re,
              const std::vector<double>& z_im) {
    if (!z_im.empty() && z_im.size() != z_re.size())
        throw usage_error("--z-im must be given once per --z-re or not at all");
    const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{o.g2, o.g3});
    std::vector<std::pair<complex_t, complex_t>> rows;
    for (size_t i = 0; i < z_re.size(); ++i) {
        const complex_t z(z_re[i], i < z_im.size() ? z_im[i] : 0.0);
        complex_t f;
        if (fn == "wp") f = wkit::wp(ctx, z);
        else if (fn == "wpp") f = wkit::wp_prime(ctx, z);
        else if (fn == "zeta") f = wkit::zeta(ctx, z);
        else f = wkit::sigma(ctx, z);
        rows.emplace_back(z, f);
    }
    if (o.format == "json") {
        json values = json::array();
        for (const auto& [z, f] : rows)
            values.push_back(json{{"z", jcomplex(z)}, {"f", jcomplex(f)}});
        json doc{{"schema", 1},      {"command", "eval"}, {"function", fn},
                 {"g2", jnum(o.g2)}, {"g3", jnum(o.g3)},  {"values", values}};
        write_output(o.out, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream s;
    s << "re_z,im_z,re_f,im_f\n";
    for (const auto& [z, f] : rows)
        s << num17(z.real()) << ',' << num17(z.imag()) << ','
          << num17(f.real()) << ',' << num17(f.imag()) << '\n';
    write_output(o.out, s.str());
}

struct ClassicalOpts {
    double energy = 0.0, f0 = 0.0, omega = 1.0;
    int sign_s = -1, sign_tau = 1;
    double t0 = 0.0, t_max = 10.0, dt = 0.01;
    std::string format = "csv";
    std::string out;
};

void run_classical(const std::string& which, const ClassicalOpts& o) {
    if (o.t_max < o.t0) throw usage_error("--t-max must not precede --t0");
    wkit::MotionSolution sol;
    std::function<double(const wkit::MotionSample&)> residual;
    std::string coordinate = "x";
    json parameters;
    if (which == "cubic") {
        const wkit::CubicProblem p{o.f0, o.energy};
        // no branch flag: prefer the bounded orbit, fall back to scattering
        try {
            sol = wkit::cubic_solve(p, wkit::Branch::Bounded, o.t0);
        } catch (const wkit::no_bounded_branch_error&) {
            sol = wkit::cubic_solve(p, wkit::Branch::Unbounded, o.t0);
        }
        residual = [p](const wkit::MotionSample& m) {
            return 0.5 * m.v * m.v - 0.5 * (4.0 * m.x * m.x * m.x + p.F0 * m.x) - 0.5 * p.E;
        };
        parameters = json{{"f0", jnum(p.F0)}, {"energy", jnum(p.E)}};
    } else if (which == "pendulum") {
        const wkit::PendulumProblem p{o.omega, o.energy};
        sol = wkit::pendulum_solve(p, o.t0);
        residual = [p](const wkit::MotionSample& m) {
            return 0.5 * m.v * m.v - p.omega * p.omega * std::cos(m.x) - p.E;
        };
        coordinate = "theta";
        parameters = json{{"omega", jnum(p.omega)}, {"energy", jnum(p.E)}};
    } else {
        const wkit::HyperbolicProblem p{o.omega, o.sign_s, o.sign_tau, o.energy};
        sol = wkit::hyperbolic_solve(p, o.t0);
        residual = [p](const wkit::MotionSample& m) {
            const double v_pot = 0.5 * double(p.sign_s) * p.omega * p.omega *
                                 (std::exp(m.x) - double(p.sign_tau) * std::exp(-m.x));
            return 0.5 * m.v * m.v + v_pot - p.E;
        };
        parameters = json{{"omega", jnum(p.omega)},
                          {"sign_s", p.sign_s},
                          {"sign_tau", p.sign_tau},
                          {"energy", jnum(p.E)}};
    }
    const long n = long(std::floor((o.t_max - o.t0) / o.dt + 1e-9)) + 1;
    if (o.format == "json") {
        json samples = json::array();
        for (long i = 0; i < n; ++i) {
            const double t = o.t0 + double(i) * o.dt;
            const wkit::MotionSample m = sol.evaluator(t);
            samples.push_back(json::array(
                {jnum(t), jnum(m.x), jnum(m.v), jnum(residual(m)), m.scattered ? 1 : 0}));
        }
        json doc{{"schema", 1},
                 {"command", "classical"},
                 {"problem", which},
                 {"parameters", parameters},
                 {"branch", sol.branch == wkit::Branch::Bounded ? "bounded" : "unbounded"},
                 {"period_or_tof", jnum(sol.period_or_tof)},
                 {"columns", json::array({"t", coordinate, "velocity", "energy_residual", "pole"})},
                 {"samples", samples}};
        write_output(o.out, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream s;
    s << "t," << coordinate << ",velocity,energy_residual,pole\n";
    for (long i = 0; i < n; ++i) {
        const double t = o.t0 + double(i) * o.dt;
        const wkit::MotionSample m = sol.evaluator(t);
        s << num17(t) << ',' << num17(m.x) << ',' << num17(m.v) << ','
          << num17(residual(m)) << ',' << (m.scattered ? 1 : 0) << '\n';
    }
    write_output(o.out, s.str());
}

void run_lame_bands(const CommonOpts& o, int samples) {
    const double tol = tolerance_from_env();
    const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{o.g2, o.g3});
    const wkit::BandStructure bs = wkit::band_structure(ctx, samples, tol);
    if (o.format == "json") {
        json intervals = json::array();
        for (const wkit::BandInterval& iv : bs.intervals)
            intervals.push_back(json{{"lower", jnum(iv.lower)},
                                     {"upper", jnum(iv.upper)},
                                     {"unbounded_above", iv.unbounded_above}});
        json states = json::array();
        for (const wkit::BlochState& st : bs.states)
            states.push_back(json{{"lambda", jnum(st.lambda)},
                                  {"k", jcomplex(st.k)},
                                  {"band", wkit::to_string(st.band)}});
        json doc{{"schema", 1},
                 {"command", "lame"},
                 {"mode", "bands"},
                 {"g2", jnum(o.g2)},
                 {"g3", jnum(o.g3)},
                 {"kind", wkit::to_string(bs.kind)},
                 {"tolerance", jnum(tol)},
                 {"intervals", intervals},
                 {"states", states}};
        write_output(o.out, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream s;
    s << "lambda,re_k,im_k,band_label\n";
    for (const wkit::BlochState& st : bs.states)
        s << num17(st.lambda) << ',' << num17(st.k.real()) << ',' << num17(st.k.imag()) << ','
          << wkit::to_string(st.band) << '\n';
    write_output(o.out, s.str());
}

void run_lame_eigen(const CommonOpts& o, double a_re, double a_im, int samples) {
    const double tol = tolerance_from_env();
    const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{o.g2, o.g3});
    const complex_t a(a_re, a_im);
    const wkit::Eigenpair ep = wkit::make_eigenpair(ctx, a);
    const wkit::BlochState st = wkit::classify_spectral_point(ctx, a, tol);
    const bool three = (ctx.roots.kind == wkit::RootKind::ThreeReal);
    const double L = 2.0 * (three ? ctx.hp.omega1.real() : ctx.hp.omega3.real());
    std::vector<double> xs;
    for (int i = 0; i < samples; ++i) xs.push_back(L * (double(i) + 0.5) / double(samples));
    if (o.format == "json") {
        json rows = json::array();
        for (const double x : xs) {
            const complex_t yp = ep.y_plus(x), ym = ep.y_minus(x);
            rows.push_back(json{{"x", jnum(x)}, {"y_plus", jcomplex(yp)}, {"y_minus", jcomplex(ym)}});
        }
        json doc{{"schema", 1},
                 {"command", "lame"},
                 {"mode", "eigen"},
                 {"g2", jnum(o.g2)},
                 {"g3", jnum(o.g3)},
                 {"a", jcomplex(a)},
                 {"lambda", jnum(ep.lambda)},
                 {"k", jcomplex(ep.k)},
                 {"band", wkit::to_string(st.band)},
                 {"period", jnum(L)},
                 {"samples", rows}};
        write_output(o.out, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream s;
    s << "x,re_y_plus,im_y_plus,re_y_minus,im_y_minus\n";
    for (const double x : xs) {
        const complex_t yp = ep.y_plus(x), ym = ep.y_minus(x);
        s << num17(x) << ',' << num17(yp.real()) << ',' << num17(yp.imag()) << ','
          << num17(ym.real()) << ',' << num17(ym.imag()) << '\n';
    }
    write_output(o.out, s.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weierstrass elliptic function toolkit"};
    app.require_subcommand(1);

    CommonOpts periods_opts;
    CLI::App* periods_cmd = app.add_subcommand("periods", "half periods and quasi-period constants");
    add_invariant_options(periods_cmd, periods_opts);
    add_format_options(periods_cmd, periods_opts);

    CommonOpts eval_opts;
    std::vector<double> z_re, z_im;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one of the lattice functions");
    eval_cmd->require_subcommand(1);
    std::vector<CLI::App*> eval_leaves;
    for (const char* fn : {"wp", "wpp", "zeta", "sigma"}) {
        CLI::App* leaf = eval_cmd->add_subcommand(fn);
        add_invariant_options(leaf, eval_opts);
        add_format_options(leaf, eval_opts);
        leaf->add_option("--z-re", z_re, "evaluation point, real part (repeatable)")->required();
        leaf->add_option("--z-im", z_im, "evaluation point, imaginary part");
        eval_leaves.push_back(leaf);
    }

    ClassicalOpts classical_opts;
    CLI::App* classical_cmd = app.add_subcommand("classical", "solve one of the classical problems");
    classical_cmd->require_subcommand(1);
    CLI::App* cubic_cmd = classical_cmd->add_subcommand("cubic", "xdot^2 = 4x^3 + F0 x + E");
    cubic_cmd->add_option("--f0", classical_opts.f0, "force constant F0")->required();
    CLI::App* pendulum_cmd = classical_cmd->add_subcommand("pendulum", "plane pendulum");
    pendulum_cmd->add_option("--omega", classical_opts.omega, "frequency")->required();
    CLI::App* hyperbolic_cmd =
        classical_cmd->add_subcommand("hyperbolic", "exponential potential wells and barriers");
    hyperbolic_cmd->add_option("--omega", classical_opts.omega, "frequency scale")->required();
    hyperbolic_cmd->add_option("--sign-s", classical_opts.sign_s, "overall sign s")
        ->required()
        ->check(CLI::IsMember({-1, 1}));
    hyperbolic_cmd->add_option("--sign-tau", classical_opts.sign_tau, "cross-term sign tau")
        ->required()
        ->check(CLI::IsMember({-1, 1}));
    for (CLI::App* leaf : {cubic_cmd, pendulum_cmd, hyperbolic_cmd}) {
        leaf->add_option("--energy", classical_opts.energy, "conserved energy")->required();
        leaf->add_option("--t0", classical_opts.t0, "time origin");
        leaf->add_option("--t-max", classical_opts.t_max, "last sample time");
        leaf->add_option("--dt", classical_opts.dt, "sample spacing")->check(CLI::PositiveNumber);
        leaf->add_option("--format", classical_opts.format)->check(CLI::IsMember({"csv", "json"}));
        leaf->add_option("--out", classical_opts.out, "output path (default stdout)");
    }

    CommonOpts lame_opts;
    int lame_samples = 64;
    double a_re = 0.0, a_im = 0.0;
    CLI::App* lame_cmd = app.add_subcommand("lame", "band structure of the n=1 potential");
    lame_cmd->require_subcommand(1);
    CLI::App* bands_cmd = lame_cmd->add_subcommand("bands", "scan the spectral boundary");
    CLI::App* eigen_cmd = lame_cmd->add_subcommand("eigen", "eigenfunctions at one spectral point");
    for (CLI::App* leaf : {bands_cmd, eigen_cmd}) {
        add_invariant_options(leaf, lame_opts);
        add_format_options(leaf, lame_opts);
        leaf->add_option("--samples", lame_samples, "samples per segment")
            ->check(CLI::Range(16, 100000));
    }
    eigen_cmd->add_option("--a-re", a_re, "spectral parameter, real part")->required();
    eigen_cmd->add_option("--a-im", a_im, "spectral parameter, imaginary part");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (periods_cmd->parsed()) {
            run_periods(periods_opts);
        } else if (eval_cmd->parsed()) {
            for (CLI::App* leaf : eval_leaves)
                if (leaf->parsed()) run_eval(eval_opts, leaf->get_name(), z_re, z_im);
        } else if (classical_cmd->parsed()) {
            for (CLI::App* leaf : {cubic_cmd, pendulum_cmd, hyperbolic_cmd})
                if (leaf->parsed()) run_classical(leaf->get_name(), classical_opts);
        } else if (lame_cmd->parsed()) {
            if (bands_cmd->parsed()) run_lame_bands(lame_opts, lame_samples);
            if (eigen_cmd->parsed()) run_lame_eigen(lame_opts, a_re, a_im, lame_samples);
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const wkit::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const wkit::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
