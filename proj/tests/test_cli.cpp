#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include <wkit/wkit.hpp>

using Catch::Approx;
using nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

// spawn the installed binary; WKIT_BIN is set by the test harness
RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const std::string path = "cli_capture_" + std::to_string(counter++) + ".txt";
    const char* bin = std::getenv("WKIT_BIN");
    const std::string cmd =
        env + (env.empty() ? "" : " ") + (bin != nullptr ? bin : "./wkit") + " " + args + " > " +
        path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    std::remove(path.c_str());
    return r;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    const auto lines = split(text, '\n');
    REQUIRE_FALSE(lines.empty());
    csv.header = split(lines[0], ',');
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        csv.rows.push_back(split(lines[i], ','));
        REQUIRE(csv.rows.back().size() == csv.header.size());
    }
    return csv;
}

double field(const Csv& csv, size_t row, const std::string& name) {
    for (size_t c = 0; c < csv.header.size(); ++c) {
        if (csv.header[c] != name) continue;
        const std::string& cell = csv.rows[row][c];
        if (cell == "inf") return std::numeric_limits<double>::infinity();
        if (cell == "-inf") return -std::numeric_limits<double>::infinity();
        if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
        return std::strtod(cell.c_str(), nullptr);
    }
    FAIL("no column " + name);
    return 0.0;
}

} // namespace

TEST_CASE("periods subcommand") {
    SECTION("json reports the double-root lattice") {
        const RunResult r = run_cli("periods --g2 12 --g3 8 --format json");
        REQUIRE(r.status == 0);
        const json doc = json::parse(r.out);
        REQUIRE(doc["schema"] == 1);
        REQUIRE(doc["kind"] == "DoubleSmaller");
        REQUIRE(doc["real_period"].get<double>() == Approx(M_PI / std::sqrt(3.0)).margin(1e-12));
        // the lattice opens up in the imaginary direction
        REQUIRE(doc["omega2"]["im"] == "inf");
        REQUIRE(doc["omega1"]["im"].get<double>() == 0.0);
    }
    SECTION("csv row matches the library") {
        const RunResult r = run_cli("periods --g2 4 --g3 0");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        REQUIRE(csv.rows.size() == 1);
        REQUIRE(csv.rows[0][0] == "ThreeReal");
        const wkit::Invariants inv{4.0, 0.0};
        const wkit::HalfPeriods hp = wkit::half_periods(inv, wkit::cubic_roots(inv));
        // %.17g round-trips doubles exactly
        REQUIRE(field(csv, 0, "re_omega1") == hp.omega1.real());
        REQUIRE(field(csv, 0, "im_omega2") == hp.omega2.imag());
        REQUIRE(field(csv, 0, "re_eta1") == hp.eta1.real());
        REQUIRE(field(csv, 0, "re_e1") == Approx(1.0).margin(1e-12));
        REQUIRE(field(csv, 0, "real_period") == 2.0 * hp.omega1.real());
    }
    SECTION("non-finite entries use the bare literals") {
        const RunResult r = run_cli("periods --g2 12 --g3 -8");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        REQUIRE(csv.rows[0][0] == "DoubleLarger");
        REQUIRE(std::isinf(field(csv, 0, "re_omega1")));
        REQUIRE(field(csv, 0, "re_eta1") < 0.0);
        REQUIRE(std::isinf(field(csv, 0, "re_eta1")));
        REQUIRE(std::isinf(field(csv, 0, "real_period")));
    }
}

TEST_CASE("eval subcommand") {
    SECTION("values match the library") {
        const RunResult r =
            run_cli("eval zeta --g2 4 --g3 0 --z-re 1.0 --z-re 0.5 --z-im 0 --z-im 0.25");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        REQUIRE(csv.header == std::vector<std::string>{"re_z", "im_z", "re_f", "im_f"});
        REQUIRE(csv.rows.size() == 2);
        const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{4.0, 0.0});
        const wkit::complex_t f0 = wkit::zeta(ctx, {1.0, 0.0});
        const wkit::complex_t f1 = wkit::zeta(ctx, {0.5, 0.25});
        REQUIRE(field(csv, 0, "re_f") == f0.real());
        REQUIRE(field(csv, 1, "re_f") == f1.real());
        REQUIRE(field(csv, 1, "im_f") == f1.imag());
    }
    SECTION("each function name selects its evaluator") {
        const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{3.0, 0.5});
        const wkit::complex_t z{0.8, 0.0};
        const std::pair<std::string, wkit::complex_t> checks[] = {
            {"wp", wkit::wp(ctx, z)},
            {"wpp", wkit::wp_prime(ctx, z)},
            {"sigma", wkit::sigma(ctx, z)},
        };
        for (const auto& [fn, want] : checks) {
            const RunResult r = run_cli("eval " + fn + " --g2 3 --g3 0.5 --z-re 0.8");
            REQUIRE(r.status == 0);
            const Csv csv = parse_csv(r.out);
            CAPTURE(fn);
            REQUIRE(field(csv, 0, "re_f") == want.real());
        }
    }
    SECTION("mismatched point lists are a usage error") {
        const RunResult r = run_cli("eval wp --g2 4 --g3 0 --z-re 1 --z-re 2 --z-im 0 --z-im 0 --z-im 0");
        REQUIRE(r.status == 2);
    }
}

TEST_CASE("classical trajectories") {
    SECTION("pendulum csv conserves energy") {
        const RunResult r =
            run_cli("classical pendulum --omega 1 --energy 0.5 --t-max 2 --dt 0.05");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        REQUIRE(csv.header ==
                std::vector<std::string>{"t", "theta", "velocity", "energy_residual", "pole"});
        REQUIRE(csv.rows.size() == 41);
        for (size_t i = 0; i < csv.rows.size(); ++i) {
            CAPTURE(i);
            REQUIRE(std::abs(field(csv, i, "energy_residual")) <= 1e-9);
            REQUIRE(field(csv, i, "pole") == 0.0);
        }
        REQUIRE(std::abs(field(csv, 0, "theta")) < 1e-6);
        REQUIRE(field(csv, 0, "velocity") > 0.0);
        // row values round-trip against a fresh solve
        const wkit::MotionSolution sol = wkit::pendulum_solve({1.0, 0.5}, 0.0);
        const double t = field(csv, 20, "t");
        REQUIRE(field(csv, 20, "theta") == sol.evaluator(t).x);
        REQUIRE(field(csv, 20, "velocity") == sol.evaluator(t).v);
    }
    SECTION("unbounded cubic marks its pole row") {
        const RunResult r = run_cli("classical cubic --f0 3 --energy 2 --t-max 1 --dt 0.2");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        REQUIRE(field(csv, 0, "pole") == 1.0);
        REQUIRE(std::isinf(field(csv, 0, "x")));
        REQUIRE(std::isnan(field(csv, 0, "energy_residual")));
        for (size_t i = 1; i < csv.rows.size(); ++i) {
            CAPTURE(i);
            REQUIRE(field(csv, i, "pole") == 0.0);
            const double x = field(csv, i, "x");
            REQUIRE(std::abs(field(csv, i, "energy_residual")) <=
                    1e-9 * (1.0 + std::abs(x * x * x)));
        }
    }
    SECTION("bounded branch preferred when it exists") {
        const RunResult r =
            run_cli("classical cubic --f0 -3 --energy 0.5 --format json --t-max 1 --dt 0.5");
        REQUIRE(r.status == 0);
        const json doc = json::parse(r.out);
        REQUIRE(doc["schema"] == 1);
        REQUIRE(doc["branch"] == "bounded");
        REQUIRE(doc["columns"][1] == "x");
        const double period = doc["period_or_tof"].get<double>();
        const wkit::MotionSolution sol =
            wkit::cubic_solve({-3.0, 0.5}, wkit::Branch::Bounded, 0.0);
        REQUIRE(period == Approx(sol.period_or_tof).epsilon(1e-15));
    }
    SECTION("hyperbolic json keeps non-finite fields as strings") {
        const RunResult r = run_cli(
            "classical hyperbolic --omega 1 --sign-s -1 --sign-tau -1 --energy -1 "
            "--format json --t-max 0.2 --dt 0.1");
        REQUIRE(r.status == 0);
        const json doc = json::parse(r.out);
        REQUIRE(doc["period_or_tof"] == "inf"); // creep never repeats
        REQUIRE(doc["samples"][0][1] == "inf"); // pole row
        REQUIRE(doc["samples"][0][4] == 1);
        REQUIRE(doc["samples"][1][1].is_number());
    }
}

TEST_CASE("lame subcommands") {
    SECTION("band intervals of the lemniscatic lattice") {
        const RunResult r = run_cli("lame bands --g2 4 --g3 0 --format json");
        REQUIRE(r.status == 0);
        const json doc = json::parse(r.out);
        REQUIRE(doc["schema"] == 1);
        REQUIRE(doc["kind"] == "ThreeReal");
        REQUIRE(doc["intervals"].size() == 2);
        REQUIRE(doc["intervals"][0]["lower"].get<double>() == Approx(-1.0).margin(1e-9));
        REQUIRE(doc["intervals"][0]["upper"].get<double>() == Approx(0.0).margin(1e-9));
        REQUIRE(doc["intervals"][1]["lower"].get<double>() == Approx(1.0).margin(1e-9));
        REQUIRE(doc["intervals"][1]["upper"] == "inf");
        REQUIRE(doc["intervals"][1]["unbounded_above"] == true);
    }
    SECTION("band csv labels") {
        const RunResult r = run_cli("lame bands --g2 4 --g3 0 --samples 24");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        REQUIRE(csv.header == std::vector<std::string>{"lambda", "re_k", "im_k", "band_label"});
        REQUIRE(csv.rows.size() == 96);
        int valence = 0, conduction = 0, gap = 0;
        for (size_t i = 0; i < csv.rows.size(); ++i) {
            const std::string& label = csv.rows[i][3];
            if (label == "valence") {
                ++valence;
                REQUIRE(std::abs(field(csv, i, "im_k")) <= 1e-9);
            } else if (label == "conduction") {
                ++conduction;
            } else if (label == "gap") {
                ++gap;
                REQUIRE(std::abs(field(csv, i, "im_k")) > 1e-9);
            } else {
                REQUIRE(label == "edge");
            }
        }
        REQUIRE(valence >= 20);
        REQUIRE(conduction >= 20);
        REQUIRE(gap >= 40);
    }
    SECTION("tight tolerance empties the bands") {
        const RunResult r = run_cli("lame bands --g2 4 --g3 0 --samples 24", "WKIT_TOL=1e-30");
        REQUIRE(r.status == 0);
        const Csv csv = parse_csv(r.out);
        int valence = 0;
        for (const auto& row : csv.rows)
            if (row[3] == "valence") ++valence;
        REQUIRE(valence <= 2);
    }
    SECTION("eigen emits the spectral point and samples") {
        const RunResult r =
            run_cli("lame eigen --g2 4 --g3 0 --a-re 0.6555 --a-im 0.0 --samples 16 --format json");
        REQUIRE(r.status == 0);
        const json doc = json::parse(r.out);
        const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{4.0, 0.0});
        REQUIRE(doc["lambda"].get<double>() ==
                Approx(-wkit::wp(ctx, {0.6555, 0.0}).real()).margin(1e-12));
        REQUIRE(doc["band"] == "gap");
        REQUIRE(doc["samples"].size() == 16);
        auto y = wkit::eigenfunction(ctx, {0.6555, 0.0}, +1);
        const double x = doc["samples"][3]["x"].get<double>();
        REQUIRE(doc["samples"][3]["y_plus"]["re"].get<double>() == y(x).real());
    }
}

TEST_CASE("exit status mapping") {
    REQUIRE(run_cli("periods --g2 4").status == 2);              // missing flag
    REQUIRE(run_cli("nonsense").status == 2);                    // unknown command
    REQUIRE(run_cli("--help").status == 0);
    REQUIRE(run_cli("lame bands --g2 4 --g3 0 --samples 8").status == 2);
    REQUIRE(run_cli("lame bands --g2 4 --g3 0", "WKIT_TOL=x").status == 2);
    REQUIRE(run_cli("classical pendulum --omega 1 --energy -5 --t-max 1").status == 3);
    REQUIRE(run_cli("periods --g2 0 --g3 0").status == 3);       // triple root
    REQUIRE(run_cli("eval wp --g2 4 --g3 0 --z-re 0").status == 3); // pole
    REQUIRE(run_cli("classical hyperbolic --omega 1 --sign-s 1 --sign-tau -1 "
                    "--energy 0.2 --t-max 1").status == 3); // below the well minimum
    REQUIRE(run_cli("classical cubic --f0 -3 --energy 1 --t-max 1 --dt -0.5").status == 2);
}

TEST_CASE("deterministic output") {
    const std::string jobs[] = {
        "lame bands --g2 3 --g3 0.5 --format json",
        "classical cubic --f0 -3 --energy 0.5 --t-max 3 --dt 0.1",
        "periods --g2 -2 --g3 1.5 --format json",
    };
    for (const std::string& job : jobs) {
        const RunResult a = run_cli(job);
        const RunResult b = run_cli(job);
        CAPTURE(job);
        REQUIRE(a.status == 0);
        REQUIRE(a.out == b.out);
        REQUIRE_FALSE(a.out.empty());
    }
}

TEST_CASE("output file flag") {
    const std::string path = "cli_file_flag_probe.csv";
    const RunResult r = run_cli("eval wp --g2 4 --g3 0 --z-re 0.7 --out " + path);
    REQUIRE(r.status == 0);
    REQUIRE(r.out.empty()); // nothing on stdout
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    f.close();
    std::remove(path.c_str());
    const Csv csv = parse_csv(ss.str());
    const wkit::EllipticContext ctx = wkit::make_context(wkit::Invariants{4.0, 0.0});
    REQUIRE(field(csv, 0, "re_f") == wkit::wp(ctx, {0.7, 0.0}).real());
}
