// Bounded orbit of x'' = 6x^2 + F0/2 (energy x'^2 = 4x^3 + F0 x + E),
// printed as CSV over one period. Pipe into any plotter.
//
//   demo_cubic_orbit [F0 E]     defaults: F0 = -3, E = 0.5

#include <cstdio>
#include <cstdlib>

#include <wkit/wkit.hpp>

int main(int argc, char** argv) {
    const double F0 = (argc > 1) ? std::atof(argv[1]) : -3.0;
    const double E = (argc > 2) ? std::atof(argv[2]) : 0.5;

    wkit::MotionSolution sol;
    try {
        sol = wkit::cubic_solve({F0, E}, wkit::Branch::Bounded, 0.0);
    } catch (const wkit::no_bounded_branch_error&) {
        std::fprintf(stderr, "no bounded orbit at F0 = %g, E = %g\n", F0, E);
        return 3;
    }

    const double T = sol.period_or_tof;
    std::fprintf(stderr, "period %.12g\n", T);
    std::printf("t,x,v\n");
    for (int i = 0; i <= 400; ++i) {
        const double t = T * double(i) / 400.0;
        const wkit::MotionSample m = sol.evaluator(t);
        std::printf("%.12g,%.12g,%.12g\n", t, m.x, m.v);
    }
    return 0;
}
