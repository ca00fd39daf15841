// Band structure of -y'' + 2 wp(x) y = lambda y for one lattice: the
// intervals go to stderr, the sampled dispersion lambda(k) to stdout.
//
//   demo_band_edges [g2 g3]     defaults: g2 = 4, g3 = 0

#include <cstdio>
#include <cstdlib>

#include <wkit/wkit.hpp>

int main(int argc, char** argv) {
    const double g2 = (argc > 1) ? std::atof(argv[1]) : 4.0;
    const double g3 = (argc > 2) ? std::atof(argv[2]) : 0.0;

    try {
        const wkit::EllipticContext ctx = wkit::make_context({g2, g3});
        const wkit::BandStructure bs = wkit::band_structure(ctx, 96);
        for (const wkit::BandInterval& b : bs.intervals) {
            if (b.unbounded_above)
                std::fprintf(stderr, "band [%.9g, inf)\n", b.lower);
            else
                std::fprintf(stderr, "band [%.9g, %.9g]\n", b.lower, b.upper);
        }
        std::printf("lambda,re_k,im_k,band\n");
        for (const wkit::BlochState& s : bs.states) {
            std::printf("%.12g,%.12g,%.12g,%s\n", s.lambda, s.k.real(), s.k.imag(),
                        wkit::to_string(s.band));
        }
    } catch (const wkit::domain_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    }
    return 0;
}
