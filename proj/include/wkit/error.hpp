#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wkit {

// Error taxonomy. domain_error covers inputs the math rejects (exit 3 in the
// CLI), numerical_error covers computations that failed to converge or lost
// accuracy (exit 4).

class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

class pole_error : public domain_error {
public:
    std::complex<double> where;
    explicit pole_error(std::complex<double> z)
        : domain_error("evaluation point congruent to a pole"), where(z) {}
};

class triple_root_error : public domain_error {
public:
    triple_root_error() : domain_error("triple root: lattice degenerates, no periods exist") {}
};

class degenerate_lattice_error : public domain_error {
public:
    degenerate_lattice_error() : domain_error("period ratio is real: lattice is degenerate") {}
};

class non_unimodular_error : public domain_error {
public:
    non_unimodular_error() : domain_error("matrix determinant is not +-1") {}
};

class zero_scale_error : public domain_error {
public:
    zero_scale_error() : domain_error("rescale factor must be nonzero") {}
};

class degenerate_arguments_error : public domain_error {
public:
    degenerate_arguments_error() : domain_error("wp(z) - wp(w) vanishes: addition formula degenerate") {}
};

class stationary_point_error : public domain_error {
public:
    stationary_point_error() : domain_error("wp'(z) vanishes: duplication formula degenerate") {}
};

class no_bounded_branch_error : public domain_error {
public:
    no_bounded_branch_error() : domain_error("bounded branch requires three real roots") {}
};

class below_minimum_energy_error : public domain_error {
public:
    below_minimum_energy_error() : domain_error("pendulum energy below potential minimum") {}
};

class no_real_solution_error : public domain_error {
public:
    no_real_solution_error() : domain_error("no real trajectory for this sign/energy combination") {}
};

class spectral_parameter_error : public domain_error {
public:
    spectral_parameter_error() : domain_error("spectral parameter congruent to a lattice point") {}
};

class degenerate_roots_error : public domain_error {
public:
    degenerate_roots_error() : domain_error("operation requires distinct roots") {}
};

class one_real_classification_error : public domain_error {
public:
    one_real_classification_error() : domain_error("operation requires three real roots") {}
};

} // namespace wkit
