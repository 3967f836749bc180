#pragma once

#include <stdexcept>
#include <string>

namespace wavecrit {

// Argument outside the mathematical domain of an operation (d < 3, p < 1, M > N, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Mismatched grids, wrong array sizes, empty trajectories.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A Fourier symbol is undefined at a lattice point that carries mass.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Negative-order derivative requested on a field with nonzero mean.
class MeanNonzeroError : public SingularityError {
public:
    using SingularityError::SingularityError;
};

// Frequency content would wrap around the lattice.
class AliasingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Periodic wrap-around time reached in a dispersive measurement.
class HorizonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Explicit reference integrator asked to run above its CFL limit.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Picard iteration failed to reach the tolerance.
class ContractionFailure : public std::runtime_error {
public:
    explicit ContractionFailure(const std::string& what, int iterations = 0, double residual = 0.0)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

// Requested quantity needs data the trajectory does not have (truncated run, missing time).
class UnavailableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monotone iteration did not settle; the recursion has no bounded fixed point.
class NoFixedPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter set outside the range where a lemma applies.
class InapplicableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Internal invariant violated; indicates a bug, never user input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace wavecrit
