#pragma once

#include <stdexcept>
#include <string>

namespace cis {

// Operand dimensions do not match (cone vs vector, A vs B/C, ...).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A candidate set the theory requires to be nonempty came out empty
// (no canonical basis vector inside the cone or its dual).
struct AssumptionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested shift is not a transmission zero of the system.
struct NotAZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The system pencil is singular for every s: the output is identically
// decoupled from the input and zeros are undefined.
struct DegeneratePencil : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical routine (eigensolver, NNLS, interior-point search) failed
// to produce a usable result.
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cis
