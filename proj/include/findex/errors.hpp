#pragma once

#include <stdexcept>
#include <string>

namespace findex {

// Failure modes of the numerical pipeline.  "Computational" codes mean a
// mathematical precondition failed on valid input (CLI exit code 1);
// Schema/Usage mean the input itself is malformed (exit code 2).
enum class Err {
    EigenFailure,
    NoStabilization,
    OddDifference,
    SymplecticityLost,
    DegenerateMeanHessian,
    EndpointCrossing,
    NotACrossing,
    DegenerateEndpoint,
    DegenerateCrossing,
    RegularityFailure,
    HalfIntegerResult,
    DegenerateProblem,
    DegenerateOrbitPresent,
    NonContractibleLoop,
    ZeroEndpoint,
    HorizonTooSmall,
    RegularValueNotFound,
    Instability,
    DimensionMismatch,
    Precondition,
    SchemaError,
};

const char* err_name(Err e);

class ComputationError : public std::runtime_error {
  public:
    ComputationError(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

  private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
    throw ComputationError(code, what);
}

}  // namespace findex
