#pragma once

#include <stdexcept>
#include <string>

namespace polystab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define POLYSTAB_DEFINE_ERROR(Name)              \
    class Name : public Error {                  \
    public:                                      \
        explicit Name(const std::string& what)   \
            : Error(#Name ": " + what) {}        \
    }

// numerics
POLYSTAB_DEFINE_ERROR(StepLimitExceeded);
POLYSTAB_DEFINE_ERROR(NonFiniteRhs);
POLYSTAB_DEFINE_ERROR(SingularJacobian);
POLYSTAB_DEFINE_ERROR(ToleranceNotMet);
POLYSTAB_DEFINE_ERROR(ZeroOnContour);
POLYSTAB_DEFINE_ERROR(InvalidArgument);

// model / base state
POLYSTAB_DEFINE_ERROR(NonPositiveTemperature);
POLYSTAB_DEFINE_ERROR(ClosureNoConvergence);
POLYSTAB_DEFINE_ERROR(ClosureBranchLoss);
POLYSTAB_DEFINE_ERROR(NegativeTemperature);

// linearized / spectrum / asymptotics
POLYSTAB_DEFINE_ERROR(ContinuousSpectrumPoint);
POLYSTAB_DEFINE_ERROR(DegenerateProfile);
POLYSTAB_DEFINE_ERROR(StiffnessOverflow);
POLYSTAB_DEFINE_ERROR(UncertifiedRoots);
POLYSTAB_DEFINE_ERROR(PairingAmbiguous);

// tooling
POLYSTAB_DEFINE_ERROR(MissingTrace);
POLYSTAB_DEFINE_ERROR(ConfigError);

#undef POLYSTAB_DEFINE_ERROR

}  // namespace polystab
