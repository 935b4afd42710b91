#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hypac {

/// Root of every error raised by the library. `kind()` is a stable
/// identifier used in machine-readable failure reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define HYPAC_DEFINE_ERROR(Name)                                             \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

// potential
HYPAC_DEFINE_ERROR(NondegenerateWellViolation);
HYPAC_DEFINE_ERROR(NegativePotential);
HYPAC_DEFINE_ERROR(WellMismatch);
HYPAC_DEFINE_ERROR(MonotonicityViolation);

// geometry
HYPAC_DEFINE_ERROR(DomainError);
HYPAC_DEFINE_ERROR(DegenerateConfiguration);
HYPAC_DEFINE_ERROR(IntersectingGeodesics);

// profile
HYPAC_DEFINE_ERROR(NewtonDivergence);
HYPAC_DEFINE_ERROR(MonotonicityFailure);
HYPAC_DEFINE_ERROR(WindowTooSmall);
HYPAC_DEFINE_ERROR(IterationStall);
HYPAC_DEFINE_ERROR(ExponentOutOfRange);

// gluing
HYPAC_DEFINE_ERROR(SeparationTooSmall);

// pdesolve
HYPAC_DEFINE_ERROR(MaskError);
HYPAC_DEFINE_ERROR(TruncationTooTight);
HYPAC_DEFINE_ERROR(ContractionFailure);
HYPAC_DEFINE_ERROR(LinearSolveFailure);
HYPAC_DEFINE_ERROR(EmptyNodalSet);

// cli
HYPAC_DEFINE_ERROR(ParseError);
HYPAC_DEFINE_ERROR(InvalidArgument);

#undef HYPAC_DEFINE_ERROR

/// One rejected configuration field.
struct Violation {
    std::string path;        // e.g. "geodesics[1].theta2_deg"
    std::string constraint;  // what was required
    std::string found;       // the offending value
};

class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

}  // namespace hypac
