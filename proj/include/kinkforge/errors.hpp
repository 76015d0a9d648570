#pragma once

#include <stdexcept>
#include <string>

namespace kinkforge {

/// Base class for every error raised by the toolkit. The `kind()` string is
/// stable and used in machine-readable reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define KINKFORGE_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(#Name, what) {}    \
    }

// exact algebra
KINKFORGE_DEFINE_ERROR(DivisionByZero);
KINKFORGE_DEFINE_ERROR(NotDivisible);
KINKFORGE_DEFINE_ERROR(IdenticallyZero);
KINKFORGE_DEFINE_ERROR(ParseError);

// system model
KINKFORGE_DEFINE_ERROR(InvalidParameter);

// painleve
KINKFORGE_DEFINE_ERROR(NoBalance);
KINKFORGE_DEFINE_ERROR(InternalInconsistency);
KINKFORGE_DEFINE_ERROR(NoResonance);

// ansatz / solve
KINKFORGE_DEFINE_ERROR(ZeroDenominator);
KINKFORGE_DEFINE_ERROR(ReconstructionFailed);

// catalog
KINKFORGE_DEFINE_ERROR(SingularSample);
KINKFORGE_DEFINE_ERROR(Unbounded);
KINKFORGE_DEFINE_ERROR(UnknownEntry);

// simulate
KINKFORGE_DEFINE_ERROR(SingularOnGrid);
KINKFORGE_DEFINE_ERROR(Blowup);
KINKFORGE_DEFINE_ERROR(StabilityViolation);
KINKFORGE_DEFINE_ERROR(NoCrossing);
KINKFORGE_DEFINE_ERROR(MultipleCrossings);

#undef KINKFORGE_DEFINE_ERROR

}  // namespace kinkforge
