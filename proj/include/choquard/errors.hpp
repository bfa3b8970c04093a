#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "Error"; }
};

#define CHOQUARD_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(what) {}       \
        const char* kind() const noexcept override { return #Name; } \
    };

// symmetry
CHOQUARD_DEFINE_ERROR(ClosureOverflow)
CHOQUARD_DEFINE_ERROR(NotOrthogonal)
CHOQUARD_DEFINE_ERROR(ZeroPoint)
// radial
CHOQUARD_DEFINE_ERROR(DivergentTail)
CHOQUARD_DEFINE_ERROR(NonPositiveValues)
CHOQUARD_DEFINE_ERROR(IllConditionedFit)
CHOQUARD_DEFINE_ERROR(InvalidGrid)
// riesz
CHOQUARD_DEFINE_ERROR(OutOfRange)
CHOQUARD_DEFINE_ERROR(PaddingInsufficient)
CHOQUARD_DEFINE_ERROR(HypothesisViolated)
// groundstate
CHOQUARD_DEFINE_ERROR(InvalidParams)
CHOQUARD_DEFINE_ERROR(ZeroFunction)
CHOQUARD_DEFINE_ERROR(NoConvergence)
CHOQUARD_DEFINE_ERROR(CollapseToZero)
CHOQUARD_DEFINE_ERROR(RegimeRejected)
// asymptotics
CHOQUARD_DEFINE_ERROR(UncoveredCase)
// interaction
CHOQUARD_DEFINE_ERROR(BudgetTooSmall)
CHOQUARD_DEFINE_ERROR(InvalidConfig)
// cli
CHOQUARD_DEFINE_ERROR(ConfigInvalid)
CHOQUARD_DEFINE_ERROR(IoFailure)

#undef CHOQUARD_DEFINE_ERROR

}  // namespace choquard
