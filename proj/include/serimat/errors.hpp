#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace serimat {

// Exit-code classes for the CLI. Every library error belongs to exactly one
// class; the numeric value is the process exit code.
enum class ErrorClass : int {
    hypothesis = 10,  // the discriminant / normal-crossings hypothesis fails
    field_limit = 11, // exact field Q(i, sqrt 2) is too small for the input
    tolerance = 12,   // a residual or consistency check breached tolerance
    parse = 13,       // malformed input file or schema violation
    usage = 14,       // dimension/shape/precondition misuse
    math = 15,        // arithmetic domain errors (division by zero, non-unit, ...)
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string name, const std::string& what)
        : std::runtime_error(what.empty() ? name : name + ": " + what),
          cls_(cls),
          name_(std::move(name)) {}

    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }
    const std::string& name() const noexcept { return name_; }

private:
    ErrorClass cls_;
    std::string name_;
};

#define SERIMAT_DEFINE_ERROR(NAME, CLASS)                    \
    class NAME : public Error {                              \
    public:                                                  \
        explicit NAME(const std::string& what = std::string()) \
            : Error(ErrorClass::CLASS, #NAME, what) {}       \
    }

SERIMAT_DEFINE_ERROR(DivisionByZero, math);
SERIMAT_DEFINE_ERROR(NegativeInput, math);
SERIMAT_DEFINE_ERROR(NotASquareInField, field_limit);
SERIMAT_DEFINE_ERROR(DimensionMismatch, usage);
SERIMAT_DEFINE_ERROR(NotAUnit, math);
SERIMAT_DEFINE_ERROR(ZeroSeries, math);
SERIMAT_DEFINE_ERROR(NotDivisible, math);
SERIMAT_DEFINE_ERROR(OrderViolation, usage);
SERIMAT_DEFINE_ERROR(NotSquare, usage);
SERIMAT_DEFINE_ERROR(InsufficientPowerSums, usage);
SERIMAT_DEFINE_ERROR(TooLarge, usage);
SERIMAT_DEFINE_ERROR(AllCoefficientsZero, usage);
SERIMAT_DEFINE_ERROR(NotCoprime, math);
SERIMAT_DEFINE_ERROR(SpectrumNotSplit, field_limit);
SERIMAT_DEFINE_ERROR(SingleEigenvalue, usage);
SERIMAT_DEFINE_ERROR(SylvesterFailure, math);
SERIMAT_DEFINE_ERROR(NormalityViolation, tolerance);
SERIMAT_DEFINE_ERROR(NotNormal, usage);
SERIMAT_DEFINE_ERROR(HypothesisViolated, hypothesis);
SERIMAT_DEFINE_ERROR(NotMonomialUnit, hypothesis);
SERIMAT_DEFINE_ERROR(PairingFailure, tolerance);
SERIMAT_DEFINE_ERROR(RefinementHypothesisViolated, hypothesis);
SERIMAT_DEFINE_ERROR(BlockHypothesisViolated, hypothesis);
SERIMAT_DEFINE_ERROR(ParseError, parse);
SERIMAT_DEFINE_ERROR(SchemaError, parse);

#undef SERIMAT_DEFINE_ERROR

} // namespace serimat
