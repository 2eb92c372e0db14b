#ifndef WEILFORGE_ERRORS_HPP
#define WEILFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weilforge {

// Input / construction errors (CLI exit code 2).
struct InputError : std::runtime_error {
    std::string kind;
    InputError(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

struct DimensionMismatch : InputError {
    explicit DimensionMismatch(const std::string& m) : InputError("DimensionMismatch", m) {}
};
struct JacobiViolation : InputError {
    int a, b, c, d; // 1-based failing tuple
    JacobiViolation(const std::string& m, int a_, int b_, int c_, int d_)
        : InputError("JacobiViolation", m), a(a_), b(b_), c(c_), d(d_) {}
};
struct MetricNotInvariant : InputError {
    explicit MetricNotInvariant(const std::string& m) : InputError("MetricNotInvariant", m) {}
};
struct MetricSingular : InputError {
    explicit MetricSingular(const std::string& m) : InputError("MetricSingular", m) {}
};
struct LengthMismatch : InputError {
    explicit LengthMismatch(const std::string& m) : InputError("LengthMismatch", m) {}
};
struct ContextMismatch : InputError {
    explicit ContextMismatch(const std::string& m) : InputError("ContextMismatch", m) {}
};
struct SpaceMismatch : InputError {
    explicit SpaceMismatch(const std::string& m) : InputError("SpaceMismatch", m) {}
};
struct NotPurelyOdd : InputError {
    explicit NotPurelyOdd(const std::string& m) : InputError("NotPurelyOdd", m) {}
};
struct TruncationTooLow : InputError {
    explicit TruncationTooLow(const std::string& m) : InputError("TruncationTooLow", m) {}
};
struct SupertraceNonzero : InputError {
    explicit SupertraceNonzero(const std::string& m) : InputError("SupertraceNonzero", m) {}
};
struct NotBasic : InputError {
    explicit NotBasic(const std::string& m) : InputError("NotBasic", m) {}
};
struct DegreeTooLarge : InputError {
    explicit DegreeTooLarge(const std::string& m) : InputError("DegreeTooLarge", m) {}
};
struct NotAntisymmetric : InputError {
    explicit NotAntisymmetric(const std::string& m) : InputError("NotAntisymmetric", m) {}
};
struct SingularCMinusI : InputError {
    explicit SingularCMinusI(const std::string& m) : InputError("SingularCMinusI", m) {}
};
struct SingularD : InputError {
    explicit SingularD(const std::string& m) : InputError("SingularD", m) {}
};
struct NonCommuting : InputError {
    explicit NonCommuting(const std::string& m) : InputError("NonCommuting", m) {}
};
struct DimensionCap : InputError {
    explicit DimensionCap(const std::string& m) : InputError("DimensionCap", m) {}
};
struct OddWheel : InputError {
    explicit OddWheel(const std::string& m) : InputError("OddWheel", m) {}
};
struct StrutInLeftArgument : InputError {
    explicit StrutInLeftArgument(const std::string& m) : InputError("StrutInLeftArgument", m) {}
};
struct InconsistentLabels : InputError {
    explicit InconsistentLabels(const std::string& m) : InputError("InconsistentLabels", m) {}
};

} // namespace weilforge

#endif
