#pragma once

#include <stdexcept>
#include <string>

namespace rdlwe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroInverse : Error {
    ZeroInverse() : Error("multiplicative inverse of zero") {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

struct ModulusMismatch : Error {
    ModulusMismatch() : Error("operands carry different moduli") {}
};

struct Singular : Error {
    Singular() : Error("matrix is singular over Z_q") {}
};

struct DependentInput : Error {
    explicit DependentInput(const std::string& what) : Error("dependent input: " + what) {}
};

struct NoRelativeDegree : Error {
    NoRelativeDegree() : Error("output is independent of the input; no relative degree exists") {}
};

struct NonzeroInitialOutput : Error {
    NonzeroInitialOutput() : Error("initial state does not satisfy the zero-output premise") {}
};

struct InsufficientHistory : Error {
    explicit InsufficientHistory(const std::string& what) : Error("insufficient history: " + what) {}
};

struct WidthMismatch : Error {
    explicit WidthMismatch(const std::string& what) : Error("ciphertext width mismatch: " + what) {}
};

struct SessionOrderViolation : Error {
    explicit SessionOrderViolation(const std::string& what) : Error("session order violation: " + what) {}
};

struct ObservabilityFailure : Error {
    explicit ObservabilityFailure(const std::string& what) : Error("observability failure: " + what) {}
};

struct ModulusTooSmall : Error {
    explicit ModulusTooSmall(const std::string& what) : Error("modulus too small: " + what) {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& what) : Error("state diverged: " + what) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& what) : Error("format error: " + what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

} // namespace rdlwe
