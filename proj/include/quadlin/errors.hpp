#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadlin {

// Every typed failure raised by the library derives from Error. The CLI maps
// the two intermediate bases onto exit codes: InputError -> 2,
// NumericalError -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// ---- expression DSL -------------------------------------------------------

class SyntaxError : public InputError {
public:
    SyntaxError(std::size_t position, std::string expected)
        : InputError("syntax error at index " + std::to_string(position) +
                     ": expected " + expected),
          position_(position), expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

class UnknownIdentifier : public InputError {
public:
    explicit UnknownIdentifier(std::string name)
        : InputError("unknown identifier '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnboundParam : public InputError {
public:
    explicit UnboundParam(std::string name)
        : InputError("parameter '" + name + "' has no finite value"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Raised whenever an evaluation step would produce NaN or infinity, or leaves
// the domain of log, division or a power.
class DomainError : public NumericalError {
public:
    DomainError(std::string what, std::string node, std::vector<double> point)
        : NumericalError(format(what, node, point)), reason_(std::move(what)),
          node_(std::move(node)), point_(std::move(point)) {}

    const std::string& reason() const noexcept { return reason_; }
    const std::string& node() const noexcept { return node_; }
    const std::vector<double>& point() const noexcept { return point_; }

private:
    static std::string format(const std::string& what, const std::string& node,
                              const std::vector<double>& point);

    std::string reason_;
    std::string node_;
    std::vector<double> point_;
};

// ---- lattice --------------------------------------------------------------

class DimensionError : public InputError {
public:
    using InputError::InputError;
};

class ConflictError : public InputError {
public:
    using InputError::InputError;
};

// ---- linearize / transform ------------------------------------------------

class DegenerateDerivative : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SignChange : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankDeficient : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CertificationFailure : public Error {
public:
    using Error::Error;
};

// ---- colehopf -------------------------------------------------------------

class ZeroDivision : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateParams : public InputError {
public:
    using InputError::InputError;
};

// ---- entropy --------------------------------------------------------------

class DivisionByZeroFunction : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonRationalEquation : public InputError {
public:
    using InputError::InputError;
};

class DegenerateTrajectory : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TooShort : public InputError {
public:
    using InputError::InputError;
};

// ---- reports / cli --------------------------------------------------------

class UnsupportedFormat : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

}  // namespace quadlin
