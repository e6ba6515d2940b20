#pragma once

#include <stdexcept>
#include <string>

namespace igac {

// Base class for all library errors. Each failure mode gets its own type so
// callers can distinguish them without parsing messages.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter point touches or leaves the model's domain box. Operations
// refuse points within an absolute margin (1e-9) of a finite boundary.
class OutOfDomain : public Error {
public:
    OutOfDomain(const std::string& msg, int coord = -1)
        : Error(msg), coordinate(coord) {}
    int coordinate;  // offending coordinate index, -1 if not applicable
};

class NoAnalyticRule : public Error {
public:
    using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
    QuadratureNotConverged(const std::string& msg, double last_delta)
        : Error(msg), delta(last_delta) {}
    double delta;  // relative disagreement between the last two refinements
};

class NonPositiveDeterminant : public Error {
public:
    NonPositiveDeterminant(const std::string& msg, double det)
        : Error(msg), determinant(det) {}
    double determinant;
};

class SingularMetric : public Error {
public:
    using Error::Error;
};

class NonInvertibleJacobian : public Error {
public:
    using Error::Error;
};

class ZeroEvidence : public Error {
public:
    using Error::Error;
};

class InfeasibleMoment : public Error {
public:
    InfeasibleMoment(const std::string& msg, double lo, double hi)
        : Error(msg), attainable_min(lo), attainable_max(hi) {}
    double attainable_min;
    double attainable_max;
};

class BetaNotBracketed : public Error {
public:
    BetaNotBracketed(const std::string& msg, double lo, double hi)
        : Error(msg), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;  // attempted bracket
    double bracket_hi;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    StepUnderflow(const std::string& msg, double tau)
        : Error(msg), at_tau(tau) {}
    double at_tau;
};

class ShootingDiverged : public Error {
public:
    ShootingDiverged(const std::string& msg, double residual)
        : Error(msg), best_residual(residual) {}
    double best_residual;
};

class ParamOutOfRange : public Error {
public:
    ParamOutOfRange(const std::string& msg, const std::string& param = "")
        : Error(msg), parameter(param) {}
    std::string parameter;  // name of the violated bound
};

class PathTooShort : public Error {
public:
    using Error::Error;
};

class NonFiniteIntegrand : public Error {
public:
    using Error::Error;
};

class WindowTooSmall : public Error {
public:
    using Error::Error;
};

class DegenerateTrace : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = -1)
        : Error(msg), line_number(line) {}
    int line_number;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace igac
