#ifndef MUBAND_ERRORS_HPP
#define MUBAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace muband {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the domain of a warping family / profile / formula.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A grid certificate (log-concavity, smoothing properties, ...) failed.
class CertificateError : public Error {
public:
    explicit CertificateError(const std::string& msg) : Error(msg) {}
};

// Band coordinate needs a strict width surplus and did not get one.
class WidthError : public Error {
public:
    explicit WidthError(const std::string& msg) : Error(msg) {}
};

// Mean-curvature values across a junction disagree beyond tolerance.
class MatchError : public Error {
public:
    explicit MatchError(const std::string& msg) : Error(msg) {}
};

// Bracketed root finding could not isolate a sign change.
class NoRootError : public Error {
public:
    explicit NoRootError(const std::string& msg) : Error(msg) {}
};

// Parameter sits at or beyond an admissibility threshold.
class ThresholdError : public Error {
public:
    explicit ThresholdError(const std::string& msg) : Error(msg) {}
};

// One of the comparison hypotheses fails on the declared band data.
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& msg) : Error(msg) {}
};

// Boundary mean curvature does not dominate the potential on a collar.
class BarrierError : public Error {
public:
    explicit BarrierError(const std::string& msg) : Error(msg) {}
};

// Discrete minimizer landed inside a collar.
class BoundaryMinimizerError : public Error {
public:
    explicit BoundaryMinimizerError(const std::string& msg) : Error(msg) {}
};

// A candidate set violates the collar containment/disjointness rules.
class AdmissibilityError : public Error {
public:
    explicit AdmissibilityError(const std::string& msg) : Error(msg) {}
};

// Exhaustive enumeration asked for more cells than the budget allows.
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

// Scenario file could not be parsed.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace muband

#endif // MUBAND_ERRORS_HPP
