#pragma once

#include <stdexcept>
#include <string>

namespace nvlaw {

enum class ErrorKind {
    context,
    invalid_substitution,
    degree,
    symmetry,
    zero_polynomial,
    parse,
    undefined_resultant,
    degenerate_curve,
    non_generic,
    singular_point,
    golden_data,
    consistency,
    convergence,
    undefined_product,
    cardinality,
    budget,
    singular_curve,
    lift,
    usage,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::context: return "context";
    case ErrorKind::invalid_substitution: return "invalid-substitution";
    case ErrorKind::degree: return "degree";
    case ErrorKind::symmetry: return "symmetry";
    case ErrorKind::zero_polynomial: return "zero-polynomial";
    case ErrorKind::parse: return "parse";
    case ErrorKind::undefined_resultant: return "undefined-resultant";
    case ErrorKind::degenerate_curve: return "degenerate-curve";
    case ErrorKind::non_generic: return "non-generic-parametrization";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::golden_data: return "golden-data";
    case ErrorKind::consistency: return "internal-consistency";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::undefined_product: return "undefined-product";
    case ErrorKind::cardinality: return "cardinality";
    case ErrorKind::budget: return "budget";
    case ErrorKind::singular_curve: return "singular-curve";
    case ErrorKind::lift: return "lift";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(kind_name(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nvlaw
