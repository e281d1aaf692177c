#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace smoothness {

/// Raised when a function value needed by a quadrature or grid is not finite.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double node)
        : std::runtime_error(what + " (at x = " + std::to_string(node) + ")"), node_(node)
    {
    }

    double node() const noexcept { return node_; }

private:
    double node_;
};

/// Iterative solver gave up. Carries the objective history for diagnostics.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace))
    {
    }

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// Every reference abscissa was rejected while estimating a multiplier.
class DegenerateReferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fitted polynomial failed to reproduce held-out samples.
class DegreeViolationError : public std::runtime_error {
public:
    DegreeViolationError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace smoothness
