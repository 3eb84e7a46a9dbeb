#ifndef MOG_ERROR_HPP
#define MOG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mog {

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Failures of an analysis step on well-formed input (unfittable orders,
// degenerate tests, undetectable generator settings, ...).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A layer of the requested order has no observed sub-path.
class EmptyLayerError : public AnalysisError {
public:
    EmptyLayerError(std::size_t order, std::size_t max_fittable)
        : AnalysisError("no sub-path of length " + std::to_string(order) +
                        " observed; maximum fittable order is " + std::to_string(max_fittable)),
          order_(order), max_fittable_(max_fittable) {}

    std::size_t order() const noexcept { return order_; }
    std::size_t max_fittable_order() const noexcept { return max_fittable_; }

private:
    std::size_t order_;
    std::size_t max_fittable_;
};

// Exact integer path counting exceeded 128 bits.
class OverflowError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

// Power iteration did not reach the requested tolerance.
class ConvergenceError : public AnalysisError {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate, double residual)
        : AnalysisError(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> last_iterate_;
    double residual_;
};

// Violated precondition of a library call.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mog

#endif
