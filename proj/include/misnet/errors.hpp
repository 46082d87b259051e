#pragma once

#include <stdexcept>
#include <string>

namespace misnet {

/// Input stream or file could not be read.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A URL that could not be parsed or canonicalized.
class CanonicalizationError : public std::runtime_error {
public:
    CanonicalizationError(const std::string& url, const std::string& why)
        : std::runtime_error("cannot canonicalize '" + url + "': " + why), url_(url) {}

    const std::string& url() const noexcept { return url_; }

private:
    std::string url_;
};

/// A ratio was requested for a node with zero strength.
class UndefinedRatioError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Power iteration did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(int iterations, double residual)
        : std::runtime_error("pagerank did not converge after " + std::to_string(iterations) +
                             " iterations (residual " + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

}  // namespace misnet
