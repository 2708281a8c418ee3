#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nvcool {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class MasingThresholdError : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateRatesError : public DomainError {
public:
    using DomainError::DomainError;
};

// NaN/Inf in the state or step-size underflow.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time)
        : Error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

struct ConfigIssue {
    int line = 0;  // 0 when not tied to a line
    std::string message;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

}  // namespace nvcool
