#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hk {

enum class ErrorKind {
    Usage,
    Parse,
    PrecisionLoss,
    Hypothesis,
    Stalled,
    ResourceCap,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

class PrecisionLossError : public Error {
public:
    explicit PrecisionLossError(const std::string& what) : Error(ErrorKind::PrecisionLoss, what) {}
};

class ResourceCapError : public Error {
public:
    explicit ResourceCapError(const std::string& what) : Error(ErrorKind::ResourceCap, what) {}
};

// A checked hypothesis failed. `counterexample` names the offending data.
class HypothesisError : public Error {
public:
    HypothesisError(const std::string& what, std::string counterexample = {})
        : Error(ErrorKind::Hypothesis, what), counterexample_(std::move(counterexample)) {}
    const std::string& counterexample() const noexcept { return counterexample_; }

private:
    std::string counterexample_;
};

}  // namespace hk
