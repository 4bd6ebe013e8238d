#pragma once

#include <stdexcept>
#include <string>

namespace rfheat {

/// A time or argument lies outside the smooth interval of the flow.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A mode sum could not be certified within its tail tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration. `field()` names the offending entry, e.g.
/// "geometry[0].dim".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace rfheat
