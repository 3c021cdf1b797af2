#pragma once

#include <stdexcept>
#include <string>

namespace pai {

/// Shape or index mismatch between objects that must agree.
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when three settings cannot represent the target rotation.
class DegenerateSettingsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A request was refused because it would be intractable (e.g. 3^nu enumeration).
class RefusalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace pai
