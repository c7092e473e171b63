#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace worm {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed DSL source. `position` is the 0-based byte offset of the offending token.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position)
    {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// A field evaluated outside its domain (log at zero, division by zero, ...).
class DomainError : public Error {
  public:
    DomainError(const std::string& what, std::string subexpression)
        : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression))
    {}
    explicit DomainError(const std::string& what) : Error(what) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

  private:
    std::string subexpression_;
};

/// Invalid spec, configuration, or construction parameters.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Iterative numerics that failed to converge.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace worm
