#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seirssp {

/// Invalid argument or value outside an operation's domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Unknown catalog or method key.
class LookupError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A trajectory produced a non-finite state.
class OverflowError : public std::runtime_error {
public:
  OverflowError(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}

  /// Index of the step whose result was non-finite (1-based: states[step]).
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

class InsufficientDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(double achieved, const std::string& what)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace seirssp
