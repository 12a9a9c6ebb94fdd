#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

/// Failure categories shared by all modules. The CLI maps `config` to exit
/// status 2 and every other category to exit status 3.
enum class ErrorKind {
  config,
  range,
  overflow,
  convergence,
  indexing,
  boundary,
  geometry,
  quadrature,
  spectrum,
  threshold,
  conditioning,
  undefined_node,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace birkhoff
