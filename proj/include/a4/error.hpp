#pragma once

#include <stdexcept>
#include <string>

namespace a4 {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes: ConfigError and DivergenceError -> 2, IoError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physics or geometry configuration (CFL, resolvability, interiority, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand fields live on different grids or have incompatible shapes.
class GridMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Evaluation point outside the domain of a field or oracle, or at a singular point.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A solver update produced non-finite or runaway values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& component, long step, double value)
      : Error("divergence in component " + component + " at step " + std::to_string(step) +
              " (value " + std::to_string(value) + ")"),
        component_(component),
        step_(step) {}

  const std::string& component() const { return component_; }
  long step() const { return step_; }

 private:
  std::string component_;
  long step_;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(double coarse, double fine)
      : Error("non-convergent quadrature: successive estimates " + std::to_string(coarse) + " and " +
              std::to_string(fine)),
        coarse_(coarse),
        fine_(fine) {}

  double coarse() const { return coarse_; }
  double fine() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

/// File system failure: missing file, unwritable path, short write.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration text that does not parse. Carries line and column (1-based).
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& file, int line, int column, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace a4
