#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ots {

// Base for every error raised by the library. `module()` names the
// subsystem so the CLI can print tagged diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Argument outside the mathematical domain of an equation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("model", what) {}
};

// Root not enclosed by the supplied bracket.
class BracketError : public Error {
 public:
  explicit BracketError(const std::string& what) : Error("sim", what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error("sim", what) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error("fit", what) {}
};

// CSV parse failure. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("io", what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Config schema or invariant violation. `path()` is a JSON pointer.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error("io", path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ots
