#pragma once

#include <stdexcept>
#include <string>

namespace tadpole {

/// Input violates a type invariant or operation precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Design target cannot be realised (e.g. implied capacitance below the stray term).
class InfeasibleDesign : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical fit failed. `stage` names the pipeline step that gave up.
class FitError : public std::runtime_error {
 public:
  FitError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Line numbers are 1-based; 0 means "whole file".
class ParseError : public IoError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : IoError(source + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tadpole
