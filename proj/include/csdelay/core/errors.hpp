#pragma once

#include <stdexcept>
#include <string>

namespace csdelay {

/// Violated precondition on a numeric argument (negative distance, C outside (0,1), ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query outside the time span covered by a history or trajectory.
class CoverageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Normalized weights with a vanishing denominator row.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A check was requested for a configuration outside the hypotheses it relies on.
class ScopeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed scenario file or field. `line` is 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message, unsigned long line = 0)
      : std::runtime_error(format(field, message, line)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  unsigned long line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message,
                            unsigned long line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  unsigned long line_;
};

}  // namespace csdelay
