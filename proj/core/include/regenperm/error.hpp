#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace regenperm {

/// Bad argument or malformed configuration. `path()` names the offending
/// field (e.g. "model.driver.q") when known.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg, std::string path = {})
      : std::invalid_argument(path.empty() ? msg : path + ": " + msg),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A sequence fails the log-convexity test at `index()`.
class KaluzaViolation : public std::invalid_argument {
 public:
  KaluzaViolation(const std::string& msg, std::size_t index)
      : std::invalid_argument(msg), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A sampler ran out of its draw budget before finishing a realization.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model lacks a property a statistic needs (e.g. positive recurrence).
class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace regenperm
