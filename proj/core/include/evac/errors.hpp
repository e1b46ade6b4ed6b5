#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evac {

// Raised when an argument falls outside the domain of a physical model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by loaders and validators. Carries the 1-based row of the offending
// input line when one applies (0 otherwise).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, std::size_t row = 0)
      : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace evac
