// Exception categories used across the library. The command-line tool maps
// each category to a distinct exit code (see tools/qtherm_main.cpp).
#pragma once

#include <stdexcept>

namespace qtherm {

// Malformed or invalid configuration input: bad file, unknown key, bad value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested problem size exceeds a documented desk-scale cap.
class CapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation received inputs that violate its preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical invariant failed mid-computation (non-PSD spectrum, imaginary
// residue on a real quantity, failed convergence check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Results could not be written to disk.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtherm
