#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgbal {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input stream could not be read at all.
class InputError : public Error {
 public:
  using Error::Error;
};

// Preprocessing retained zero edges.
class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

// An operation was handed arguments violating its contract
// (e.g. a sign vector of the wrong length).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A sampler was given a graph that is not connected.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

// Random-walk sampler exceeded its step cap.
class SamplerTimeoutError : public Error {
 public:
  using Error::Error;
};

// Every iteration of a sampling run failed.
class SamplerError : public Error {
 public:
  using Error::Error;
};

// Memory budget cannot hold even a single cloud entry.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused: graph larger than the vertex guard.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

// Gradient descent produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, std::uint64_t update_index)
      : Error(msg), update_index(update_index) {}
  std::uint64_t update_index;
};

// Invalid run configuration (bad learning rate, unknown method token, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgbal
