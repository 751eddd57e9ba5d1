#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpsens {

// configuration / wiring problems: unknown keys, missing parameters, bad values
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// an operation the engine deliberately does not support (e.g. vega weights for
// parameters with a stochastic diffusion derivative); the FD oracle is the
// documented fallback
class UnsupportedError : public std::runtime_error {
  public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// a Malliavin weight is undefined on this path (degenerate coefficients,
// jump-only mode with no jumps); estimators count these as exclusions
class WeightUndefinedError : public std::runtime_error {
  public:
    explicit WeightUndefinedError(const std::string& what) : std::runtime_error(what) {}
};

// too many excluded paths or an otherwise unusable estimate
class EstimatorError : public std::runtime_error {
  public:
    explicit EstimatorError(const std::string& what) : std::runtime_error(what) {}
};

// non-finite state or violated positivity during path simulation
class PathAbortError : public std::runtime_error {
  public:
    PathAbortError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const { return step_; }

  private:
    std::size_t step_;
};

} // namespace jumpsens
