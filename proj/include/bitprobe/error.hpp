#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bitprobe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unrepresentable parameters (bad ε, overflowing field encoding, ...).
class ParamError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive computation would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : Error(what + " (required " + std::to_string(required) + ", budget " +
              std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// The greedy relabeling still had erroneous vertices after its round cap.
class NonConvergence : public Error {
 public:
  NonConvergence(std::vector<std::uint64_t> trace, std::uint64_t max_iters)
      : Error("greedy labeling did not converge within " + std::to_string(max_iters) +
              " rounds"),
        trace_(std::move(trace)) {}

  const std::vector<std::uint64_t>& trace() const noexcept { return trace_; }

 private:
  std::vector<std::uint64_t> trace_;
};

/// Every candidate seed of an encode stage was rejected.
class RetriesExhausted : public Error {
 public:
  RetriesExhausted(std::string stage, std::uint32_t attempts, std::uint64_t fewest_violations)
      : Error(stage + ": no acceptable seed after " + std::to_string(attempts) +
              " attempts (" + std::to_string(attempts) + "/" + std::to_string(attempts) +
              " rejected, fewest violations " +
              std::to_string(fewest_violations) + ")"),
        stage_(std::move(stage)),
        attempts_(attempts),
        fewest_violations_(fewest_violations) {}

  const std::string& stage() const noexcept { return stage_; }
  std::uint32_t attempts() const noexcept { return attempts_; }
  /// Every attempt failed, so the observed failure rate is attempts/attempts.
  double failure_rate() const noexcept { return attempts_ == 0 ? 0.0 : 1.0; }
  std::uint64_t fewest_violations() const noexcept { return fewest_violations_; }

 private:
  std::string stage_;
  std::uint32_t attempts_;
  std::uint64_t fewest_violations_;
};

}  // namespace bitprobe
