#pragma once

#include <chrono>

namespace wcbs {

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() : start_(Clock::now()), end_(Clock::time_point::max()) {}
  explicit Deadline(double seconds)
      : start_(Clock::now()),
        end_(start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}

  bool expired() const { return Clock::now() >= end_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_;
  Clock::time_point end_;
};

}  // namespace wcbs
