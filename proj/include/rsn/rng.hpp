#pragma once

#include <cstdint>
#include <limits>

namespace rsn {

std::uint64_t mix64(std::uint64_t z);

// Counter-based random stream. Output k of stream (seed, replica) is a pure function of
// (seed, replica, k), so any replica can be regenerated without replaying the others.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t replica);

  std::uint64_t operator()() { return mix64(key_ + (++counter_) * kGamma); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate);
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t seed_;
  std::uint64_t replica_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rsn
