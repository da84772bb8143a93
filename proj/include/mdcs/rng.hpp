#pragma once

#include <cstdint>
#include <random>

namespace mdcs {

/// Deterministic pseudo-random stream. Equal (seed, stream_id) pairs yield
/// identical draw sequences across runs and across any parallel scheduling;
/// parallel work takes independent stream ids. Distributions are hand-rolled
/// on top of the engine because the standard library's are not portable.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [0, n), n > 0. Fixed-point multiply, no rejection.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Box-Muller normal draw; the spare value is cached.
  double normal(double mean = 0.0, double stddev = 1.0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mdcs
