#pragma once

#include <cstdint>
#include <utility>

namespace ellab {

// Counter-based deterministic generator. A fixed 64-bit finalizer (splitmix64)
// is keyed by (seed, i, j), so any entry's stream can be opened independently
// of sampling order: parallel or out-of-order fills produce identical output.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(mix(seed ^ kDomain)) {}

  // Stream for matrix entry (i, j). i == j addresses a diagonal stream.
  static SeededRng for_entry(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    SeededRng r(seed);
    r.state_ = mix(r.state_ + 0x9E3779B97F4A7C15ULL * (i + 1));
    r.state_ = mix(r.state_ + 0xC2B2AE3D27D4EB4FULL * (j + 1));
    return r;
  }

  // Stream for trial t of an experiment keyed by a master seed.
  static SeededRng for_trial(std::uint64_t seed, std::uint64_t trial) {
    SeededRng r(seed ^ 0x5851F42D4C957F2DULL);
    r.state_ = mix(r.state_ + 0x14057B7EF767814FULL * (trial + 1));
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_unit_pos() { return 1.0 - next_unit(); }

  // One Box-Muller pair; consumes exactly two uniforms.
  std::pair<double, double> next_normal_pair();

  // Single normal draw; consumes a full pair so consumption stays fixed.
  double next_normal() { return next_normal_pair().first; }

 private:
  static constexpr std::uint64_t kDomain = 0xE11AB5C801D9ULL;

  static std::uint64_t finalize(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t x) { return finalize(x + 0x9E3779B97F4A7C15ULL); }

  std::uint64_t state_;
};

}  // namespace ellab
