#pragma once

#include <cmath>
#include <cstdint>

namespace spacings {
namespace detail {

struct PhiloxBlock {
  std::uint32_t w[4];
};

// 4x32 counter-based block function, 10 rounds, Weyl key schedule.
inline PhiloxBlock philox4x32(PhiloxBlock ctr, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * ctr.w[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * ctr.w[2];
    const PhiloxBlock next{{
        std::uint32_t(p1 >> 32) ^ ctr.w[1] ^ k0,
        std::uint32_t(p1),
        std::uint32_t(p0 >> 32) ^ ctr.w[3] ^ k1,
        std::uint32_t(p0),
    }};
    ctr = next;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

}  // namespace detail

// Counter-based variate stream. Every draw is a pure function of
// (seed, stream, counter), so a stream replays identically and distinct
// stream ids are independent regardless of thread scheduling. Replication
// r of an experiment uses stream id r (auxiliary draws use offset ids).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return counter_; }

  std::uint64_t bits() {
    const detail::PhiloxBlock out = detail::philox4x32(
        {{std::uint32_t(counter_), std::uint32_t(counter_ >> 32),
          std::uint32_t(stream_), std::uint32_t(stream_ >> 32)}},
        std::uint32_t(seed_), std::uint32_t(seed_ >> 32));
    ++counter_;
    return (std::uint64_t(out.w[0]) << 32) | out.w[1];
  }

  // Uniform on the open interval (0,1).
  double uniform() { return (double(bits() >> 11) + 0.5) * 0x1.0p-53; }

  // Unit-mean exponential.
  double exponential() { return -std::log(uniform()); }

  // Standard normal, Box-Muller; consumes two uniforms.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.28318530717958647692528676655900577 * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace spacings
