#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace multisec {

// Generator family used for every Monte Carlo stream; recorded in run
// manifests.
inline constexpr std::string_view kRngFamily = "mt19937_64/seed_seq(seed,rep)/53-bit";

// Reproducible substream for replication `rep` of a run seeded with `seed`.
// Each substream is seeded independently from (seed, rep), so replications can
// be generated in any order or concurrently with identical results.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    engine_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace multisec
