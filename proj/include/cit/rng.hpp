#pragma once

#include <cstdint>

namespace cit::rng {

// Stream tags keep independently derived generators from colliding when
// several randomized components share one user-facing seed.
enum Tag : std::uint64_t {
  kNullSim = 1,
  kPitX = 2,
  kPitY = 3,
  kPitZ = 4,
  kModel = 5,
  kBenchRep = 6,
  kDagEdges = 7,
  kDagNoise = 8,
  kStudy = 9,
};

std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256++ seeded via splitmix64.
class Engine {
 public:
  explicit Engine(std::uint64_t seed);

  std::uint64_t next();

  // Strictly inside (0,1): ((x >> 11) + 0.5) * 2^-53.
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  double cauchy();
  double exponential();

 private:
  std::uint64_t s_[4];
};

// Deterministic seed for a sub-stream, independent of sibling streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

inline Engine derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
  return Engine(derive_seed(seed, a, b, c));
}

}  // namespace cit::rng
