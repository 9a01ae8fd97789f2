#include "cit/rng.hpp"

#include <cmath>

#include "cit/stats.hpp"

namespace cit::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Engine::Engine(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& s : s_) s = splitmix64(st);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

std::uint64_t Engine::next() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Engine::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Engine::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Engine::normal() { return normal_quantile(uniform()); }

double Engine::cauchy() { return std::tan(M_PI * (uniform() - 0.5)); }

double Engine::exponential() { return -std::log(uniform()); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t st = seed;
  std::uint64_t h = splitmix64(st);
  st = h ^ (a + 0x9e3779b97f4a7c15ULL);
  h = splitmix64(st);
  st = h ^ (b + 0xbf58476d1ce4e5b9ULL);
  h = splitmix64(st);
  st = h ^ (c + 0x94d049bb133111ebULL);
  return splitmix64(st);
}

}  // namespace cit::rng
