#ifndef MIRKIT_RNG_HPP_
#define MIRKIT_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace mirkit {

// Deterministic generator used by sampling and the trainer. Draws are
// hand-rolled from raw mt19937_64 output so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Unbiased uniform draw from [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return static_cast<std::size_t>(x % n);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double canonical() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * canonical();
  }

 private:
  std::mt19937_64 gen_;
};

template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.uniform_index(i)]);
  }
}

}  // namespace mirkit

#endif  // MIRKIT_RNG_HPP_
