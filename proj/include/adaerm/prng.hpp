#ifndef ADAERM_PRNG_HPP
#define ADAERM_PRNG_HPP

#include <cstdint>
#include <vector>

namespace adaerm::detail {

// Fully specified 64-bit generator so permutations are reproducible across
// standard libraries and platforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(b);
  return a ^ g();
}

// Fisher-Yates with an explicit index draw; modulo bias is negligible for
// the permutation sizes involved here.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  SplitMix64 gen(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(items[i - 1], items[j]);
  }
}

inline std::vector<std::size_t> identity_permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace adaerm::detail

#endif  // ADAERM_PRNG_HPP
