#include "selci/rng.hpp"

#include <stdexcept>

#include "selci/gauss.hpp"

namespace selci {

double Rng::normal() { return std_normal_quantile(uniform01()); }

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::domain_error("Rng::uniform_below: n must be > 0");
  // Rejection threshold makes the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace selci
