#pragma once

// Independent dimension oracle for the free Lie algebra: the number of
// basis elements in degree n over k letters equals the number of aperiodic
// necklaces, computed here straight from the Moebius function.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace testsupport {

inline int moebius(std::size_t n) {
  int m = 1;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  if (n > 1) m = -m;
  return m;
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::uint64_t necklace_count(std::size_t letters, std::size_t degree) {
  std::int64_t total = 0;
  for (std::size_t d = 1; d <= degree; ++d) {
    if (degree % d) continue;
    total += moebius(degree / d) * static_cast<std::int64_t>(ipow(letters, d));
  }
  return static_cast<std::uint64_t>(total / static_cast<std::int64_t>(degree));
}

} // namespace testsupport
