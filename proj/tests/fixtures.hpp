#pragma once

// Shared test data and independent oracles. Nothing here calls into the
// circuit builders or backends.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qiseg/image.hpp"

namespace qiseg::fixtures {

// 2x2, 8-bit: 0, 100, 200, 255.
inline ImageGray image2x2() { return ImageGray(1, 8, {0, 100, 200, 255}); }

// 4x4, 3-bit, read off the reference NEQR terms with the duplicated label 1011
// taken as 1000 (the only label missing from that list).
inline ImageGray image4x4() { return ImageGray(2, 3, {3, 2, 3, 2, 2, 3, 0, 1, 0, 5, 0, 5, 0, 5, 5, 7}); }

// The 16 terms of the input state exactly as listed in the reference: 3 color bits then the
// 4-bit label Y||X.
inline const std::vector<std::string>& listedInputTerms() {
  static const std::vector<std::string> terms{
      "0110000", "0100001", "0110010", "0100011", "0100100", "0110101", "0000110", "0010111",
      "0001011", "1011001", "0001010", "1011011", "0001100", "1011101", "1011110", "1111111"};
  return terms;
}

// The 16 terms of the segmented state exactly as listed in the reference.
inline const std::vector<std::string>& listedSegmentedTerms() {
  static const std::vector<std::string> terms{
      "1000000", "1000001", "1000010", "1000011", "1000100", "1000101", "0000110", "0000111",
      "0001000", "1111001", "0001010", "1111011", "0001100", "1111101", "1001110", "1111111"};
  return terms;
}

struct Term {
  std::uint32_t color;
  std::uint32_t position;
};

inline Term splitTerm(const std::string& bits, unsigned colorBits) {
  return {static_cast<std::uint32_t>(std::stoul(bits.substr(0, colorBits), nullptr, 2)),
          static_cast<std::uint32_t>(std::stoul(bits.substr(colorBits), nullptr, 2))};
}

// Piecewise rule written out directly: g_1 below T_1, g_{k+1} on
// [T_k, T_{k+1}), g_{n+1} at or above T_n.
inline std::vector<Gray> oracleSegment(const std::vector<Gray>& pixels, const std::vector<Gray>& thresholds,
                                       const std::vector<Gray>& levels) {
  std::vector<Gray> out;
  for (Gray f : pixels) {
    if (f < thresholds.front()) {
      out.push_back(levels.front());
      continue;
    }
    if (f >= thresholds.back()) {
      out.push_back(levels.back());
      continue;
    }
    for (std::size_t k = 0; k + 1 < thresholds.size(); ++k)
      if (thresholds[k] <= f && f < thresholds[k + 1]) out.push_back(levels[k + 1]);
  }
  return out;
}

inline ImageGray randomImage(std::mt19937_64& rng, unsigned n, unsigned q) {
  std::uniform_int_distribution<Gray> dist(0, (Gray{1} << q) - 1);
  std::vector<Gray> px(std::size_t{1} << (2 * n));
  for (auto& p : px) p = dist(rng);
  return ImageGray(n, q, std::move(px));
}

// Strictly increasing thresholds in [1, 2^q-1] and levels with g_k >= T_{k-1}.
inline void randomConfig(std::mt19937_64& rng, unsigned q, std::size_t count, std::vector<Gray>& thresholds,
                         std::vector<Gray>& levels) {
  const Gray maxv = (Gray{1} << q) - 1;
  std::vector<Gray> pool;
  for (Gray v = 1; v <= maxv; ++v) pool.push_back(v);
  std::shuffle(pool.begin(), pool.end(), rng);
  thresholds.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(thresholds.begin(), thresholds.end());
  levels.assign(count + 1, 0);
  levels[0] = std::uniform_int_distribution<Gray>(0, maxv)(rng);
  for (std::size_t k = 1; k <= count; ++k) levels[k] = std::uniform_int_distribution<Gray>(thresholds[k - 1], maxv)(rng);
}

}  // namespace qiseg::fixtures
