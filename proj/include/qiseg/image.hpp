#pragma once

#include <bit>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qiseg/error.hpp"

namespace qiseg {

using Gray = std::uint32_t;

inline constexpr unsigned kMaxGrayBits = 16;
inline constexpr unsigned kMaxPositionHalfBits = 12;

// 2^n x 2^n gray image with q-bit values, stored row-major. The pixel at row Y,
// column X has position label Y||X = (Y << n) | X, which is also its index.
class ImageGray {
 public:
  ImageGray(unsigned n, unsigned q, std::vector<Gray> pixels) : n_(n), q_(q), pixels_(std::move(pixels)) {
    if (q == 0 || q > kMaxGrayBits) throw InvalidArgument("gray bit depth must be in [1, 16]");
    if (n > kMaxPositionHalfBits) throw InvalidArgument("image side 2^n too large");
    if (pixels_.size() != pixelCount())
      throw InvalidArgument("expected " + std::to_string(pixelCount()) + " pixels, got " +
                            std::to_string(pixels_.size()));
    for (std::size_t i = 0; i < pixels_.size(); ++i)
      if (pixels_[i] > maxValue())
        throw InvalidArgument("pixel " + std::to_string(i) + " value " + std::to_string(pixels_[i]) +
                              " exceeds " + std::to_string(maxValue()));
  }

  static ImageGray zeros(unsigned n, unsigned q) { return ImageGray(n, q, std::vector<Gray>(std::size_t{1} << (2 * n), 0)); }

  unsigned n() const noexcept { return n_; }
  unsigned q() const noexcept { return q_; }
  std::size_t side() const noexcept { return std::size_t{1} << n_; }
  std::size_t pixelCount() const noexcept { return std::size_t{1} << (2 * n_); }
  Gray maxValue() const noexcept { return (Gray{1} << q_) - 1; }

  const std::vector<Gray>& pixels() const noexcept { return pixels_; }
  Gray at(std::size_t position) const { return pixels_.at(position); }
  Gray at(std::size_t y, std::size_t x) const { return pixels_.at(y * side() + x); }

  void set(std::size_t position, Gray value) {
    if (value > maxValue()) throw InvalidArgument("value " + std::to_string(value) + " exceeds maxval");
    pixels_.at(position) = value;
  }

  friend bool operator==(const ImageGray&, const ImageGray&) = default;

 private:
  unsigned n_;
  unsigned q_;
  std::vector<Gray> pixels_;
};

// Plain (P2) PGM. Comments run from '#' to end of line and may appear anywhere
// between tokens. The gray depth is the bit length of maxval, which must be of
// the form 2^q - 1.
inline ImageGray readImagePGM(std::string_view text) {
  std::size_t pos = 0;
  auto next = [&]() -> std::string_view {
    for (;;) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos < text.size() && text[pos] == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '#') ++pos;
    return text.substr(start, pos - start);
  };
  auto number = [&](const char* what) -> std::uint64_t {
    const std::string_view tok = next();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
      throw InvalidArgument(std::string("PGM: malformed ") + what + (tok.empty() ? "" : " '" + std::string(tok) + "'"));
    return v;
  };

  if (next() != "P2") throw InvalidArgument("PGM: expected plain PGM magic 'P2'");
  const std::uint64_t width = number("width");
  const std::uint64_t height = number("height");
  const std::uint64_t maxval = number("maxval");
  if (width != height) throw InvalidArgument("PGM: image must be square, got " + std::to_string(width) + "x" + std::to_string(height));
  if (width == 0 || !std::has_single_bit(width))
    throw InvalidArgument("PGM: side " + std::to_string(width) + " is not a power of two");
  if (maxval == 0 || maxval > 65535 || !std::has_single_bit(maxval + 1))
    throw InvalidArgument("PGM: maxval " + std::to_string(maxval) + " is not of the form 2^q-1");
  const unsigned n = static_cast<unsigned>(std::countr_zero(width));
  const unsigned q = static_cast<unsigned>(std::countr_zero(maxval + 1));
  if (n > kMaxPositionHalfBits) throw InvalidArgument("PGM: image too large");

  std::vector<Gray> pixels;
  pixels.reserve(width * height);
  for (std::uint64_t i = 0; i < width * height; ++i) {
    const std::uint64_t v = number("pixel value");
    if (v > maxval)
      throw InvalidArgument("PGM: pixel " + std::to_string(i) + " value " + std::to_string(v) + " exceeds maxval " +
                            std::to_string(maxval));
    pixels.push_back(static_cast<Gray>(v));
  }
  if (!next().empty()) throw InvalidArgument("PGM: trailing data after pixel values");
  return ImageGray(n, q, std::move(pixels));
}

inline std::string writeImagePGM(const ImageGray& image) {
  std::ostringstream os;
  os << "P2\n" << image.side() << ' ' << image.side() << '\n' << image.maxValue() << '\n';
  for (std::size_t y = 0; y < image.side(); ++y) {
    for (std::size_t x = 0; x < image.side(); ++x) os << (x == 0 ? "" : " ") << image.at(y, x);
    os << '\n';
  }
  return os.str();
}

}  // namespace qiseg
