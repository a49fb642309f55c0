#pragma once

// NEQR encoding: |I> = 2^-n sum_{YX} |C_YX> |YX>.

#include <cstddef>
#include <string>
#include <vector>

#include "qiseg/circuit.hpp"
#include "qiseg/cost.hpp"
#include "qiseg/image.hpp"
#include "qiseg/tracked.hpp"

namespace qiseg {

namespace detail {

inline void checkLayoutFits(const ImageGray& image, const RegisterLayout& layout) {
  layout.validate();
  if (layout.color.size() != image.q() || layout.position.size() != 2 * std::size_t{image.n()})
    throw InvalidArgument("layout sized for q=" + std::to_string(layout.color.size()) + ", 2n=" +
                          std::to_string(layout.position.size()) + " but image has q=" + std::to_string(image.q()) +
                          ", n=" + std::to_string(image.n()));
}

}  // namespace detail

// Stage "prep": H on every position qubit, then one X per set color bit,
// controlled on the full position register with polarities spelling out the
// pixel's label.
inline Circuit buildPreparation(const ImageGray& image, const RegisterLayout& layout) {
  detail::checkLayoutFits(image, layout);
  Circuit c(layout);
  c.beginStage(kPrepStage);
  for (Qubit p : layout.position) c.h(p);
  for (std::size_t label = 0; label < image.pixelCount(); ++label) {
    const Gray value = image.at(label);
    for (std::size_t k = image.q(); k-- > 0;) {
      if (((value >> k) & 1u) == 0) continue;
      std::vector<Control> controls;
      for (std::size_t b = layout.position.size(); b-- > 0;)
        controls.emplace_back(layout.position[b], ((label >> b) & 1u) ? Polarity::Positive : Polarity::Negative);
      c.controlledX(std::move(controls), layout.color[k]);
    }
  }
  return c;
}

inline Circuit buildPreparation(const ImageGray& image) {
  return buildPreparation(image, RegisterLayout::neqr(image.q(), image.n()));
}

// Reads the color register of every position branch back into an image.
inline ImageGray decode(const BranchMap& map, const RegisterLayout& layout) {
  layout.validate();
  if (layout.color.empty()) throw InvalidArgument("layout has no color register");
  const unsigned q = layout.grayBits();
  const unsigned n = layout.positionHalfBits();
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<Gray> pixels(count, 0);
  std::vector<bool> seen(count, false);
  for (const auto& b : map.branches) {
    const std::uint64_t label = readRegister(b.bits, layout.position);
    if (seen[label]) throw InvalidArgument("duplicate branch for position " + std::to_string(label));
    seen[label] = true;
    pixels[label] = static_cast<Gray>(readRegister(b.bits, layout.color));
  }
  for (std::size_t p = 0; p < count; ++p)
    if (!seen[p]) throw InvalidArgument("no branch for position " + std::to_string(p));
  return ImageGray(n, q, std::move(pixels));
}

inline ImageGray decode(const BranchMap& map) { return decode(map, map.layout); }

}  // namespace qiseg
