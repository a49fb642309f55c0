#pragma once

// Exact basis-tracked backend.
//
// After the preparation stage every gate of the segmentation circuits is a
// classical reversible gate or a reset, so each position branch evolves as a
// plain bit-vector. H gates are only accepted inside "prep" on a qubit that is
// 0 in every branch: each branch then splits into two with half the weight and
// no two branches can ever share a basis state.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qiseg/circuit.hpp"
#include "qiseg/cost.hpp"

namespace qiseg {

// Non-negative exact rational.
class Weight {
 public:
  constexpr Weight() = default;
  Weight(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    normalize();
  }

  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t denominator() const noexcept { return den_; }
  double toDouble() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  Weight half() const { return num_ % 2 == 0 ? Weight(num_ / 2, den_) : Weight(num_, den_ * 2); }

  friend Weight operator+(const Weight& a, const Weight& b) {
    const std::uint64_t l = std::lcm(a.den_, b.den_);
    return Weight(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
  }
  Weight& operator+=(const Weight& o) { return *this = *this + o; }

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  void normalize() {
    const std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) num_ /= g, den_ /= g;
    if (num_ == 0) den_ = 1;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

inline constexpr std::size_t kMaxTrackedWidth = 64;

// Value of the register whose LSB is reg[0].
inline std::uint64_t readRegister(std::uint64_t bits, const std::vector<Qubit>& reg) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < reg.size(); ++k) v |= ((bits >> reg[k]) & 1u) << k;
  return v;
}

inline std::uint64_t writeRegister(std::uint64_t bits, const std::vector<Qubit>& reg, std::uint64_t value) {
  for (std::size_t k = 0; k < reg.size(); ++k) {
    const std::uint64_t mask = std::uint64_t{1} << reg[k];
    bits = ((value >> k) & 1u) ? (bits | mask) : (bits & ~mask);
  }
  return bits;
}

struct Branch {
  std::uint64_t bits = 0;  // full basis assignment, bit i = qubit i
  Weight weight;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct BranchMap {
  std::size_t width = 0;
  RegisterLayout layout;
  std::vector<Branch> branches;

  Weight totalWeight() const {
    Weight w;
    for (const auto& b : branches) w += b.weight;
    return w;
  }

  // Position label Y||X, or the full assignment when the layout has no positions.
  std::uint64_t positionOf(const Branch& b) const {
    return layout.position.empty() && layout.color.empty() ? b.bits : readRegister(b.bits, layout.position);
  }
  std::uint64_t colorOf(const Branch& b) const { return readRegister(b.bits, layout.color); }

  // position -> color; later branches win on duplicates (see assertNoCollision).
  std::map<std::uint64_t, std::uint64_t> positionToColor() const {
    std::map<std::uint64_t, std::uint64_t> out;
    for (const auto& b : branches) out[positionOf(b)] = colorOf(b);
    return out;
  }
};

namespace detail {

inline bool controlsFire(const GateOp& op, std::uint64_t bits) {
  for (const auto& c : op.controls)
    if ((((bits >> c.qubit) & 1u) != 0) != c.activeValue()) return false;
  return true;
}

}  // namespace detail

// Applies one permutation gate or reset to a single branch.
inline std::uint64_t applyClassical(const GateOp& op, std::uint64_t bits) {
  const std::uint64_t bit = std::uint64_t{1} << op.target;
  switch (op.kind) {
    case GateKind::RESET: return bits & ~bit;
    case GateKind::H: throw UnsupportedCircuit("H has no classical action");
    default: return detail::controlsFire(op, bits) ? bits ^ bit : bits;
  }
}

inline BranchMap runTracked(const Circuit& circuit, std::uint64_t initial = 0) {
  if (circuit.width() > kMaxTrackedWidth)
    throw UnsupportedCircuit("tracked backend supports at most " + std::to_string(kMaxTrackedWidth) + " qubits");
  if (circuit.width() < kMaxTrackedWidth && (initial >> circuit.width()) != 0)
    throw InvalidArgument("initial basis index out of range");

  BranchMap map{circuit.width(), circuit.layout(), {Branch{initial, Weight(1, 1)}}};
  const auto& position = circuit.layout().position;
  for (std::size_t i = 0; i < circuit.ops().size(); ++i) {
    const GateOp& op = circuit.ops()[i];
    if (op.kind != GateKind::H) {
      for (auto& b : map.branches) b.bits = applyClassical(op, b.bits);
      continue;
    }
    const std::string& stage = circuit.stageOf(i);
    if (stage != kPrepStage)
      throw UnsupportedCircuit("H on q[" + std::to_string(op.target) + "] in stage '" + stage +
                               "'; only prep may create superposition here, use the statevector backend");
    if (!position.empty() && std::find(position.begin(), position.end(), op.target) == position.end())
      throw UnsupportedCircuit("H on non-position qubit q[" + std::to_string(op.target) + "]");
    const std::uint64_t bit = std::uint64_t{1} << op.target;
    std::vector<Branch> next;
    next.reserve(map.branches.size() * 2);
    for (const auto& b : map.branches) {
      if (b.bits & bit)
        throw UnsupportedCircuit("H on q[" + std::to_string(op.target) + "] which is not |0> in every branch");
      next.push_back({b.bits, b.weight.half()});
      next.push_back({b.bits | bit, b.weight.half()});
    }
    map.branches = std::move(next);
  }
  return map;
}

// Throws UnsupportedCircuit naming two branches that share a position label.
inline void assertNoCollision(const BranchMap& map) {
  std::map<std::uint64_t, std::uint64_t> seen;  // position -> bits
  auto hex = [](std::uint64_t v) {
    std::string s = "0x";
    const char* digits = "0123456789abcdef";
    std::string body;
    do body.insert(body.begin(), digits[v & 0xf]), v >>= 4;
    while (v != 0);
    return s + body;
  };
  for (const auto& b : map.branches) {
    const std::uint64_t p = map.positionOf(b);
    auto [it, fresh] = seen.emplace(p, b.bits);
    if (!fresh)
      throw UnsupportedCircuit("branches " + hex(it->second) + " and " + hex(b.bits) + " share position " +
                               std::to_string(p));
  }
}

}  // namespace qiseg
