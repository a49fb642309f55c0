#pragma once

// q-bit comparator: result <- [a < b], inputs restored, two aux qubits reused.
//
// The cascade starts from the least significant pair and lets every more
// significant pair override the running result unless that pair is tied:
//
//   r_0 = !a_0 & b_0
//   r_j = (!a_j & b_j) ^ r ^ (a_j & r) ^ (b_j & r)      with r = r_{j-1}
//
// For a_j b_j = 01 the terms give 1, for 10 they give 0, for 00 and 11 they
// pass r through. Each r_j goes to a fresh slot (alternating aux qubits, the
// last one into `result`) and the consumed slot is reset, so the fragment uses
// 3q-2 Toffolis, q-1 CNOTs and q-1 resets.

#include <algorithm>
#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "qiseg/circuit.hpp"

namespace qiseg {

struct ComparatorSpec {
  std::vector<Qubit> a;  // compared value, LSB first
  std::vector<Qubit> b;  // reference value, LSB first
  std::array<Qubit, 2> aux{};
  Qubit result = 0;
  std::string stageName = "compare";

  void validate() const {
    if (a.empty()) throw InvalidArgument("comparator width q must be >= 1");
    if (a.size() != b.size()) throw InvalidArgument("comparator registers differ in width");
    std::set<Qubit> seen;
    auto claim = [&](Qubit q) {
      if (!seen.insert(q).second) throw InvalidArgument("comparator registers overlap at q[" + std::to_string(q) + "]");
    };
    for (Qubit q : a) claim(q);
    for (Qubit q : b) claim(q);
    claim(aux[0]);
    claim(aux[1]);
    claim(result);
  }

  std::size_t width() const {
    std::size_t w = std::max({aux[0], aux[1], result}) + 1;
    for (Qubit q : a) w = std::max(w, q + 1);
    for (Qubit q : b) w = std::max(w, q + 1);
    return w;
  }
};

// Closed-form count: 3q-2 Toffolis (5 each), q-1 CNOTs and 2q-2 resets.
inline long long paperComparatorCost(unsigned q) {
  if (q == 0) throw InvalidArgument("q must be >= 1");
  return 18 * static_cast<long long>(q) - 13;
}

inline constexpr const char* kComparatorFormula = "comparator-paper";

inline Circuit buildComparator(const ComparatorSpec& spec) {
  spec.validate();
  const std::size_t q = spec.a.size();
  Circuit c(spec.width());
  c.beginStage(spec.stageName);

  auto slot = [&](std::size_t j) { return j + 1 == q ? spec.result : spec.aux[j % 2]; };

  c.ccx(neg(spec.a[0]), spec.b[0], slot(0));
  for (std::size_t j = 1; j < q; ++j) {
    const Qubit running = slot(j - 1);
    const Qubit next = slot(j);
    c.ccx(neg(spec.a[j]), spec.b[j], next);
    c.cx(running, next);
    c.ccx(spec.a[j], running, next);
    c.ccx(spec.b[j], running, next);
    c.reset(running);
  }

  c.registerFormula({kComparatorFormula, paperComparatorCost(static_cast<unsigned>(q)), {spec.stageName}});
  return c;
}

}  // namespace qiseg
