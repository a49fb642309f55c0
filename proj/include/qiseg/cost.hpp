#pragma once

// Quantum cost accounting: 1- and 2-qubit gates cost 1, a Toffoli costs 5
// (its 2-qubit decomposition), a reset costs 1.
//
// Negative controls are costed in lowered form: each one is flanked by two X
// gates, which are added to the single-qubit count. An MCX with m controls has
// no place in the counted stages of the segmentation pipeline (it only occurs
// in "prep"); it is weighted 2(m-1) Toffolis so the ledger stays total.
//
// The "prep" stage never contributes: it is left out of the ledger entirely.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qiseg/circuit.hpp"

namespace qiseg {

inline constexpr long long kToffoliCost = 5;
inline constexpr const char* kPrepStage = "prep";

inline long long mcxCost(std::size_t controls) {
  return 2 * static_cast<long long>(controls - 1) * kToffoliCost;
}

struct GateCounts {
  std::size_t singleQubit = 0;  // H, X, and lowering X for negative controls
  std::size_t loweringX = 0;    // the part of singleQubit that comes from negative controls
  std::size_t cnot = 0;
  std::size_t toffoli = 0;
  std::size_t mcx = 0;
  std::size_t reset = 0;
  long long mcxWeight = 0;

  long long cost() const noexcept {
    return static_cast<long long>(singleQubit + cnot + reset) + kToffoliCost * static_cast<long long>(toffoli) +
           mcxWeight;
  }

  void add(const GateOp& op) {
    std::size_t negatives = 0;
    for (const auto& c : op.controls) negatives += c.negative() ? 1 : 0;
    loweringX += 2 * negatives;
    singleQubit += 2 * negatives;
    switch (op.kind) {
      case GateKind::H:
      case GateKind::X: ++singleQubit; break;
      case GateKind::CNOT: ++cnot; break;
      case GateKind::TOFFOLI: ++toffoli; break;
      case GateKind::MCX:
        ++mcx;
        mcxWeight += mcxCost(op.controls.size());
        break;
      case GateKind::RESET: ++reset; break;
    }
  }

  GateCounts& operator+=(const GateCounts& o) {
    singleQubit += o.singleQubit;
    loweringX += o.loweringX;
    cnot += o.cnot;
    toffoli += o.toffoli;
    mcx += o.mcx;
    reset += o.reset;
    mcxWeight += o.mcxWeight;
    return *this;
  }

  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

struct StageCost {
  std::string stage;
  GateCounts counts;
  long long actualCost = 0;
};

struct CostLedger {
  std::vector<StageCost> perStage;  // circuit order, "prep" omitted
  GateCounts total;
  long long actualCost = 0;
  long long paperCost = 0;
  std::map<std::string, long long> costByFormula;

  const StageCost* stage(const std::string& name) const {
    for (const auto& s : perStage)
      if (s.stage == name) return &s;
    return nullptr;
  }
};

// Ledger over the named stages. A registered formula contributes to paperCost
// only when every stage it covers is counted.
inline CostLedger quantumCost(const Circuit& circuit, const std::set<std::string>& countedStages) {
  for (const auto& name : countedStages)
    if (circuit.findStage(name) == nullptr) throw InvalidArgument("unknown stage '" + name + "'");

  CostLedger ledger;
  for (const auto& stage : circuit.stages()) {
    if (stage.name == kPrepStage || countedStages.count(stage.name) == 0) continue;
    StageCost sc{stage.name, {}, 0};
    for (std::size_t i = stage.begin; i < stage.end; ++i) sc.counts.add(circuit.ops()[i]);
    sc.actualCost = sc.counts.cost();
    ledger.total += sc.counts;
    ledger.actualCost += sc.actualCost;
    ledger.perStage.push_back(std::move(sc));
  }
  for (const auto& f : circuit.formulas()) {
    bool covered = !f.stages.empty();
    for (const auto& s : f.stages) {
      if (circuit.findStage(s) == nullptr) throw InvalidArgument("formula '" + f.name + "' names unknown stage '" + s + "'");
      covered = covered && s != kPrepStage && countedStages.count(s) != 0;
    }
    if (!covered) continue;
    ledger.costByFormula[f.name] += f.value;
    ledger.paperCost += f.value;
  }
  return ledger;
}

inline CostLedger quantumCost(const Circuit& circuit) {
  std::set<std::string> all;
  for (const auto& s : circuit.stages()) all.insert(s.name);
  return quantumCost(circuit, all);
}

}  // namespace qiseg
