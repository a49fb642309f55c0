// Segments the 4x4 sample image with T_L = 010, T_H = 100 on both backends and
// prints the circuit cost next to the closed-form counts.

#include <iostream>

#include "qiseg/qiseg.hpp"

int main() {
  using namespace qiseg;
  const ImageGray image(2, 3, {3, 2, 3, 2, 2, 3, 0, 1, 0, 5, 0, 5, 0, 5, 5, 7});
  const auto config = ThresholdConfig::withDefaultLevels(3, {0b010, 0b100});
  const Circuit circuit = buildPipeline(image, config);

  const BranchMap exact = runTracked(circuit);
  assertNoCollision(exact);
  std::cout << "tracked:\n" << writeImagePGM(decode(exact));

  std::cout << "\nstatevector, 1024 shots (color position):\n";
  for (const auto& r : sampleShots(circuit, 1024, 7))
    std::cout << "  " << r.bitstring.substr(0, 3) << ' ' << r.bitstring.substr(3) << "  " << r.count << '\n';

  const CostLedger ledger = quantumCost(circuit);
  const auto formulas = paperPipelineCost(3);
  std::cout << "\nwidth " << circuit.width() << ", actual cost " << ledger.actualCost << ", formula components "
            << formulas.componentSum << ", stated total " << formulas.paperTotal << '\n';
}
