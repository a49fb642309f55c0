#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qiseg/neqr.hpp"
#include "qiseg/statevector.hpp"

using namespace qiseg;

namespace {

std::uint64_t basisOf(const RegisterLayout& l, std::uint64_t color, std::uint64_t position) {
  return writeRegister(writeRegister(0, l.color, color), l.position, position);
}

}  // namespace

TEST(QuantumState, XFlipsZero) {
  Circuit c(1);
  c.x(0);
  const auto s = run(c, 0, 1);
  EXPECT_NEAR(std::abs(s.amplitude(1) - Amplitude(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude(0)), 0.0, 1e-15);
}

TEST(QuantumState, HadamardAmplitudes) {
  Circuit c(1);
  c.h(0);
  const auto s = run(c, 0, 1);
  EXPECT_NEAR(s.amplitude(0).real(), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.amplitude(1).real(), 1 / std::sqrt(2.0), 1e-12);
  const auto t = run(c, 1, 1);
  EXPECT_NEAR(t.amplitude(1).real(), -1 / std::sqrt(2.0), 1e-12);
}

TEST(QuantumState, PreparationAmplitudes2x2) {
  const auto image = fixtures::image2x2();
  const Circuit prep = buildPreparation(image);
  const auto s = run(prep, 0, 1);
  const auto& l = prep.layout();
  const std::uint64_t colors[4] = {0, 100, 200, 255};
  double onSupport = 0.0;
  for (std::uint64_t p = 0; p < 4; ++p) {
    const auto a = s.amplitude(basisOf(l, colors[p], p));
    EXPECT_NEAR(a.real(), 0.5, 1e-10);
    EXPECT_NEAR(a.imag(), 0.0, 1e-10);
    onSupport += std::norm(a);
  }
  EXPECT_NEAR(onSupport, 1.0, 1e-10);
}

TEST(QuantumState, ProbabilitiesOfSubset) {
  Circuit c(3);
  c.h(0).cx(0, 2);
  const auto s = run(c, 0, 1);
  const std::vector<Qubit> all{2, 1, 0};
  const auto p = s.probabilities(all);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p.at("000"), 0.5, 1e-12);
  EXPECT_NEAR(p.at("101"), 0.5, 1e-12);
  const std::vector<Qubit> one{1};
  EXPECT_NEAR(s.probabilities(one).at("0"), 1.0, 1e-12);
  const std::vector<Qubit> bad{3};
  EXPECT_THROW(s.probabilities(bad), InvalidArgument);
}

TEST(QuantumState, ResetCollapsesToZero) {
  Circuit c(2);
  c.h(0).cx(0, 1).reset(0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = run(c, 0, seed);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    const std::vector<Qubit> q0{0};
    EXPECT_NEAR(s.probabilities(q0).at("0"), 1.0, 1e-12);
  }
}

TEST(QuantumState, WidthLimit) {
  EXPECT_THROW(QuantumState(kMaxStatevectorWidth + 1), InvalidArgument);
  EXPECT_THROW(QuantumState(2, 4), InvalidArgument);
}

// Norm stays 1 after every gate of random circuits, and permutation gates
// only move amplitudes around.
TEST(QuantumState, NormAndPermutationProperties) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t width = 3 + rng() % 6;
    QuantumState s(width);
    Rng gateRng = shotRng(trial, 0);
    std::vector<Qubit> qs(width);
    for (std::size_t i = 0; i < width; ++i) qs[i] = i;
    for (int g = 0; g < 40; ++g) {
      std::shuffle(qs.begin(), qs.end(), rng);
      const auto kind = rng() % 5;
      GateOp op = kind == 0   ? GateOp::h(qs[0])
                  : kind == 1 ? GateOp::reset(qs[0])
                              : GateOp::controlledX({Control{qs[1], rng() % 2 ? Polarity::Negative : Polarity::Positive},
                                                     Control{qs[2]}},
                                                    qs[0]);
      std::vector<double> before;
      for (auto a : s.amplitudes()) before.push_back(std::abs(a));
      s.apply(op, gateRng);
      ASSERT_NEAR(s.norm(), 1.0, 1e-10);
      if (op.isPermutation()) {
        std::vector<double> after;
        for (auto a : s.amplitudes()) after.push_back(std::abs(a));
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        for (std::size_t i = 0; i < before.size(); ++i) ASSERT_NEAR(before[i], after[i], 1e-12);
      }
    }
  }
}

TEST(SampleShots, DeterministicForSeed) {
  const Circuit c = buildPreparation(fixtures::image4x4());
  EXPECT_EQ(sampleOutcomes(c, 500, 42), sampleOutcomes(c, 500, 42));
  EXPECT_NE(sampleOutcomes(c, 500, 42), sampleOutcomes(c, 500, 43));
}

TEST(SampleShots, XCircuitAlwaysReadsOne) {
  Circuit c(1);
  c.x(0);
  const auto records = sampleShots(c, 100, 7);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].bitstring, "1");
  EXPECT_EQ(records[0].count, 100u);
  EXPECT_DOUBLE_EQ(records[0].probability, 1.0);
}

TEST(SampleShots, PositionMarginalIsUniform) {
  const auto image = fixtures::image4x4();
  const Circuit c = buildPreparation(image);
  const std::size_t shots = 4096;
  const auto records = sampleShots(c, shots, 9, c.layout().position);
  ASSERT_EQ(records.size(), 16u);
  const double p = 1.0 / 16, sigma = std::sqrt(p * (1 - p) / shots);
  for (const auto& r : records) EXPECT_NEAR(r.probability, p, 4 * sigma) << r.bitstring;
}

TEST(SampleShots, HistogramCsv) {
  const std::vector<ShotRecord> records{{"01", 3, 0.75}, {"10", 1, 0.25}};
  EXPECT_EQ(histogramCsv(records), "bitstring,count,probability\n01,3,0.75\n10,1,0.25\n");
}

TEST(SampleShots, ZeroShotsRejected) {
  Circuit c(1);
  EXPECT_THROW(sampleOutcomes(c, 0, 1), InvalidArgument);
}
