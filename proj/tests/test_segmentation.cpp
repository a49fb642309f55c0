#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "qiseg/segmentation.hpp"
#include "qiseg/statevector.hpp"

using namespace qiseg;

namespace {

ImageGray runPipeline(const ImageGray& image, const ThresholdConfig& config) {
  const auto map = runTracked(buildPipeline(image, config));
  assertNoCollision(map);
  return decode(map);
}

void expectMatchesOracle(const ImageGray& image, const std::vector<Gray>& t, const std::vector<Gray>& g) {
  const ThresholdConfig config{image.q(), t, g};
  EXPECT_EQ(runPipeline(image, config).pixels(), fixtures::oracleSegment(image.pixels(), t, g));
  EXPECT_EQ(classicalSegment(image, config).pixels(), fixtures::oracleSegment(image.pixels(), t, g));
}

}  // namespace

TEST(ClassicalSegment, TwoThresholdExamples) {
  const ThresholdConfig c{3, {2, 4}, {0, 4, 7}};
  EXPECT_EQ(classifyPixel(0b001, c), 0b000u);
  EXPECT_EQ(classifyPixel(2, c), 4u);
  EXPECT_EQ(classifyPixel(3, c), 4u);
  EXPECT_EQ(classifyPixel(4, c), 7u);
  EXPECT_EQ(classifyPixel(7, c), 7u);
}

TEST(ClassicalSegment, DefaultLevels) {
  EXPECT_EQ(ThresholdConfig::withDefaultLevels(3, {2, 4}).levels, (std::vector<Gray>{0, 4, 7}));
  EXPECT_EQ(ThresholdConfig::withDefaultLevels(3, {2, 4, 6}).levels, (std::vector<Gray>{0, 4, 6, 7}));
  EXPECT_EQ(ThresholdConfig::withDefaultLevels(2, {1}).levels, (std::vector<Gray>{0, 3}));
}

TEST(ThresholdConfig, Validation) {
  EXPECT_THROW((ThresholdConfig{3, {4, 2}, {0, 4, 7}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {2, 2}, {0, 4, 7}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {0, 4}, {0, 4, 7}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {2, 8}, {0, 4, 7}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {2, 4}, {0, 1, 7}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {2, 4}, {0, 4, 3}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {2, 4}, {0, 4, 8}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {2, 4}, {0, 4}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{3, {}, {0}}.validate()), InvalidArgument);
  EXPECT_THROW((ThresholdConfig{0, {1}, {0, 0}}.validate()), InvalidArgument);
  try {
    ThresholdConfig{3, {4, 2}, {0, 4, 7}}.validate();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "thresholds must be strictly increasing");
  }
  EXPECT_THROW(buildPipeline(fixtures::image4x4(), ThresholdConfig{2, {1, 2}, {0, 1, 3}}), InvalidArgument);
}

// Each overwrite is checked on every color and flag value with n = 0.
TEST(SegmentBlocks, ExhaustiveOverFlagsAndColors) {
  for (unsigned q = 1; q <= 4; ++q) {
    const auto layout = RegisterLayout::neqr(q, 0);
    const Qubit high = layout.results[0], low = layout.results[1];
    for (Gray level = 0; level < (1u << q); ++level) {
      const Circuit s1 = buildS1(layout, level), s2 = buildS2(layout, level), s3 = buildS3(layout, level);
      for (Gray color = 0; color < (1u << q); ++color) {
        for (std::uint64_t flags = 0; flags < 4; ++flags) {
          const std::uint64_t yh = flags & 1u, yl = flags >> 1;
          std::uint64_t in = writeRegister(0, layout.color, color);
          in |= (yh << high) | (yl << low);
          auto check = [&](const Circuit& c, bool fires) {
            const auto out = runTracked(c, in).branches.front().bits;
            EXPECT_EQ(readRegister(out, layout.color), fires ? level : color);
            EXPECT_EQ(readRegister(out, layout.cmpAux), 0u);
            EXPECT_EQ(writeRegister(out, layout.color, 0), writeRegister(in, layout.color, 0));
          };
          check(s1, yh == 0);
          check(s2, yl == 1);
          check(s3, yh == 1 && yl == 0);
        }
      }
    }
  }
}

TEST(SegmentBlocks, WorkedPixel) {
  const auto layout = RegisterLayout::neqr(3, 0);
  // f = 001 < T_L: y_H = 1, y_L = 1; S2 overwrites with 000.
  std::uint64_t in = writeRegister(0, layout.color, 0b001) | (1u << layout.results[0]) | (1u << layout.results[1]);
  EXPECT_EQ(readRegister(runTracked(buildS2(layout, 0), in).branches.front().bits, layout.color), 0u);
  EXPECT_THROW(buildS1(layout, 8), InvalidArgument);
}

TEST(Pipeline, Example4x4DefaultLevels) {
  const auto image = fixtures::image4x4();
  expectMatchesOracle(image, {2, 4}, {0, 4, 7});
  const auto out = runPipeline(image, ThresholdConfig::withDefaultLevels(3, {2, 4}));
  EXPECT_EQ(out.pixels(), (std::vector<Gray>{4, 4, 4, 4, 4, 4, 0, 0, 0, 7, 0, 7, 0, 7, 7, 7}));
}

// The reference segmented state has one wrong term (label 1110, whose input 5
// lies above T_H and so must become 111).
TEST(Pipeline, Example4x4ListedTermsExceptOne) {
  const auto map = runTracked(buildPipeline(fixtures::image4x4(), ThresholdConfig{3, {2, 4}, {0, 4, 7}}));
  std::set<std::string> ours;
  for (const auto& b : map.branches)
    ours.insert(bitsOf(map.colorOf(b), std::vector<Qubit>{2, 1, 0}) +
                bitsOf(map.positionOf(b), std::vector<Qubit>{3, 2, 1, 0}));
  std::vector<std::string> missing;
  for (const auto& t : fixtures::listedSegmentedTerms())
    if (!ours.count(t)) missing.push_back(t);
  EXPECT_EQ(missing, (std::vector<std::string>{"1001110"}));
  EXPECT_TRUE(ours.count("1111110"));
}

TEST(Pipeline, ThresholdSetsOnExample4x4) {
  const auto image = fixtures::image4x4();
  for (auto [tl, th] : std::vector<std::pair<Gray, Gray>>{{3, 5}, {3, 6}, {1, 3}, {2, 5}})
    expectMatchesOracle(image, {tl, th}, ThresholdConfig::withDefaultLevels(3, {tl, th}).levels);
}

TEST(Pipeline, ThreeThresholds) { expectMatchesOracle(fixtures::image4x4(), {2, 4, 6}, {0, 2, 4, 7}); }

TEST(Pipeline, SingleThresholdExhaustive) {
  for (Gray t = 1; t < 4; ++t)
    for (Gray g0 = 0; g0 < 4; ++g0)
      for (Gray g1 = t; g1 < 4; ++g1)
        for (std::uint32_t code = 0; code < 256; ++code) {
          const ImageGray image(1, 2, {code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3});
          const ThresholdConfig c{2, {t}, {g0, g1}};
          ASSERT_EQ(runPipeline(image, c).pixels(), fixtures::oracleSegment(image.pixels(), {t}, {g0, g1}));
        }
}

TEST(Pipeline, RandomTwoThresholdConfigs) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const auto image = fixtures::randomImage(rng, 2, 3);
    std::vector<Gray> t, g;
    fixtures::randomConfig(rng, 3, 2, t, g);
    expectMatchesOracle(image, t, g);
  }
}

TEST(Pipeline, RandomManyThresholdConfigs) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned q = 3 + rng() % 2;
    const std::size_t count = 1 + rng() % 5;
    const auto image = fixtures::randomImage(rng, 1 + rng() % 2, q);
    std::vector<Gray> t, g;
    fixtures::randomConfig(rng, q, count, t, g);
    expectMatchesOracle(image, t, g);
  }
}

// Levels sitting exactly on the threshold below must not be re-segmented.
TEST(Pipeline, LevelsOnTheBoundary) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t count = 1 + rng() % 4;
    std::vector<Gray> t, g;
    fixtures::randomConfig(rng, 3, count, t, g);
    for (std::size_t k = 1; k <= count; ++k) g[k] = t[k - 1];
    expectMatchesOracle(fixtures::randomImage(rng, 2, 3), t, g);
  }
}

TEST(Pipeline, WidthDoesNotGrowWithThresholds) {
  const auto image = fixtures::image4x4();
  for (std::size_t count = 1; count <= 4; ++count) {
    const auto config = ThresholdConfig::withDefaultLevels(3, referenceThresholds(3, count));
    EXPECT_EQ(buildPipeline(image, config).width(), 14u);
  }
}

TEST(Pipeline, StageOrder) {
  const auto c = buildPipeline(fixtures::image4x4(), ThresholdConfig{3, {2, 4}, {0, 4, 7}});
  std::vector<std::string> names;
  for (const auto& s : c.stages()) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"prep", "init-1", "compare-1", "segment-1", "reset-1", "init-2",
                                             "compare-2", "segment-2"}));
}

// After two thresholds no branch can have f >= T_H together with f < T_L,
// and every scratch qubit is clean.
TEST(Pipeline, FlagsAreConsistent) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto image = fixtures::randomImage(rng, 2, 3);
    std::vector<Gray> t, g;
    fixtures::randomConfig(rng, 3, 2, t, g);
    const Circuit c = buildPipeline(image, ThresholdConfig{3, t, g});
    const auto& l = c.layout();
    for (const auto& b : runTracked(c).branches) {
      const auto yh = (b.bits >> l.results[0]) & 1u, yl = (b.bits >> l.results[1]) & 1u;
      EXPECT_FALSE(yh == 0 && yl == 1);
      EXPECT_EQ(readRegister(b.bits, l.cmpAux), 0u);
      EXPECT_EQ(readRegister(b.bits, l.threshold), t[0]);
    }
  }
}

TEST(Cost, PaperPipelineFormulas) {
  const auto f3 = paperPipelineCost(3);
  EXPECT_EQ(f3.paperTotal, 174);
  EXPECT_EQ(f3.componentSum, 164);
  EXPECT_EQ(f3.comparator, 41);
  EXPECT_EQ(f3.segmentation, 73);
  EXPECT_EQ(f3.thresholdInit, 9);
  EXPECT_EQ(paperPipelineCost(8).paperTotal, 474);
  EXPECT_THROW(paperPipelineCost(0), InvalidArgument);
}

TEST(Cost, PipelineLedgerUsesRegisteredFormulas) {
  for (unsigned q = 2; q <= 8; ++q) {
    const auto ledger = referencePipelineCost(q, 2);
    EXPECT_EQ(ledger.paperCost, paperPipelineCost(q).componentSum);
    EXPECT_GT(ledger.actualCost, 0);
    EXPECT_EQ(ledger.costByFormula.at(kComparatorFormula), 2 * paperComparatorCost(q));
  }
}

TEST(Cost, Table2) {
  const auto rows = table2Report(3);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].cost, 290);
  EXPECT_EQ(rows[1].cost, 138);
  EXPECT_EQ(rows[2].cost, 196);
  EXPECT_EQ(rows[3].cost, 174);
  EXPECT_EQ(rows[3].auxiliaryQubits, 4);
  EXPECT_EQ(rows[3].segmentations, 3);
  EXPECT_TRUE(rows[3].actualCost.has_value());
  EXPECT_EQ(table2Report(1)[2].cost, 56);
  EXPECT_FALSE(table2Report(1)[3].actualCost.has_value());
}
