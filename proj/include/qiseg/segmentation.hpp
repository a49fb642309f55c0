#pragma once

// Multi-threshold segmentation of an NEQR image.
//
// With thresholds T_1 < ... < T_n and levels g_1 .. g_{n+1}, a pixel f maps to
// g_1 below T_1, to g_k on [T_{k-1}, T_k) and to g_{n+1} at or above T_n.
//
// The circuit handles thresholds from the highest down. Each step loads the
// threshold, compares the current color against it into one of two result
// qubits, then overwrites the band that the new flag and the previous one
// isolate. Pixels already overwritten must never fall into a lower band, which
// holds as long as g_k >= T_{k-1}; ThresholdConfig::validate enforces it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qiseg/comparator.hpp"
#include "qiseg/cost.hpp"
#include "qiseg/image.hpp"
#include "qiseg/neqr.hpp"

namespace qiseg {

struct ThresholdConfig {
  unsigned q = 0;
  std::vector<Gray> thresholds;  // strictly increasing
  std::vector<Gray> levels;      // thresholds.size() + 1 entries

  std::size_t count() const noexcept { return thresholds.size(); }
  Gray maxValue() const noexcept { return (Gray{1} << q) - 1; }

  // g_1 = 0, g_{n+1} = 2^q - 1, and g_k = T_k in between (the upper edge of
  // the band). For two thresholds this is 0 / T_H / 2^q-1.
  static ThresholdConfig withDefaultLevels(unsigned q, std::vector<Gray> thresholds) {
    ThresholdConfig c{q, std::move(thresholds), {}};
    const std::size_t n = c.thresholds.size();
    c.levels.assign(n + 1, 0);
    if (q >= 1 && q <= kMaxGrayBits) c.levels[n] = c.maxValue();
    for (std::size_t k = 1; k < n; ++k) c.levels[k] = c.thresholds[k];
    c.validate();
    return c;
  }

  void validate() const {
    if (q == 0 || q > kMaxGrayBits) throw InvalidArgument("gray bit depth must be in [1, 16]");
    if (thresholds.empty()) throw InvalidArgument("at least one threshold is required");
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      if (thresholds[k] < 1 || thresholds[k] > maxValue())
        throw InvalidArgument("threshold " + std::to_string(thresholds[k]) + " outside [1, " +
                              std::to_string(maxValue()) + "]");
      if (k > 0 && thresholds[k] <= thresholds[k - 1])
        throw InvalidArgument("thresholds must be strictly increasing");
    }
    if (levels.size() != thresholds.size() + 1)
      throw InvalidArgument("expected " + std::to_string(thresholds.size() + 1) + " levels, got " +
                            std::to_string(levels.size()));
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] > maxValue())
        throw InvalidArgument("level " + std::to_string(levels[k]) + " exceeds " + std::to_string(maxValue()));
      if (k > 0 && levels[k] < thresholds[k - 1])
        throw InvalidArgument("level g" + std::to_string(k + 1) + "=" + std::to_string(levels[k]) +
                              " is below threshold T" + std::to_string(k) + "=" + std::to_string(thresholds[k - 1]) +
                              " and would be re-segmented");
    }
  }
};

inline Gray classifyPixel(Gray f, const ThresholdConfig& config) {
  std::size_t band = 0;
  while (band < config.thresholds.size() && f >= config.thresholds[band]) ++band;
  return config.levels[band];
}

inline ImageGray classicalSegment(const ImageGray& image, const ThresholdConfig& config) {
  config.validate();
  if (config.q != image.q()) throw InvalidArgument("config q does not match image q");
  std::vector<Gray> out;
  out.reserve(image.pixelCount());
  for (Gray f : image.pixels()) out.push_back(classifyPixel(f, config));
  return ImageGray(image.n(), image.q(), std::move(out));
}

namespace detail {

// color <- level on every branch where `condition` fires. Each bit goes
// through `scratch`, which is reset before the next bit.
inline void overwriteColor(Circuit& c, const RegisterLayout& layout, Control condition, Gray level, Qubit scratch) {
  for (std::size_t k = layout.color.size(); k-- > 0;) {
    const Qubit bit = layout.color[k];
    // Fire only when the bit differs from the level's bit.
    const Control differs{bit, ((level >> k) & 1u) ? Polarity::Negative : Polarity::Positive};
    c.ccx(condition, differs, scratch);
    c.cx(scratch, bit);
    c.reset(scratch);
  }
}

inline void checkSegmentLayout(const RegisterLayout& layout, Gray level) {
  layout.validate();
  if (layout.color.empty() || layout.cmpAux.size() != 2 || layout.results.size() != 2)
    throw InvalidArgument("segmentation needs color, comparator aux and result registers");
  if (level >> layout.color.size()) throw InvalidArgument("level does not fit the color register");
}

}  // namespace detail

// S1: color <- level where the high flag is 0 (f >= T_H).
inline Circuit buildS1(const RegisterLayout& layout, Gray level, std::optional<Qubit> highFlag = std::nullopt,
                       const std::string& stageName = "segment") {
  detail::checkSegmentLayout(layout, level);
  Circuit c(layout);
  c.beginStage(stageName);
  detail::overwriteColor(c, layout, neg(highFlag.value_or(layout.results[0])), level, layout.cmpAux[0]);
  return c;
}

// S2: color <- level where the low flag is 1 (f < T_L).
inline Circuit buildS2(const RegisterLayout& layout, Gray level, std::optional<Qubit> lowFlag = std::nullopt,
                       const std::string& stageName = "segment") {
  detail::checkSegmentLayout(layout, level);
  Circuit c(layout);
  c.beginStage(stageName);
  detail::overwriteColor(c, layout, pos(lowFlag.value_or(layout.results[1])), level, layout.cmpAux[0]);
  return c;
}

// S3: color <- level where high flag is 1 and low flag is 0 (T_L <= f < T_H).
// The conjunction is latched in one comparator aux qubit for the duration.
inline Circuit buildS3(const RegisterLayout& layout, Gray level, std::optional<Qubit> highFlag = std::nullopt,
                       std::optional<Qubit> lowFlag = std::nullopt, const std::string& stageName = "segment") {
  detail::checkSegmentLayout(layout, level);
  const Qubit high = highFlag.value_or(layout.results[0]);
  const Qubit low = lowFlag.value_or(layout.results[1]);
  const Qubit band = layout.cmpAux[0];
  Circuit c(layout);
  c.beginStage(stageName);
  c.ccx(pos(high), neg(low), band);
  detail::overwriteColor(c, layout, pos(band), level, layout.cmpAux[1]);
  c.reset(band);
  return c;
}

inline constexpr const char* kSegmentationFormula = "segmentation-paper";
inline constexpr const char* kThresholdInitFormula = "threshold-init-paper";
inline constexpr const char* kThresholdResetFormula = "threshold-reset-paper";

inline std::string stepStage(const char* kind, std::size_t step) { return std::string(kind) + "-" + std::to_string(step); }

// Full circuit: prep, then for step s = 1..n (threshold T_{n+1-s}):
//   init-s     X gates loading the threshold
//   compare-s  comparator into result qubit (s-1) % 2
//   segment-s  band overwrite (S1 form on step 1; S2 + S3 form on the last)
//   reset-s    threshold and stale result qubit cleared (all but the last step)
// For two thresholds this is prep, init T_H, compare, S1, reset, init T_L,
// compare, S2, S3.
inline Circuit buildPipeline(const ImageGray& image, const ThresholdConfig& config) {
  config.validate();
  if (config.q != image.q()) throw InvalidArgument("config q does not match image q");
  const RegisterLayout layout = RegisterLayout::neqr(image.q(), image.n());
  const auto q = static_cast<long long>(config.q);
  const std::size_t n = config.count();

  Circuit c = buildPreparation(image, layout);
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t t = n - step;  // index of this step's threshold
    const Gray threshold = config.thresholds[t];
    const Qubit flag = layout.results[(step - 1) % 2];
    const Qubit previous = layout.results[step % 2];

    const std::string init = stepStage("init", step);
    c.beginStage(init);
    for (std::size_t k = 0; k < layout.threshold.size(); ++k)
      if ((threshold >> k) & 1u) c.x(layout.threshold[k]);
    c.registerFormula({kThresholdInitFormula, q, {init}});

    c.append(buildComparator({layout.color,
                              layout.threshold,
                              {layout.cmpAux[0], layout.cmpAux[1]},
                              flag,
                              stepStage("compare", step)}));

    const std::string segment = stepStage("segment", step);
    if (step == 1) c.append(buildS1(layout, config.levels[n], flag, segment));
    if (step == n) c.append(buildS2(layout, config.levels[0], flag, segment));
    if (step > 1) c.append(buildS3(layout, config.levels[t + 1], previous, flag, segment));

    if (step < n) {
      const std::string reset = stepStage("reset", step);
      c.beginStage(reset);
      for (Qubit tq : layout.threshold) c.reset(tq);
      if (step > 1) c.reset(previous);
      c.registerFormula({kThresholdResetFormula, q, {reset}});
    }
  }
  if (n == 2) c.registerFormula({kSegmentationFormula, 21 * q + 10, {"segment-1", "segment-2"}});
  return c;
}

// Closed-form costs for the two-threshold circuit.
struct PipelineCostFormulas {
  long long comparator = 0;  // 18q-13, used twice
  long long comparatorCount = 2;
  long long segmentation = 0;   // 5(3q+1) + (3q+2) + (3q+3) = 21q+10
  long long thresholdInit = 0;  // 2q NOT + q reset
  long long paperTotal = 0;     // 60q-6 as stated
  long long componentSum = 0;   // sum of the components above = 60q-16
};

inline PipelineCostFormulas paperPipelineCost(unsigned q) {
  if (q == 0) throw InvalidArgument("q must be >= 1");
  const auto qq = static_cast<long long>(q);
  PipelineCostFormulas f;
  f.comparator = paperComparatorCost(q);
  f.segmentation = 5 * (3 * qq + 1) + (3 * qq + 2) + (3 * qq + 3);
  f.thresholdInit = 2 * qq + qq;
  f.paperTotal = 60 * qq - 6;
  f.componentSum = f.comparatorCount * f.comparator + f.segmentation + f.thresholdInit;
  return f;
}

// Thresholds used when a cost is wanted without a concrete image: two
// thresholds use 2^(q-2) and 2^(q-1) (010 and 100 at q = 3), other counts are
// spread evenly over [1, 2^q - 1].
inline std::vector<Gray> referenceThresholds(unsigned q, std::size_t count) {
  if (q == 0 || q > kMaxGrayBits) throw InvalidArgument("gray bit depth must be in [1, 16]");
  const std::uint64_t levels = std::uint64_t{1} << q;
  if (count == 0 || count >= levels)
    throw InvalidArgument("cannot place " + std::to_string(count) + " thresholds in " + std::to_string(q) + " bits");
  if (count == 2 && q >= 2) return {Gray{1} << (q - 2), Gray{1} << (q - 1)};
  std::vector<Gray> out;
  for (std::size_t k = 1; k <= count; ++k) out.push_back(static_cast<Gray>(k * levels / (count + 1)));
  return out;
}

// Cost ledger of the pipeline for `count` reference thresholds. The image does
// not matter: preparation is not counted.
inline CostLedger referencePipelineCost(unsigned q, std::size_t count) {
  const auto config = ThresholdConfig::withDefaultLevels(q, referenceThresholds(q, count));
  return quantumCost(buildPipeline(ImageGray::zeros(1, q), config));
}

struct Table2Row {
  std::string algorithm;
  int thresholds = 0;
  std::string auxiliaryFormula;
  long long auxiliaryQubits = 0;
  std::string costFormula;
  long long cost = 0;
  int segmentations = 0;
  std::optional<long long> actualCost;  // only for the circuit built here
};

inline std::vector<Table2Row> table2Report(unsigned q) {
  if (q == 0) throw InvalidArgument("q must be >= 1");
  const auto qq = static_cast<long long>(q);
  std::vector<Table2Row> rows{
      {"IS", 1, "3q-1", 3 * qq - 1, "127q-91", 127 * qq - 91, 2, std::nullopt},
      {"NMQCIS", 1, "18", 18, "48q-6", 48 * qq - 6, 2, std::nullopt},
      {"DQIS", 2, "5", 5, "70q-14", 70 * qq - 14, 2, std::nullopt},
      {"Our algorithm", 2, "4", 4, "60q-6", 60 * qq - 6, 3, std::nullopt},
  };
  if (q >= 2) rows.back().actualCost = referencePipelineCost(q, 2).actualCost;
  return rows;
}

}  // namespace qiseg
