#pragma once

// `qiseg segment` and `qiseg cost`.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qiseg/qiseg.hpp"

namespace qiseg::cli {

using nlohmann::ordered_json;

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void writeFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << contents)) throw Error("cannot write '" + path + "'");
}

// Decimal, or binary with a 0b prefix.
inline Gray parseLiteral(const std::string& text) {
  std::string digits = text;
  int base = 10;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'b' || digits[1] == 'B')) {
    digits = digits.substr(2);
    base = 2;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || v > 0xffffffffu)
    throw InvalidArgument("malformed value '" + text + "' (use decimal or 0b binary)");
  return static_cast<Gray>(v);
}

inline ordered_json ledgerJson(const CostLedger& ledger) {
  ordered_json stages = ordered_json::array();
  for (const auto& s : ledger.perStage) {
    stages.push_back({{"stage", s.stage},
                      {"singleQubit", s.counts.singleQubit},
                      {"loweringX", s.counts.loweringX},
                      {"cnot", s.counts.cnot},
                      {"toffoli", s.counts.toffoli},
                      {"mcx", s.counts.mcx},
                      {"reset", s.counts.reset},
                      {"actualCost", s.actualCost}});
  }
  return stages;
}

inline ordered_json table2Json(unsigned q) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : table2Report(q)) {
    ordered_json row{{"algorithm", r.algorithm},
                     {"thresholds", r.thresholds},
                     {"auxiliaryQubits", r.auxiliaryQubits},
                     {"auxiliaryFormula", r.auxiliaryFormula},
                     {"costFormula", r.costFormula},
                     {"cost", r.cost},
                     {"segmentations", r.segmentations}};
    if (r.actualCost) row["actualCost"] = *r.actualCost;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Cost report shared by `cost` and `segment --cost-report`. `ledger` is absent
// when no circuit can be built for the request.
inline ordered_json costReport(unsigned q, const std::vector<Gray>& thresholds, const std::optional<CostLedger>& ledger) {
  const auto formulas = paperPipelineCost(q);
  ordered_json j;
  j["schema"] = 1;
  j["q"] = q;
  j["thresholds"] = thresholds;
  j["paperTotal"] = formulas.paperTotal;
  j["componentSum"] = formulas.componentSum;
  j["components"] = {{"comparator", formulas.comparator},
                     {"comparatorCount", formulas.comparatorCount},
                     {"segmentation", formulas.segmentation},
                     {"thresholdInit", formulas.thresholdInit}};
  if (ledger) {
    j["actualCost"] = ledger->actualCost;
    j["paperCost"] = ledger->paperCost;
    j["costByFormula"] = ledger->costByFormula;
    j["perStage"] = ledgerJson(*ledger);
  } else {
    j["actualCost"] = nullptr;
    j["paperCost"] = nullptr;
    j["costByFormula"] = ordered_json::object();
    j["perStage"] = ordered_json::array();
  }
  j["table2"] = table2Json(q);
  return j;
}

struct SegmentOptions {
  std::string input;
  std::vector<std::string> thresholds;
  std::optional<std::string> tLow;
  std::optional<std::string> tHigh;
  std::vector<std::string> levels;
  std::string backend = "tracked";
  std::size_t shots = 1024;
  std::uint64_t seed = 1;
  std::string out;
  std::string histogram;
  std::string costReport;
  std::string exportQasm;
};

inline ThresholdConfig configFor(const SegmentOptions& o, unsigned q) {
  std::vector<Gray> thresholds;
  for (const auto& t : o.thresholds) thresholds.push_back(parseLiteral(t));
  if (o.tLow) thresholds.push_back(parseLiteral(*o.tLow));
  if (o.tHigh) thresholds.push_back(parseLiteral(*o.tHigh));
  if (thresholds.empty()) throw InvalidArgument("no thresholds given (use --t or --t-low/--t-high)");
  if (o.levels.empty()) {
    // Ordering first, so the message is not about a derived level.
    for (std::size_t k = 1; k < thresholds.size(); ++k)
      if (thresholds[k] <= thresholds[k - 1]) throw InvalidArgument("thresholds must be strictly increasing");
    return ThresholdConfig::withDefaultLevels(q, std::move(thresholds));
  }
  ThresholdConfig c{q, std::move(thresholds), {}};
  for (const auto& l : o.levels) c.levels.push_back(parseLiteral(l));
  c.validate();
  return c;
}

// Majority color per position over all shots. Positions whose shots disagree
// are reported on `err`.
inline ImageGray reconstructFromShots(const Circuit& circuit, const std::vector<std::uint64_t>& outcomes,
                                      unsigned n, unsigned q, std::ostream& err) {
  const auto& layout = circuit.layout();
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<std::map<Gray, std::size_t>> votes(count);
  for (auto o : outcomes)
    ++votes[readRegister(o, layout.position)][static_cast<Gray>(readRegister(o, layout.color))];

  std::vector<Gray> pixels(count, 0);
  std::vector<std::size_t> disputed;
  for (std::size_t p = 0; p < count; ++p) {
    if (votes[p].empty())
      throw Error("position " + std::to_string(p) + " was never observed in " + std::to_string(outcomes.size()) +
                  " shots; increase --shots");
    std::size_t best = 0;
    for (const auto& [color, n_] : votes[p])
      if (n_ > best) best = n_, pixels[p] = color;
    if (votes[p].size() > 1) disputed.push_back(p);
  }
  if (!disputed.empty()) {
    err << "warning: color not unanimous at position(s)";
    for (auto p : disputed) err << ' ' << p;
    err << '\n';
  }
  return ImageGray(n, q, std::move(pixels));
}

inline int cmdSegment(const SegmentOptions& o, std::ostream& out, std::ostream& err) {
  if (o.backend != "tracked" && o.backend != "statevector")
    throw InvalidArgument("unknown backend '" + o.backend + "'");
  if (o.backend == "statevector" && o.shots == 0) throw InvalidArgument("--shots must be >= 1");
  if (!o.histogram.empty() && o.backend != "statevector")
    throw InvalidArgument("--histogram requires --backend statevector");

  const ImageGray image = readImagePGM(readFile(o.input));
  const ThresholdConfig config = configFor(o, image.q());
  const Circuit circuit = buildPipeline(image, config);

  ImageGray segmented = ImageGray::zeros(image.n(), image.q());
  if (o.backend == "tracked") {
    const BranchMap map = runTracked(circuit);
    assertNoCollision(map);
    segmented = decode(map);
  } else {
    const auto outcomes = sampleOutcomes(circuit, o.shots, o.seed);
    segmented = reconstructFromShots(circuit, outcomes, image.n(), image.q(), err);
    if (!o.histogram.empty()) {
      const auto readout = defaultReadout(circuit);
      writeFile(o.histogram, histogramCsv(aggregateShots(outcomes, readout)));
    }
  }
  writeFile(o.out, writeImagePGM(segmented));

  if (!o.costReport.empty())
    writeFile(o.costReport, costReport(image.q(), config.thresholds, quantumCost(circuit)).dump(2) + "\n");
  if (!o.exportQasm.empty()) writeFile(o.exportQasm, exportCircuitText(circuit));

  out << "segmented " << image.side() << "x" << image.side() << " image (q=" << image.q() << ", "
      << config.count() << " threshold(s), " << circuit.width() << " qubits, backend " << o.backend << ") -> "
      << o.out << '\n';
  return 0;
}

inline int cmdCost(unsigned q, std::size_t thresholdCount, std::ostream& out) {
  if (q == 0) throw InvalidArgument("--q must be >= 1");
  std::vector<Gray> thresholds;
  std::optional<CostLedger> ledger;
  try {
    thresholds = referenceThresholds(q, thresholdCount);
    ledger = referencePipelineCost(q, thresholdCount);
  } catch (const InvalidArgument&) {
    if (thresholdCount == 0) throw;
  }
  out << costReport(q, thresholds, ledger).dump(2) << '\n';
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Multi-threshold quantum segmentation of NEQR images"};
  app.require_subcommand(1);

  SegmentOptions seg;
  auto* segment = app.add_subcommand("segment", "Segment a plain PGM image through the quantum circuit");
  segment->add_option("--input", seg.input, "Input plain PGM (P2), square with power-of-two side")->required();
  segment->add_option("--t", seg.thresholds, "Thresholds, ascending (decimal or 0b binary)")->delimiter(',');
  segment->add_option("--t-low", seg.tLow, "Low threshold (appended after --t)");
  segment->add_option("--t-high", seg.tHigh, "High threshold (appended after --t-low)");
  segment->add_option("--levels", seg.levels, "Output levels g1..g(n+1)")->delimiter(',');
  segment->add_option("--backend", seg.backend, "tracked | statevector")->check(CLI::IsMember({"tracked", "statevector"}));
  segment->add_option("--shots", seg.shots, "Shots for the statevector backend");
  segment->add_option("--seed", seg.seed, "Seed for the statevector backend");
  segment->add_option("--out", seg.out, "Segmented PGM output")->required();
  segment->add_option("--histogram", seg.histogram, "Histogram CSV output (statevector)");
  segment->add_option("--cost-report", seg.costReport, "Cost JSON output");
  segment->add_option("--export-qasm", seg.exportQasm, "OpenQASM 2.0 circuit output");

  unsigned costQ = 0;
  std::size_t costThresholds = 2;
  auto* cost = app.add_subcommand("cost", "Print the quantum cost report as JSON");
  cost->add_option("--q", costQ, "Gray bit depth")->required();
  cost->add_option("--thresholds", costThresholds, "Number of thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (segment->parsed()) return cmdSegment(seg, out, err);
    return cmdCost(costQ, costThresholds, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qiseg::cli
