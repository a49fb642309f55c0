#pragma once

// Dense statevector backend.
//
// Resets are projective: the target is measured (outcome drawn from its
// marginal) and flipped to |0> when the outcome was 1. All randomness comes
// from std::mt19937_64; shot i of a run seeded with s uses a generator seeded
// from the sequence (s, i), so results do not depend on thread scheduling.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qiseg/circuit.hpp"

namespace qiseg {

using Amplitude = std::complex<double>;
using Rng = std::mt19937_64;

inline constexpr std::size_t kMaxStatevectorWidth = 26;

inline Rng shotRng(std::uint64_t seed, std::uint64_t shot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
  return Rng(seq);
}

// Uniform double in [0, 1) with 53 random bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Characters are the bits of `basis` at `qubits`, leftmost first.
inline std::string bitsOf(std::uint64_t basis, std::span<const Qubit> qubits) {
  std::string s;
  s.reserve(qubits.size());
  for (Qubit q : qubits) s.push_back(((basis >> q) & 1u) ? '1' : '0');
  return s;
}

class QuantumState {
 public:
  explicit QuantumState(std::size_t width, std::uint64_t initial = 0) : width_(width) {
    if (width > kMaxStatevectorWidth)
      throw InvalidArgument("statevector width " + std::to_string(width) + " exceeds limit " +
                            std::to_string(kMaxStatevectorWidth));
    if (initial >= dimension()) throw InvalidArgument("initial basis index out of range");
    amps_.assign(dimension(), Amplitude{0.0, 0.0});
    amps_[initial] = 1.0;
  }

  std::size_t width() const noexcept { return width_; }
  std::uint64_t dimension() const noexcept { return std::uint64_t{1} << width_; }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  Amplitude amplitude(std::uint64_t basis) const { return amps_.at(basis); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void apply(const GateOp& op, Rng& rng) {
    op.validate(width_);
    switch (op.kind) {
      case GateKind::H: applyH(op.target); break;
      case GateKind::RESET: applyReset(op.target, rng); break;
      default: applyControlledX(op); break;
    }
  }

  // Marginal distribution over `subset`; keys follow bitsOf(). Zero-probability
  // outcomes are omitted.
  std::map<std::string, double> probabilities(std::span<const Qubit> subset) const {
    for (Qubit q : subset)
      if (q >= width_) throw InvalidArgument("qubit " + std::to_string(q) + " outside state");
    std::map<std::string, double> out;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      const double p = std::norm(amps_[i]);
      if (p > 0.0) out[bitsOf(i, subset)] += p;
    }
    return out;
  }

  // Draws one computational-basis outcome from |amplitude|^2.
  std::uint64_t sample(Rng& rng) const {
    const double u = uniform01(rng) * norm();
    double acc = 0.0;
    std::uint64_t last = 0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      const double p = std::norm(amps_[i]);
      if (p == 0.0) continue;
      acc += p;
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

 private:
  // Index of the k-th basis state whose bit `t` is 0.
  static std::uint64_t insertZero(std::uint64_t k, std::size_t t) {
    const std::uint64_t low = k & ((std::uint64_t{1} << t) - 1);
    return ((k >> t) << (t + 1)) | low;
  }

  void applyH(Qubit t) {
    const double s = 1.0 / std::sqrt(2.0);
    const std::uint64_t bit = std::uint64_t{1} << t;
    const std::uint64_t half = dimension() / 2;
    for (std::uint64_t k = 0; k < half; ++k) {
      const std::uint64_t i0 = insertZero(k, t);
      const Amplitude a0 = amps_[i0];
      const Amplitude a1 = amps_[i0 | bit];
      amps_[i0] = s * (a0 + a1);
      amps_[i0 | bit] = s * (a0 - a1);
    }
  }

  void applyControlledX(const GateOp& op) {
    std::uint64_t mask = 0;
    std::uint64_t want = 0;
    for (const auto& c : op.controls) {
      mask |= std::uint64_t{1} << c.qubit;
      if (c.activeValue()) want |= std::uint64_t{1} << c.qubit;
    }
    const std::uint64_t bit = std::uint64_t{1} << op.target;
    const std::uint64_t half = dimension() / 2;
    for (std::uint64_t k = 0; k < half; ++k) {
      const std::uint64_t i0 = insertZero(k, op.target);
      if ((i0 & mask) == want) std::swap(amps_[i0], amps_[i0 | bit]);
    }
  }

  void applyReset(Qubit t, Rng& rng) {
    const std::uint64_t bit = std::uint64_t{1} << t;
    const std::uint64_t half = dimension() / 2;
    double p0 = 0.0;
    double p1 = 0.0;
    for (std::uint64_t k = 0; k < half; ++k) {
      const std::uint64_t i0 = insertZero(k, t);
      p0 += std::norm(amps_[i0]);
      p1 += std::norm(amps_[i0 | bit]);
    }
    const bool one = uniform01(rng) * (p0 + p1) < p1;
    const double kept = one ? p1 : p0;
    if (!(kept > 0.0)) throw Error("reset left a zero-norm state");
    const double scale = 1.0 / std::sqrt(kept);
    for (std::uint64_t k = 0; k < half; ++k) {
      const std::uint64_t i0 = insertZero(k, t);
      amps_[i0] = scale * (one ? amps_[i0 | bit] : amps_[i0]);
      amps_[i0 | bit] = 0.0;
    }
  }

  std::size_t width_;
  std::vector<Amplitude> amps_;
};

inline QuantumState run(const Circuit& circuit, std::uint64_t initial, std::uint64_t seed) {
  QuantumState state(circuit.width(), initial);
  Rng rng = shotRng(seed, 0);
  for (const auto& op : circuit.ops()) state.apply(op, rng);
  return state;
}

struct ShotRecord {
  std::string bitstring;
  std::size_t count = 0;
  double probability = 0.0;
};

// Readout order used for histograms: color bits then position bits, MSB first.
// Circuits without a layout read every qubit, highest index first.
inline std::vector<Qubit> defaultReadout(const Circuit& circuit) {
  const auto& l = circuit.layout();
  std::vector<Qubit> out;
  if (!l.color.empty() || !l.position.empty()) {
    out.insert(out.end(), l.color.rbegin(), l.color.rend());
    out.insert(out.end(), l.position.rbegin(), l.position.rend());
  } else {
    for (std::size_t q = circuit.width(); q-- > 0;) out.push_back(q);
  }
  return out;
}

// Basis outcome of every shot, in shot order.
inline std::vector<std::uint64_t> sampleOutcomes(const Circuit& circuit, std::size_t shots, std::uint64_t seed,
                                                 std::uint64_t initial = 0) {
  if (shots == 0) throw InvalidArgument("shots must be >= 1");
  // Everything before the first reset is deterministic; simulate it once.
  const auto& ops = circuit.ops();
  const auto firstReset =
      std::find_if(ops.begin(), ops.end(), [](const GateOp& op) { return op.kind == GateKind::RESET; });
  QuantumState shared(circuit.width(), initial);
  Rng unused = shotRng(seed, 0);
  for (auto it = ops.begin(); it != firstReset; ++it) shared.apply(*it, unused);

  std::vector<std::uint64_t> outcomes(shots);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      Rng rng = shotRng(seed, s);
      QuantumState state = shared;
      for (auto it = firstReset; it != ops.end(); ++it) state.apply(*it, rng);
      outcomes[s] = state.sample(rng);
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(shots, 8));
  std::vector<std::thread> pool;
  const std::size_t chunk = (shots + threads - 1) / threads;
  for (std::size_t t = 1; t < threads; ++t) {
    const std::size_t b = t * chunk;
    if (b < shots) pool.emplace_back(work, b, std::min(shots, b + chunk));
  }
  work(0, std::min(shots, chunk));
  for (auto& th : pool) th.join();
  return outcomes;
}

inline std::vector<ShotRecord> aggregateShots(std::span<const std::uint64_t> outcomes, std::span<const Qubit> measured) {
  std::map<std::string, std::size_t> counts;
  for (auto o : outcomes) ++counts[bitsOf(o, measured)];
  std::vector<ShotRecord> out;
  for (const auto& [bits, n] : counts)
    out.push_back({bits, n, static_cast<double>(n) / static_cast<double>(outcomes.size())});
  return out;
}

inline std::vector<ShotRecord> sampleShots(const Circuit& circuit, std::size_t shots, std::uint64_t seed,
                                           std::span<const Qubit> measured, std::uint64_t initial = 0) {
  const auto outcomes = sampleOutcomes(circuit, shots, seed, initial);
  return aggregateShots(outcomes, measured);
}

inline std::vector<ShotRecord> sampleShots(const Circuit& circuit, std::size_t shots, std::uint64_t seed) {
  const auto readout = defaultReadout(circuit);
  return sampleShots(circuit, shots, seed, readout);
}

inline std::string histogramCsv(std::span<const ShotRecord> records) {
  std::ostringstream os;
  os << "bitstring,count,probability\n";
  char buf[64];
  for (const auto& r : records) {
    const auto res = std::to_chars(buf, buf + sizeof buf, r.probability);
    os << r.bitstring << ',' << r.count << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
  return os.str();
}

}  // namespace qiseg
