#pragma once

// Gate-level intermediate representation shared by every builder and backend.
//
// A Circuit is an ordered list of GateOps over `width` qubits, partitioned into
// contiguous named stages ("prep", "compare-1", ...). Stages are what the cost
// ledger counts over; they never change simulation semantics.
//
// Qubit i corresponds to bit i of a computational basis index.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qiseg/error.hpp"

namespace qiseg {

using Qubit = std::size_t;

enum class Polarity : std::uint8_t { Positive, Negative };

struct Control {
  Qubit qubit = 0;
  Polarity polarity = Polarity::Positive;

  Control() = default;
  // Implicit so that plain qubit indices read as positive controls.
  Control(Qubit q, Polarity p = Polarity::Positive) : qubit(q), polarity(p) {}  // NOLINT

  bool negative() const noexcept { return polarity == Polarity::Negative; }
  // Value the control qubit must hold for the gate to fire.
  bool activeValue() const noexcept { return polarity == Polarity::Positive; }

  friend bool operator==(const Control&, const Control&) = default;
};

inline Control neg(Qubit q) { return Control{q, Polarity::Negative}; }
inline Control pos(Qubit q) { return Control{q, Polarity::Positive}; }

enum class GateKind : std::uint8_t { H, X, CNOT, TOFFOLI, MCX, RESET };

inline std::string_view toString(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::TOFFOLI: return "TOFFOLI";
    case GateKind::MCX: return "MCX";
    case GateKind::RESET: return "RESET";
  }
  return "?";
}

struct GateOp {
  GateKind kind = GateKind::X;
  Qubit target = 0;
  std::vector<Control> controls;

  static GateOp h(Qubit t) { return {GateKind::H, t, {}}; }
  static GateOp x(Qubit t) { return {GateKind::X, t, {}}; }
  static GateOp reset(Qubit t) { return {GateKind::RESET, t, {}}; }
  static GateOp cx(Control c, Qubit t) { return {GateKind::CNOT, t, {c}}; }
  static GateOp ccx(Control c0, Control c1, Qubit t) { return {GateKind::TOFFOLI, t, {c0, c1}}; }
  static GateOp mcx(std::vector<Control> cs, Qubit t) { return {GateKind::MCX, t, std::move(cs)}; }

  // X with any number of controls; the kind follows the control count.
  static GateOp controlledX(std::vector<Control> cs, Qubit t) {
    switch (cs.size()) {
      case 0: return x(t);
      case 1: return cx(cs[0], t);
      case 2: return ccx(cs[0], cs[1], t);
      default: return mcx(std::move(cs), t);
    }
  }

  bool isPermutation() const noexcept { return kind != GateKind::H && kind != GateKind::RESET; }

  bool hasNegativeControl() const noexcept {
    return std::any_of(controls.begin(), controls.end(), [](const Control& c) { return c.negative(); });
  }

  // Throws InvalidArgument when the op is malformed for a circuit of `width` qubits.
  void validate(std::size_t width) const {
    auto fail = [&](const std::string& why) {
      throw InvalidArgument(std::string(toString(kind)) + " on q[" + std::to_string(target) + "]: " + why);
    };
    std::size_t expected = 0;
    switch (kind) {
      case GateKind::H:
      case GateKind::X:
      case GateKind::RESET: expected = 0; break;
      case GateKind::CNOT: expected = 1; break;
      case GateKind::TOFFOLI: expected = 2; break;
      case GateKind::MCX:
        if (controls.size() < 3) fail("MCX needs at least 3 controls");
        expected = controls.size();
        break;
    }
    if (controls.size() != expected) fail("expected " + std::to_string(expected) + " controls");
    if (target >= width) fail("target out of range for width " + std::to_string(width));
    std::set<Qubit> seen{target};
    for (const auto& c : controls) {
      if (c.qubit >= width) fail("control q[" + std::to_string(c.qubit) + "] out of range");
      if (!seen.insert(c.qubit).second) fail("control q[" + std::to_string(c.qubit) + "] repeats a qubit");
    }
  }

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

// Assignment of roles to qubit indices. Every register is stored LSB first:
// color[k] carries gray bit C_k, position[k] carries bit k of the label Y||X
// (so position[2n-1] is Y_{n-1} and position[0] is X_0).
struct RegisterLayout {
  std::vector<Qubit> color;
  std::vector<Qubit> position;
  std::vector<Qubit> threshold;
  std::vector<Qubit> cmpAux;
  std::vector<Qubit> results;

  // Standard layout for a 2^n x 2^n image with q gray bits:
  //   [0, 2n)           position
  //   [2n, 2n+q)        color
  //   [2n+q, 2n+2q)     threshold
  //   2n+2q, 2n+2q+1    comparator aux
  //   2n+2q+2, 2n+2q+3  result pair
  static RegisterLayout neqr(unsigned q, unsigned n) {
    if (q == 0) throw InvalidArgument("gray bit depth q must be >= 1");
    RegisterLayout l;
    Qubit next = 0;
    auto take = [&](std::vector<Qubit>& reg, std::size_t count) {
      for (std::size_t i = 0; i < count; ++i) reg.push_back(next++);
    };
    take(l.position, 2 * std::size_t{n});
    take(l.color, q);
    take(l.threshold, q);
    take(l.cmpAux, 2);
    take(l.results, 2);
    return l;
  }

  unsigned grayBits() const noexcept { return static_cast<unsigned>(color.size()); }
  unsigned positionHalfBits() const noexcept { return static_cast<unsigned>(position.size() / 2); }

  bool empty() const noexcept {
    return color.empty() && position.empty() && threshold.empty() && cmpAux.empty() && results.empty();
  }

  // Number of qubits the layout spans (1 + highest index).
  std::size_t width() const {
    std::size_t w = 0;
    for (const auto* reg : {&color, &position, &threshold, &cmpAux, &results})
      for (Qubit q : *reg) w = std::max(w, q + 1);
    return w;
  }

  void validate() const {
    std::set<Qubit> seen;
    for (const auto* reg : {&color, &position, &threshold, &cmpAux, &results})
      for (Qubit q : *reg)
        if (!seen.insert(q).second)
          throw InvalidArgument("register layout assigns q[" + std::to_string(q) + "] twice");
    if (empty()) return;
    if (position.size() % 2 != 0) throw InvalidArgument("position register must have an even size");
    if (threshold.size() != color.size())
      throw InvalidArgument("threshold register must match the color register width");
    if (cmpAux.size() != 2) throw InvalidArgument("layout needs exactly 2 comparator aux qubits");
    if (results.size() != 2) throw InvalidArgument("layout needs exactly 2 result qubits");
  }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;
};

// Contiguous op range [begin, end) with a unique name.
struct Stage {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Stage&, const Stage&) = default;
};

// A closed-form cost the builders attach to the stages it describes.
struct CostFormula {
  std::string name;
  long long value = 0;
  std::vector<std::string> stages;

  friend bool operator==(const CostFormula&, const CostFormula&) = default;
};

class Circuit {
 public:
  explicit Circuit(std::size_t width = 0) : width_(width) {}

  explicit Circuit(RegisterLayout layout) : width_(layout.width()), layout_(std::move(layout)) {
    layout_.validate();
  }

  Circuit(std::size_t width, RegisterLayout layout) : width_(width), layout_(std::move(layout)) {
    layout_.validate();
    if (layout_.width() > width_) throw InvalidArgument("layout does not fit in circuit width");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return ops_.size(); }
  bool empty() const noexcept { return ops_.empty(); }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  const std::vector<Stage>& stages() const noexcept { return stages_; }
  const RegisterLayout& layout() const noexcept { return layout_; }
  const std::vector<CostFormula>& formulas() const noexcept { return formulas_; }

  const Stage* findStage(std::string_view name) const {
    auto it = std::find_if(stages_.begin(), stages_.end(), [&](const Stage& s) { return s.name == name; });
    return it == stages_.end() ? nullptr : &*it;
  }

  // Name of the stage containing op `index`.
  const std::string& stageOf(std::size_t index) const {
    for (const auto& s : stages_)
      if (index >= s.begin && index < s.end) return s.name;
    throw InvalidArgument("op index " + std::to_string(index) + " out of range");
  }

  // Opens a new stage; subsequent ops extend it. Re-opening the current stage
  // is a no-op, re-opening an earlier one is an error.
  Circuit& beginStage(std::string name) {
    if (!stages_.empty() && stages_.back().name == name) return *this;
    if (findStage(name) != nullptr) throw InvalidArgument("stage '" + name + "' already exists");
    if (name.empty()) throw InvalidArgument("stage name must be non-empty");
    stages_.push_back(Stage{std::move(name), ops_.size(), ops_.size()});
    return *this;
  }

  Circuit& append(GateOp op) {
    op.validate(width_);
    if (stages_.empty()) beginStage("main");
    ops_.push_back(std::move(op));
    stages_.back().end = ops_.size();
    return *this;
  }

  // Appends every op of `fragment`, carrying its stages and formulas over. A
  // fragment stage with the same name as the currently open stage extends it.
  Circuit& append(const Circuit& fragment) {
    if (fragment.width() > width_)
      throw InvalidArgument("fragment width " + std::to_string(fragment.width()) + " exceeds circuit width " +
                            std::to_string(width_));
    for (const auto& stage : fragment.stages_) {
      beginStage(stage.name);
      for (std::size_t i = stage.begin; i < stage.end; ++i) append(fragment.ops_[i]);
    }
    for (const auto& f : fragment.formulas_) formulas_.push_back(f);
    return *this;
  }

  Circuit& h(Qubit t) { return append(GateOp::h(t)); }
  Circuit& x(Qubit t) { return append(GateOp::x(t)); }
  Circuit& reset(Qubit t) { return append(GateOp::reset(t)); }
  Circuit& cx(Control c, Qubit t) { return append(GateOp::cx(c, t)); }
  Circuit& ccx(Control c0, Control c1, Qubit t) { return append(GateOp::ccx(c0, c1, t)); }
  Circuit& mcx(std::vector<Control> cs, Qubit t) { return append(GateOp::mcx(std::move(cs), t)); }
  Circuit& controlledX(std::vector<Control> cs, Qubit t) { return append(GateOp::controlledX(std::move(cs), t)); }

  void registerFormula(CostFormula f) { formulas_.push_back(std::move(f)); }

  // First `count` ops, with stages truncated accordingly. Formulas are dropped.
  Circuit prefix(std::size_t count) const {
    Circuit out(width_, layout_);
    count = std::min(count, ops_.size());
    for (const auto& s : stages_) {
      if (s.begin > count || (s.begin == count && count < ops_.size())) break;
      out.stages_.push_back(Stage{s.name, s.begin, std::min(s.end, count)});
    }
    out.ops_.assign(ops_.begin(), ops_.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
  }

  // Gate-for-gate equality: width, ops and stage markers.
  bool sameGates(const Circuit& other) const {
    return width_ == other.width_ && ops_ == other.ops_ && stages_ == other.stages_;
  }

 private:
  std::size_t width_;
  RegisterLayout layout_;
  std::vector<GateOp> ops_;
  std::vector<Stage> stages_;
  std::vector<CostFormula> formulas_;
};

}  // namespace qiseg
