#pragma once

// OpenQASM 2.0 subset export/import.
//
// Only h, x, cx, ccx and reset are emitted. Negative controls become X-flanked
// positive controls; an MCX becomes a Toffoli network that borrows idle wires
// (their state is restored, so they may hold anything). Stage markers travel as
// `// stage:<name>` comment lines.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qiseg/circuit.hpp"

namespace qiseg {

namespace detail {

// Barenco et al. Lemma 7.2: m controls, m-2 borrowed wires, 4(m-2) Toffolis.
inline void emitVChain(const std::vector<Qubit>& cs, Qubit target, const std::vector<Qubit>& borrowed,
                       std::vector<GateOp>& out) {
  const std::size_t m = cs.size();
  auto descend = [&] {
    for (std::size_t i = m - 2; i >= 2; --i) out.push_back(GateOp::ccx(cs[i], borrowed[i - 2], borrowed[i - 1]));
  };
  auto ascend = [&] {
    for (std::size_t i = 2; i + 1 < m; ++i) out.push_back(GateOp::ccx(cs[i], borrowed[i - 2], borrowed[i - 1]));
  };
  const GateOp top = GateOp::ccx(cs[m - 1], borrowed[m - 3], target);
  const GateOp base = GateOp::ccx(cs[0], cs[1], borrowed[0]);
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 0) out.push_back(top);
    descend();
    out.push_back(base);
    ascend();
    if (pass == 0) out.push_back(top);
  }
}

inline void emitPositiveMcx(const std::vector<Qubit>& cs, Qubit target, const std::vector<Qubit>& idle,
                            std::vector<GateOp>& out) {
  const std::size_t m = cs.size();
  if (m <= 2) {
    std::vector<Control> ctl(cs.begin(), cs.end());
    out.push_back(GateOp::controlledX(std::move(ctl), target));
    return;
  }
  if (idle.size() >= m - 2) {
    emitVChain(cs, target, idle, out);
    return;
  }
  if (idle.empty())
    throw InvalidArgument("cannot lower a " + std::to_string(m) + "-control X that spans every wire");

  // Split the controls in two and route the first half through one borrowed wire.
  const Qubit relay = idle.front();
  const std::vector<Qubit> rest(idle.begin() + 1, idle.end());
  const std::size_t m1 = (m + 1) / 2;
  std::vector<Qubit> low(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(m1));
  std::vector<Qubit> high(cs.begin() + static_cast<std::ptrdiff_t>(m1), cs.end());

  std::vector<Qubit> idleForLow = high;
  idleForLow.push_back(target);
  idleForLow.insert(idleForLow.end(), rest.begin(), rest.end());
  std::vector<Qubit> highPlusRelay = high;
  highPlusRelay.push_back(relay);
  std::vector<Qubit> idleForHigh = low;
  idleForHigh.insert(idleForHigh.end(), rest.begin(), rest.end());

  for (int i = 0; i < 2; ++i) {
    emitPositiveMcx(highPlusRelay, target, idleForHigh, out);
    emitPositiveMcx(low, relay, idleForLow, out);
  }
}

}  // namespace detail

// Rewrites `op` over {H, X, CNOT, TOFFOLI, RESET} with positive controls only.
inline void lowerOp(const GateOp& op, std::size_t width, std::vector<GateOp>& out) {
  if (op.controls.empty()) {
    out.push_back(op);
    return;
  }
  for (const auto& c : op.controls)
    if (c.negative()) out.push_back(GateOp::x(c.qubit));

  std::vector<Qubit> cs;
  for (const auto& c : op.controls) cs.push_back(c.qubit);
  if (op.kind == GateKind::MCX) {
    std::vector<bool> busy(width, false);
    busy[op.target] = true;
    for (Qubit q : cs) busy[q] = true;
    std::vector<Qubit> idle;
    for (Qubit q = 0; q < width; ++q)
      if (!busy[q]) idle.push_back(q);
    detail::emitPositiveMcx(cs, op.target, idle, out);
  } else {
    std::vector<Control> positive(cs.begin(), cs.end());
    out.push_back(GateOp::controlledX(std::move(positive), op.target));
  }

  for (const auto& c : op.controls)
    if (c.negative()) out.push_back(GateOp::x(c.qubit));
}

// Same circuit over the exportable gate set; stages, layout and formulas kept.
inline Circuit lower(const Circuit& circuit) {
  Circuit out(circuit.width(), circuit.layout());
  for (const auto& stage : circuit.stages()) {
    out.beginStage(stage.name);
    std::vector<GateOp> lowered;
    for (std::size_t i = stage.begin; i < stage.end; ++i) lowerOp(circuit.ops()[i], circuit.width(), lowered);
    for (auto& op : lowered) out.append(std::move(op));
  }
  for (const auto& f : circuit.formulas()) out.registerFormula(f);
  return out;
}

inline std::string exportCircuitText(const Circuit& circuit) {
  const Circuit lowered = lower(circuit);
  std::ostringstream os;
  os << "OPENQASM 2.0;\n";
  os << "include \"qelib1.inc\";\n";
  os << "qreg q[" << lowered.width() << "];\n";
  auto ref = [](Qubit q) { return "q[" + std::to_string(q) + "]"; };
  for (const auto& stage : lowered.stages()) {
    os << "// stage:" << stage.name << '\n';
    for (std::size_t i = stage.begin; i < stage.end; ++i) {
      const GateOp& op = lowered.ops()[i];
      switch (op.kind) {
        case GateKind::H: os << "h "; break;
        case GateKind::X: os << "x "; break;
        case GateKind::CNOT: os << "cx "; break;
        case GateKind::TOFFOLI: os << "ccx "; break;
        case GateKind::RESET: os << "reset "; break;
        case GateKind::MCX: throw Error("internal: MCX survived lowering");
      }
      for (const auto& c : op.controls) os << ref(c.qubit) << ',';
      os << ref(op.target) << ";\n";
    }
  }
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<std::size_t> parseIndex(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// "q[12]" -> 12
inline std::optional<std::size_t> parseQubitRef(std::string_view s) {
  s = trim(s);
  if (s.size() < 4 || s.substr(0, 2) != "q[" || s.back() != ']') return std::nullopt;
  return parseIndex(trim(s.substr(2, s.size() - 3)));
}

}  // namespace detail

// Parses the subset written by exportCircuitText. The header and the qreg
// declaration are optional; without qreg the width is 1 + the largest index.
inline Circuit parseCircuitText(std::string_view text) {
  using detail::trim;
  struct Line {
    std::size_t number;
    std::variant<std::string, GateOp> item;
  };
  std::vector<Line> items;
  std::optional<std::size_t> declared;
  std::size_t maxIndex = 0;
  bool anyGate = false;

  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.substr(0, 2) == "//") {
      std::string_view body = trim(line.substr(2));
      if (body.substr(0, 6) == "stage:") {
        std::string name(trim(body.substr(6)));
        if (name.empty()) throw ParseError(lineNo, "empty stage name");
        items.push_back({lineNo, name});
      }
      continue;
    }
    if (line.back() != ';') throw ParseError(lineNo, "missing ';'");
    line = trim(line.substr(0, line.size() - 1));

    std::size_t sp = 0;
    while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
    const std::string_view mnemonic = line.substr(0, sp);
    const std::string_view args = trim(line.substr(sp));

    if (mnemonic == "OPENQASM" || mnemonic == "include") continue;
    if (mnemonic == "qreg") {
      auto n = detail::parseQubitRef(args);
      if (!n) throw ParseError(lineNo, "malformed qreg declaration '" + std::string(args) + "'");
      if (declared) throw ParseError(lineNo, "second qreg declaration");
      declared = *n;
      continue;
    }

    std::size_t arity = 0;
    GateKind kind{};
    if (mnemonic == "h") kind = GateKind::H, arity = 1;
    else if (mnemonic == "x") kind = GateKind::X, arity = 1;
    else if (mnemonic == "cx") kind = GateKind::CNOT, arity = 2;
    else if (mnemonic == "ccx") kind = GateKind::TOFFOLI, arity = 3;
    else if (mnemonic == "reset") kind = GateKind::RESET, arity = 1;
    else throw ParseError(lineNo, "unknown mnemonic '" + std::string(mnemonic) + "'");

    std::vector<Qubit> qubits;
    std::size_t start = 0;
    while (start <= args.size()) {
      const std::size_t comma = args.find(',', start);
      const std::string_view tok = args.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      auto q = detail::parseQubitRef(tok);
      if (!q) throw ParseError(lineNo, "malformed qubit reference '" + std::string(trim(tok)) + "'");
      qubits.push_back(*q);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (qubits.size() != arity)
      throw ParseError(lineNo, std::string(mnemonic) + " takes " + std::to_string(arity) + " qubit(s)");

    GateOp op{kind, qubits.back(), {}};
    for (std::size_t i = 0; i + 1 < qubits.size(); ++i) op.controls.emplace_back(qubits[i]);
    for (Qubit q : qubits) maxIndex = std::max(maxIndex, q);
    anyGate = true;
    items.push_back({lineNo, std::move(op)});
  }

  const std::size_t width = declared ? *declared : (anyGate ? maxIndex + 1 : 0);
  Circuit circuit(width);
  for (auto& [number, item] : items) {
    try {
      if (auto* name = std::get_if<std::string>(&item)) circuit.beginStage(*name);
      else circuit.append(std::get<GateOp>(item));
    } catch (const InvalidArgument& e) {
      throw ParseError(number, e.what());
    }
  }
  return circuit;
}

}  // namespace qiseg
