#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "ifusion/ifusion.hpp"
#include "support/oracle.hpp"

namespace th {

using namespace ifusion;

inline prop::Formula P(const std::string& text, const Signature& sig) {
  return Prop::parse(parse_sexpr(text), sig);
}

inline eq::Equation E(const std::string& text, const Signature& sig,
                      const std::vector<std::string>& vars = {"x", "y", "z"}) {
  return Eq::parse(parse_sexpr(text), sig, vars);
}

inline Signature ops(const std::string& name, const std::vector<std::pair<std::string, int>>& syms) {
  std::vector<Symbol> out;
  for (const auto& [n, a] : syms) out.push_back(Symbol{n, a});
  return Signature(name, out);
}

inline Extent bits(const std::string& s) {
  Extent e(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') e.set(i);
  }
  return e;
}

// carrier 2, f = XOR
inline eq::FiniteAlgebra xor_algebra() { return eq::FiniteAlgebra{2, {{0, 1, 1, 0}}}; }

inline std::filesystem::path source_root() { return IFUSION_SOURCE_DIR; }

template <Institution I>
Workspace<I> corpus(const std::string& rel) {
  return std::get<Workspace<I>>(load_workspace((source_root() / rel).string()));
}

template <Institution I>
TheoryDiagram<I> corpus_diagram(const std::string& rel) {
  const auto ws = corpus<I>(rel);
  return resolve_diagram(ws, ws.diagrams.front());
}

}  // namespace th
