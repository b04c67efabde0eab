#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifusion/error.hpp"

namespace ifusion {

// A named symbol. Proposition atoms have arity 0; equational operation
// symbols carry their rank.
struct Symbol {
  std::string name;
  int arity = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// Finite symbol inventory, kept sorted by name so that two signatures with
// the same symbols compare equal regardless of declaration order.
class Signature {
 public:
  Signature() = default;
  Signature(std::string name, std::vector<Symbol> symbols)
      : name_(std::move(name)), symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end(),
              [](const Symbol& a, const Symbol& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < symbols_.size(); ++i) {
      if (symbols_[i - 1].name == symbols_[i].name) {
        fail(ErrorKind::kSemantic, "duplicate symbol '" + symbols_[i].name +
                                       "' in signature '" + name_ + "'");
      }
    }
    for (const auto& s : symbols_) {
      if (s.arity < 0) {
        fail(ErrorKind::kSemantic, "negative arity for '" + s.name + "'");
      }
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = std::lower_bound(
        symbols_.begin(), symbols_.end(), name,
        [](const Symbol& s, const std::string& n) { return s.name < n; });
    if (it == symbols_.end() || it->name != name) return std::nullopt;
    return static_cast<std::size_t>(it - symbols_.begin());
  }

  bool contains(const std::string& name) const { return find(name).has_value(); }

  // Same symbols, ignoring the signature's own name.
  bool same_symbols(const Signature& other) const {
    return symbols_ == other.symbols_;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::string name_;
  std::vector<Symbol> symbols_;
};

// Total, arity-preserving symbol map. Stored as a source-index ->
// target-index table.
class SignatureMorphism {
 public:
  SignatureMorphism() = default;

  static SignatureMorphism make(Signature source, Signature target,
                                const std::map<std::string, std::string>& map,
                                std::string name = {}) {
    std::vector<std::size_t> table(source.size());
    for (const auto& [from, to] : map) {
      if (!source.contains(from)) {
        fail(ErrorKind::kSymbolNotInSignature,
             "morphism maps '" + from + "' which is not in source signature '" +
                 source.name() + "'");
      }
    }
    for (std::size_t i = 0; i < source.size(); ++i) {
      const auto& sym = source[i];
      auto it = map.find(sym.name);
      if (it == map.end()) {
        fail(ErrorKind::kSemantic, "morphism is not total: no image for '" +
                                       sym.name + "'");
      }
      auto j = target.find(it->second);
      if (!j) {
        fail(ErrorKind::kSymbolNotInSignature,
             "image '" + it->second + "' is not in target signature '" +
                 target.name() + "'");
      }
      if (target[*j].arity != sym.arity) {
        fail(ErrorKind::kArityMismatch,
             "arity mismatch: '" + sym.name + "' has arity " +
                 std::to_string(sym.arity) + " but '" + target[*j].name +
                 "' has arity " + std::to_string(target[*j].arity));
      }
      table[i] = *j;
    }
    SignatureMorphism m;
    m.name_ = std::move(name);
    m.source_ = std::move(source);
    m.target_ = std::move(target);
    m.table_ = std::move(table);
    return m;
  }

  static SignatureMorphism identity(const Signature& sig) {
    std::map<std::string, std::string> map;
    for (const auto& s : sig.symbols()) map.emplace(s.name, s.name);
    return make(sig, sig, map, "id");
  }

  // Inclusion of `source` into a signature containing all of its symbols.
  static SignatureMorphism inclusion(const Signature& source,
                                     const Signature& target) {
    std::map<std::string, std::string> map;
    for (const auto& s : source.symbols()) map.emplace(s.name, s.name);
    return make(source, target, map, "incl");
  }

  const std::string& name() const { return name_; }
  const Signature& source() const { return source_; }
  const Signature& target() const { return target_; }

  std::size_t image_index(std::size_t source_index) const {
    return table_[source_index];
  }

  // Throws kSymbolNotInSignature when `symbol` is not a source symbol.
  const std::string& image(const std::string& symbol) const {
    auto i = source_.find(symbol);
    if (!i) {
      fail(ErrorKind::kSymbolNotInSignature,
           "symbol '" + symbol + "' is not in source signature '" +
               source_.name() + "'");
    }
    return target_[table_[*i]].name;
  }

  std::map<std::string, std::string> as_map() const {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < source_.size(); ++i) {
      out.emplace(source_[i].name, target_[table_[i]].name);
    }
    return out;
  }

  // Diagrammatic order: first *this, then `next`.
  SignatureMorphism then(const SignatureMorphism& next) const {
    if (!(target_ == next.source_)) {
      fail(ErrorKind::kSemantic, "morphisms are not composable: target '" +
                                     target_.name() + "' differs from source '" +
                                     next.source_.name() + "'");
    }
    SignatureMorphism m;
    m.name_ = name_.empty() || next.name_.empty() ? std::string{}
                                                  : name_ + ";" + next.name_;
    m.source_ = source_;
    m.target_ = next.target_;
    m.table_.resize(table_.size());
    for (std::size_t i = 0; i < table_.size(); ++i) {
      m.table_[i] = next.table_[table_[i]];
    }
    return m;
  }

  // Structural equality; the morphism's own name is ignored.
  friend bool operator==(const SignatureMorphism& a, const SignatureMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ &&
           a.table_ == b.table_;
  }

 private:
  std::string name_;
  Signature source_;
  Signature target_;
  std::vector<std::size_t> table_;
};

}  // namespace ifusion
