#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// evaluation, enumeration or closure code; only the plain data types
// (Formula, Term, Signature, SignatureMorphism) are shared.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ifusion/eq.hpp"
#include "ifusion/prop.hpp"
#include "ifusion/signature.hpp"

namespace oracle {

using ifusion::Signature;
using ifusion::SignatureMorphism;
using ifusion::Symbol;

// ---- propositional ---------------------------------------------------------

using Valuation = std::map<std::string, bool>;

inline bool eval(const ifusion::prop::Formula& f, const Valuation& v) {
  using ifusion::prop::Op;
  const auto& a = f.args();
  switch (f.op()) {
    case Op::kAtom: return v.at(f.name());
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kNot: return !eval(a[0], v);
    case Op::kAnd: return eval(a[0], v) && eval(a[1], v);
    case Op::kOr: return eval(a[0], v) || eval(a[1], v);
    case Op::kImplies: return !eval(a[0], v) || eval(a[1], v);
    case Op::kIff: return eval(a[0], v) == eval(a[1], v);
  }
  return false;
}

// All valuations, in the documented order: first symbol (by name) is the
// most significant bit of the index.
inline std::vector<Valuation> valuations(const Signature& sig) {
  std::vector<std::string> names;
  for (const auto& s : sig.symbols()) names.push_back(s.name);
  std::vector<Valuation> out;
  const std::size_t n = names.size();
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
    Valuation v;
    for (std::size_t j = 0; j < n; ++j) v[names[j]] = (i >> (n - 1 - j)) & 1U;
    out.push_back(v);
  }
  return out;
}

inline Valuation reduct(const SignatureMorphism& sigma, const Valuation& v2) {
  Valuation v1;
  for (const auto& s : sigma.source().symbols()) v1[s.name] = v2.at(sigma.image(s.name));
  return v1;
}

inline bool models_all(const std::vector<ifusion::prop::Formula>& fs, const Valuation& v) {
  for (const auto& f : fs) {
    if (!eval(f, v)) return false;
  }
  return true;
}

// Bitstring over `vals`: '1' where every formula holds.
inline std::string extent_bits(const std::vector<Valuation>& vals,
                               const std::vector<ifusion::prop::Formula>& fs) {
  std::string out;
  for (const auto& v : vals) out += models_all(fs, v) ? '1' : '0';
  return out;
}

inline std::string extent_bits(const Signature& sig, const std::vector<ifusion::prop::Formula>& fs) {
  return extent_bits(valuations(sig), fs);
}

// Brute-force entailment: every valuation of `axioms` satisfies `goal`.
inline bool entails(const std::vector<Valuation>& vals,
                    const std::vector<ifusion::prop::Formula>& axioms,
                    const ifusion::prop::Formula& goal) {
  for (const auto& v : vals) {
    if (models_all(axioms, v) && !eval(goal, v)) return false;
  }
  return true;
}

inline bool entails(const Signature& sig, const std::vector<ifusion::prop::Formula>& axioms,
                    const ifusion::prop::Formula& goal) {
  return entails(valuations(sig), axioms, goal);
}

// ---- equational ------------------------------------------------------------

// Tables keyed by op name; entries indexed with the first argument most
// significant.
struct Algebra {
  int carrier = 1;
  std::map<std::string, std::vector<int>> ops;
};

inline int eval(const ifusion::eq::Term& t, const Algebra& a, const std::map<std::string, int>& env) {
  if (t.is_var()) return env.at(t.name());
  int index = 0;
  for (const auto& arg : t.args()) index = index * a.carrier + eval(arg, a, env);
  return a.ops.at(t.name()).at(index);
}

inline void term_vars(const ifusion::eq::Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) term_vars(a, out);
}

inline bool holds(const ifusion::eq::Equation& e, const Algebra& a) {
  std::set<std::string> vs;
  term_vars(e.lhs(), vs);
  term_vars(e.rhs(), vs);
  const std::vector<std::string> names(vs.begin(), vs.end());
  std::vector<int> digits(names.size(), 0);
  while (true) {
    std::map<std::string, int> env;
    for (std::size_t i = 0; i < names.size(); ++i) env[names[i]] = digits[i];
    if (eval(e.lhs(), a, env) != eval(e.rhs(), a, env)) return false;
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == a.carrier) digits[k++] = 0;
    if (k == digits.size()) return true;
  }
}

inline int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Every algebra with carrier 1..max_carrier. The order is the oracle's own;
// callers map into the library's enumeration with model_rank.
inline std::vector<Algebra> algebras(const Signature& sig, int max_carrier) {
  std::vector<Algebra> out;
  for (int c = 1; c <= max_carrier; ++c) {
    std::vector<std::pair<std::string, int>> slots;  // (op, table size)
    int total = 0;
    for (const auto& s : sig.symbols()) {
      slots.emplace_back(s.name, ipow(c, s.arity));
      total += slots.back().second;
    }
    std::vector<int> flat(total, 0);
    while (true) {
      Algebra a{c, {}};
      int pos = 0;
      for (const auto& [name, size] : slots) {
        a.ops[name] = std::vector<int>(flat.begin() + pos, flat.begin() + pos + size);
        pos += size;
      }
      out.push_back(std::move(a));
      int k = 0;
      while (k < total && ++flat[k] == c) flat[k++] = 0;
      if (k == total) break;
    }
  }
  return out;
}

inline Algebra reduct(const SignatureMorphism& sigma, const Algebra& a2) {
  Algebra a1{a2.carrier, {}};
  for (const auto& s : sigma.source().symbols()) a1.ops[s.name] = a2.ops.at(sigma.image(s.name));
  return a1;
}

inline ifusion::eq::FiniteAlgebra to_library(const Signature& sig, const Algebra& a) {
  ifusion::eq::FiniteAlgebra out;
  out.carrier = a.carrier;
  for (const auto& s : sig.symbols()) {
    const auto& t = a.ops.at(s.name);
    out.tables.emplace_back(t.begin(), t.end());
  }
  return out;
}

// ---- formal concepts -------------------------------------------------------

using Incidence = std::vector<std::vector<bool>>;  // [instance][type]

struct Concept {
  std::set<int> extent;
  std::set<int> intent;
  friend auto operator<=>(const Concept&, const Concept&) = default;
};

// All subsets of instances, kept when A'' == A.
inline std::set<Concept> concepts(const Incidence& inc, int types) {
  const int n = static_cast<int>(inc.size());
  std::set<Concept> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::set<int> a;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) a.insert(i);
    }
    std::set<int> b;
    for (int t = 0; t < types; ++t) {
      bool all = true;
      for (int i : a) all = all && inc[i][t];
      if (all) b.insert(t);
    }
    std::set<int> aa;
    for (int i = 0; i < n; ++i) {
      bool all = true;
      for (int t : b) all = all && inc[i][t];
      if (all) aa.insert(i);
    }
    if (aa == a) out.insert(Concept{a, b});
  }
  return out;
}

// ---- random inputs ---------------------------------------------------------

inline Signature atoms(const std::string& name, const std::vector<std::string>& names) {
  std::vector<Symbol> syms;
  for (const auto& n : names) syms.push_back(Symbol{n, 0});
  return Signature(name, syms);
}

inline Signature random_prop_signature(std::mt19937_64& rng, const std::string& name,
                                       const std::string& prefix, int min_atoms, int max_atoms) {
  std::uniform_int_distribution<int> size(min_atoms, max_atoms);
  std::vector<std::string> names;
  const int n = size(rng);
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return atoms(name, names);
}

// Random total map, respecting arities; nullopt when some arity has no image.
inline std::optional<SignatureMorphism> random_morphism(std::mt19937_64& rng, const Signature& src,
                                                        const Signature& tgt,
                                                        const std::string& name = "sigma") {
  std::map<std::string, std::string> map;
  for (const auto& s : src.symbols()) {
    std::vector<std::string> candidates;
    for (const auto& t : tgt.symbols()) {
      if (t.arity == s.arity) candidates.push_back(t.name);
    }
    if (candidates.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    map[s.name] = candidates[pick(rng)];
  }
  return SignatureMorphism::make(src, tgt, map, name);
}

inline ifusion::prop::Formula random_formula(std::mt19937_64& rng, const Signature& sig, int depth) {
  using ifusion::prop::Formula;
  using ifusion::prop::Op;
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 0 : 5);
  const int k = pick(rng);
  if (k == 0) {
    std::uniform_int_distribution<std::size_t> a(0, sig.size() - 1);
    return Formula::atom(sig[a(rng)].name);
  }
  if (k == 1) return Formula::negation(random_formula(rng, sig, depth - 1));
  static constexpr Op kOps[] = {Op::kAnd, Op::kOr, Op::kImplies, Op::kIff};
  return Formula::binary(kOps[k - 2], random_formula(rng, sig, depth - 1),
                         random_formula(rng, sig, depth - 1));
}

}  // namespace oracle
