#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ifusion/error.hpp"
#include "ifusion/institution.hpp"
#include "ifusion/sexpr.hpp"
#include "ifusion/signature.hpp"

namespace ifusion {
namespace prop {

enum class Op : std::uint8_t { kAtom, kTrue, kFalse, kNot, kAnd, kOr, kImplies, kIff };

inline std::string_view op_name(Op op) {
  switch (op) {
    case Op::kAtom: return "atom";
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kNot: return "not";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kImplies: return "implies";
    case Op::kIff: return "iff";
  }
  return "?";
}

inline constexpr Op kBinaryOps[] = {Op::kAnd, Op::kOr, Op::kImplies, Op::kIff};

// Immutable propositional formula. Subtrees are shared, so copies are cheap.
class Formula {
 public:
  static Formula atom(std::string name) { return Formula(Op::kAtom, std::move(name), {}); }
  static Formula truth() { return Formula(Op::kTrue, {}, {}); }
  static Formula falsity() { return Formula(Op::kFalse, {}, {}); }
  static Formula negation(Formula f) { return Formula(Op::kNot, {}, {std::move(f)}); }
  static Formula binary(Op op, Formula a, Formula b) {
    return Formula(op, {}, {std::move(a), std::move(b)});
  }

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  const std::vector<Formula>& args() const { return node_->args; }
  int depth() const { return node_->depth; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.op() <=> b.op(); c != 0) return c;
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    const auto& x = a.args();
    const auto& y = b.args();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (auto c = x[i] <=> y[i]; c != 0) return c;
    }
    return x.size() <=> y.size();
  }

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Formula> args;
    int depth;
  };

  Formula(Op op, std::string name, std::vector<Formula> args) {
    int d = 0;
    for (const auto& a : args) d = std::max(d, a.depth() + 1);
    node_ = std::make_shared<const Node>(Node{op, std::move(name), std::move(args), d});
  }

  std::shared_ptr<const Node> node_;
};

// Total truth assignment, aligned with the signature's (sorted) symbols.
struct Assignment {
  std::vector<std::uint8_t> values;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

inline std::string print(const Formula& f) {
  switch (f.op()) {
    case Op::kAtom: return f.name();
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    default: break;
  }
  std::string out = "(";
  out += op_name(f.op());
  for (const auto& a : f.args()) out += ' ' + print(a);
  return out + ")";
}

inline bool is_reserved(std::string_view name) {
  return name == "true" || name == "false";
}

inline bool eval(const Signature& sig, const Assignment& m, const Formula& f) {
  switch (f.op()) {
    case Op::kAtom: {
      auto i = sig.find(f.name());
      if (!i) {
        fail(ErrorKind::kSymbolNotInSignature,
             "atom '" + f.name() + "' is not in signature '" + sig.name() + "'");
      }
      return m.values[*i] != 0;
    }
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kNot: return !eval(sig, m, f.args()[0]);
    case Op::kAnd: return eval(sig, m, f.args()[0]) && eval(sig, m, f.args()[1]);
    case Op::kOr: return eval(sig, m, f.args()[0]) || eval(sig, m, f.args()[1]);
    case Op::kImplies: return !eval(sig, m, f.args()[0]) || eval(sig, m, f.args()[1]);
    case Op::kIff: return eval(sig, m, f.args()[0]) == eval(sig, m, f.args()[1]);
  }
  return false;
}

// Reads a formula, checking every atom against `sig`.
inline Formula parse(const SExpr& e, const Signature& sig) {
  if (e.is_atom()) {
    if (e.atom == "true") return Formula::truth();
    if (e.atom == "false") return Formula::falsity();
    if (!sig.contains(e.atom)) {
      fail(ErrorKind::kSemantic,
           "undeclared atom '" + e.atom + "' (signature '" + sig.name() + "')", e.span);
    }
    return Formula::atom(e.atom);
  }
  if (e.items.empty() || !e.items[0].is_atom()) {
    fail(ErrorKind::kParse, "expected a connective", e.span);
  }
  const std::string& head = e.items[0].atom;
  const std::size_t argc = e.items.size() - 1;
  if (head == "not") {
    if (argc != 1) fail(ErrorKind::kParse, "'not' takes one argument", e.span);
    return Formula::negation(parse(e.items[1], sig));
  }
  for (Op op : kBinaryOps) {
    if (head == op_name(op)) {
      if (argc != 2) {
        fail(ErrorKind::kParse, "'" + head + "' takes two arguments", e.span);
      }
      return Formula::binary(op, parse(e.items[1], sig), parse(e.items[2], sig));
    }
  }
  fail(ErrorKind::kParse, "unknown connective '" + head + "'", e.items[0].span);
}

namespace detail {

inline Extent eval_bulk(const Signature& sig, const std::vector<Extent>& columns,
                        std::size_t n, const Formula& f) {
  switch (f.op()) {
    case Op::kAtom: {
      auto i = sig.find(f.name());
      if (!i) {
        fail(ErrorKind::kSymbolNotInSignature,
             "atom '" + f.name() + "' is not in signature '" + sig.name() + "'");
      }
      return columns[*i];
    }
    case Op::kTrue: {
      Extent e(n);
      e.set();
      return e;
    }
    case Op::kFalse: return Extent(n);
    case Op::kNot: return ~eval_bulk(sig, columns, n, f.args()[0]);
    default: break;
  }
  Extent a = eval_bulk(sig, columns, n, f.args()[0]);
  const Extent b = eval_bulk(sig, columns, n, f.args()[1]);
  switch (f.op()) {
    case Op::kAnd: a &= b; break;
    case Op::kOr: a |= b; break;
    case Op::kImplies: a.flip(); a |= b; break;
    case Op::kIff: a ^= b; a.flip(); break;
    default: break;
  }
  return a;
}

// Same as eval_bulk for at most 64 models, without allocating.
inline std::uint64_t eval_word(const Signature& sig, const std::vector<std::uint64_t>& columns,
                               std::uint64_t all, const Formula& f) {
  switch (f.op()) {
    case Op::kAtom: {
      auto i = sig.find(f.name());
      if (!i) {
        fail(ErrorKind::kSymbolNotInSignature,
             "atom '" + f.name() + "' is not in signature '" + sig.name() + "'");
      }
      return columns[*i];
    }
    case Op::kTrue: return all;
    case Op::kFalse: return 0;
    case Op::kNot: return ~eval_word(sig, columns, all, f.args()[0]) & all;
    default: break;
  }
  const std::uint64_t a = eval_word(sig, columns, all, f.args()[0]);
  const std::uint64_t b = eval_word(sig, columns, all, f.args()[1]);
  switch (f.op()) {
    case Op::kAnd: return a & b;
    case Op::kOr: return a | b;
    case Op::kImplies: return (~a | b) & all;
    case Op::kIff: return ~(a ^ b) & all;
    default: return 0;
  }
}

}  // namespace detail
}  // namespace prop

// Classical propositional logic. Signatures are finite atom sets, models are
// truth assignments.
struct Prop {
  using Sentence = prop::Formula;
  using Model = prop::Assignment;

  static constexpr std::string_view kName = "prop";

  static void check_signature(const Signature& sig) {
    for (const auto& s : sig.symbols()) {
      if (s.arity != 0) {
        fail(ErrorKind::kSemantic, "propositional symbol '" + s.name + "' has arity " +
                                       std::to_string(s.arity));
      }
      if (prop::is_reserved(s.name)) {
        fail(ErrorKind::kSemantic, "'" + s.name + "' is reserved");
      }
    }
  }

  static void check_sentence(const Signature& sig, const Sentence& f) {
    if (f.op() == prop::Op::kAtom && !sig.contains(f.name())) {
      fail(ErrorKind::kSymbolNotInSignature,
           "atom '" + f.name() + "' is not in signature '" + sig.name() + "'");
    }
    for (const auto& a : f.args()) check_sentence(sig, a);
  }

  static Sentence translate(const SignatureMorphism& sigma, const Sentence& f) {
    using prop::Formula;
    using prop::Op;
    switch (f.op()) {
      case Op::kAtom: return Formula::atom(sigma.image(f.name()));
      case Op::kTrue:
      case Op::kFalse: return f;
      case Op::kNot: return Formula::negation(translate(sigma, f.args()[0]));
      default:
        return Formula::binary(f.op(), translate(sigma, f.args()[0]),
                               translate(sigma, f.args()[1]));
    }
  }

  static Model reduct(const SignatureMorphism& sigma, const Model& m) {
    Model out;
    out.values.resize(sigma.source().size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] = m.values.at(sigma.image_index(i));
    }
    return out;
  }

  static bool satisfies(const Signature& sig, const Model& m, const Sentence& f) {
    return prop::eval(sig, m, f);
  }

  static std::uint64_t model_count(const Signature& sig, const Bounds& bounds) {
    const auto n = sig.size();
    if (n > static_cast<std::size_t>(bounds.max_atoms) || n >= 63 ||
        (std::uint64_t{1} << n) > bounds.max_models) {
      fail(ErrorKind::kResourceLimit,
           "signature '" + sig.name() + "' has " + std::to_string(n) +
               " atoms; limit is " + std::to_string(bounds.max_atoms));
    }
    return std::uint64_t{1} << n;
  }

  // The first symbol is the most significant bit of the index.
  static Model model_at(const Signature& sig, const Bounds&, std::uint64_t index) {
    const auto n = sig.size();
    Model m;
    m.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) m.values[j] = (index >> (n - 1 - j)) & 1U;
    return m;
  }

  static std::uint64_t model_rank(const Signature& sig, const Bounds&, const Model& m) {
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < sig.size(); ++j) r = (r << 1) | (m.values[j] & 1U);
    return r;
  }

  // Atoms, true and false at depth 0; each further level applies every
  // connective to formulas of lower depth.
  static std::vector<Sentence> generate_universe(const Signature& sig, int depth) {
    using prop::Formula;
    std::vector<Formula> all;
    for (const auto& s : sig.symbols()) all.push_back(Formula::atom(s.name));
    all.push_back(Formula::truth());
    all.push_back(Formula::falsity());
    std::size_t level_begin = 0;
    for (int d = 1; d <= depth; ++d) {
      const std::size_t prev_end = all.size();
      std::vector<Formula> next;
      for (std::size_t i = level_begin; i < prev_end; ++i) {
        next.push_back(Formula::negation(all[i]));
      }
      for (prop::Op op : prop::kBinaryOps) {
        for (std::size_t i = 0; i < prev_end; ++i) {
          for (std::size_t j = 0; j < prev_end; ++j) {
            if (i < level_begin && j < level_begin) continue;
            next.push_back(Formula::binary(op, all[i], all[j]));
          }
        }
      }
      level_begin = prev_end;
      all.insert(all.end(), next.begin(), next.end());
    }
    return all;
  }

  // Bit-parallel evaluation: one bitset operation per connective.
  static std::vector<Extent> truth_table(const Signature& sig,
                                         std::span<const Model> models,
                                         std::span<const Sentence> sentences) {
    const std::size_t n = models.size();
    std::vector<Extent> out;
    out.reserve(sentences.size());
    if (n <= 64) {
      std::vector<std::uint64_t> words(sig.size(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < sig.size(); ++j) {
          if (models[i].values[j]) words[j] |= std::uint64_t{1} << i;
        }
      }
      const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
      for (const auto& f : sentences) {
        out.emplace_back(n, prop::detail::eval_word(sig, words, all, f));
      }
      return out;
    }
    std::vector<Extent> columns(sig.size(), Extent(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < sig.size(); ++j) {
        if (models[i].values[j]) columns[j].set(i);
      }
    }
    for (const auto& f : sentences) out.push_back(prop::detail::eval_bulk(sig, columns, n, f));
    return out;
  }

  static std::string print(const Sentence& f) { return prop::print(f); }

  static std::string print_model(const Signature& sig, const Model& m) {
    std::string out;
    for (std::size_t j = 0; j < sig.size(); ++j) {
      if (j) out += ' ';
      out += sig[j].name + '=' + (m.values[j] ? '1' : '0');
    }
    return out;
  }

  static Sentence parse(const SExpr& e, const Signature& sig,
                        const std::vector<std::string>& /*vars*/ = {}) {
    return prop::parse(e, sig);
  }
};

static_assert(Institution<Prop>);

}  // namespace ifusion
