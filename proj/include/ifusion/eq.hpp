#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ifusion/error.hpp"
#include "ifusion/institution.hpp"
#include "ifusion/sexpr.hpp"
#include "ifusion/signature.hpp"

namespace ifusion {
namespace eq {

// Immutable first-order term over operation symbols and variables.
class Term {
 public:
  static Term var(std::string name) { return Term(true, std::move(name), {}); }
  static Term app(std::string op, std::vector<Term> args = {}) {
    return Term(false, std::move(op), std::move(args));
  }

  bool is_var() const { return node_->is_var; }
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  int depth() const { return node_->depth; }

  void collect_vars(std::set<std::string>& out) const {
    if (is_var()) {
      out.insert(name());
      return;
    }
    for (const auto& a : args()) a.collect_vars(out);
  }

  friend bool operator==(const Term& a, const Term& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    // Variables sort before applications.
    if (a.is_var() != b.is_var()) {
      return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
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
    bool is_var;
    std::string name;
    std::vector<Term> args;
    int depth;
  };

  Term(bool is_var, std::string name, std::vector<Term> args) {
    int d = 0;
    for (const auto& a : args) d = std::max(d, a.depth() + 1);
    node_ = std::make_shared<const Node>(Node{is_var, std::move(name), std::move(args), d});
  }

  std::shared_ptr<const Node> node_;
};

// lhs = rhs, universally quantified over the variables that occur in it.
class Equation {
 public:
  Equation(Term lhs, Term rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    std::set<std::string> vs;
    lhs_.collect_vars(vs);
    rhs_.collect_vars(vs);
    vars_.assign(vs.begin(), vs.end());
  }

  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }
  const std::vector<std::string>& vars() const { return vars_; }

  friend bool operator==(const Equation& a, const Equation& b) {
    return a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_;
  }
  friend std::strong_ordering operator<=>(const Equation& a, const Equation& b) {
    if (auto c = a.lhs_ <=> b.lhs_; c != 0) return c;
    return a.rhs_ <=> b.rhs_;
  }

 private:
  Term lhs_;
  Term rhs_;
  std::vector<std::string> vars_;
};

// Carrier {0..carrier-1}; one table per signature symbol (sorted order).
// A table for an op of arity a has carrier^a entries, indexed with the first
// argument most significant.
struct FiniteAlgebra {
  int carrier = 1;
  std::vector<std::vector<std::uint8_t>> tables;

  friend auto operator<=>(const FiniteAlgebra&, const FiniteAlgebra&) = default;
};

using Environment = std::map<std::string, int>;

inline std::uint64_t ipow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

inline std::string print(const Term& t) {
  if (t.is_var() || t.args().empty()) return t.name();
  std::string out = "(" + t.name();
  for (const auto& a : t.args()) out += ' ' + print(a);
  return out + ")";
}

inline std::string print(const Equation& e) {
  return "(= " + print(e.lhs()) + ' ' + print(e.rhs()) + ")";
}

inline int eval_term(const Signature& sig, const FiniteAlgebra& alg,
                     const Environment& env, const Term& t) {
  if (t.is_var()) {
    auto it = env.find(t.name());
    if (it == env.end()) {
      fail(ErrorKind::kSemantic, "unbound variable '" + t.name() + "'");
    }
    return it->second;
  }
  auto i = sig.find(t.name());
  if (!i) {
    fail(ErrorKind::kSymbolNotInSignature,
         "operation '" + t.name() + "' is not in signature '" + sig.name() + "'");
  }
  std::size_t index = 0;
  for (const auto& a : t.args()) {
    index = index * static_cast<std::size_t>(alg.carrier) +
            static_cast<std::size_t>(eval_term(sig, alg, env, a));
  }
  return alg.tables[*i][index];
}

// True iff both sides agree under every environment.
inline bool satisfies_equation(const Signature& sig, const FiniteAlgebra& alg,
                               const Equation& eq,
                               std::uint64_t max_environments = Bounds{}.max_environments) {
  const auto& vars = eq.vars();
  const std::uint64_t envs = ipow(static_cast<std::uint64_t>(alg.carrier), vars.size(),
                                  max_environments);
  if (envs > max_environments) {
    fail(ErrorKind::kResourceLimit, "too many environments for " + print(eq));
  }
  Environment env;
  for (std::uint64_t k = 0; k < envs; ++k) {
    std::uint64_t rest = k;
    for (std::size_t v = vars.size(); v-- > 0;) {
      env[vars[v]] = static_cast<int>(rest % static_cast<std::uint64_t>(alg.carrier));
      rest /= static_cast<std::uint64_t>(alg.carrier);
    }
    if (eval_term(sig, alg, env, eq.lhs()) != eval_term(sig, alg, env, eq.rhs())) {
      return false;
    }
  }
  return true;
}

// Algebras over a carrier of exactly `carrier` elements, for one signature.
inline std::uint64_t algebra_count(const Signature& sig, int carrier, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (const auto& s : sig.symbols()) {
    const std::uint64_t entries = ipow(static_cast<std::uint64_t>(carrier),
                                       static_cast<std::uint64_t>(s.arity), cap);
    if (entries > cap) return cap + 1;
    const std::uint64_t tables = ipow(static_cast<std::uint64_t>(carrier), entries, cap);
    if (tables > cap || (tables != 0 && total > cap / tables)) return cap + 1;
    total *= tables;
  }
  return total;
}

inline FiniteAlgebra algebra_at(const Signature& sig, int carrier, std::uint64_t index) {
  FiniteAlgebra alg;
  alg.carrier = carrier;
  alg.tables.resize(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    alg.tables[i].assign(
        ipow(static_cast<std::uint64_t>(carrier), static_cast<std::uint64_t>(sig[i].arity),
             ~std::uint64_t{0}),
        0);
  }
  const auto c = static_cast<std::uint64_t>(carrier);
  for (std::size_t i = sig.size(); i-- > 0;) {
    auto& table = alg.tables[i];
    for (std::size_t k = table.size(); k-- > 0;) {
      table[k] = static_cast<std::uint8_t>(index % c);
      index /= c;
    }
  }
  return alg;
}

inline std::vector<FiniteAlgebra> enumerate_algebras(const Signature& sig, int carrier,
                                                     std::uint64_t cap = Bounds{}.max_models) {
  const auto n = algebra_count(sig, carrier, cap);
  if (n > cap) {
    fail(ErrorKind::kResourceLimit, "too many algebras of size " + std::to_string(carrier));
  }
  std::vector<FiniteAlgebra> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(algebra_at(sig, carrier, i));
  return out;
}

inline Term parse_term(const SExpr& e, const Signature& sig,
                       const std::vector<std::string>& vars) {
  if (e.is_atom()) {
    if (std::find(vars.begin(), vars.end(), e.atom) != vars.end()) return Term::var(e.atom);
    auto i = sig.find(e.atom);
    if (!i) {
      fail(ErrorKind::kSemantic,
           "undeclared symbol '" + e.atom + "' (signature '" + sig.name() + "')", e.span);
    }
    if (sig[*i].arity != 0) {
      fail(ErrorKind::kSemantic,
           "arity violation: '" + e.atom + "' expects " + std::to_string(sig[*i].arity) +
               " arguments, got 0",
           e.span);
    }
    return Term::app(e.atom);
  }
  if (e.items.empty() || !e.items[0].is_atom()) {
    fail(ErrorKind::kParse, "expected an operation symbol", e.span);
  }
  const std::string& head = e.items[0].atom;
  auto i = sig.find(head);
  if (!i) {
    fail(ErrorKind::kSemantic,
         "undeclared symbol '" + head + "' (signature '" + sig.name() + "')",
         e.items[0].span);
  }
  const int argc = static_cast<int>(e.items.size()) - 1;
  if (sig[*i].arity != argc) {
    fail(ErrorKind::kSemantic,
         "arity violation: '" + head + "' expects " + std::to_string(sig[*i].arity) +
             " arguments, got " + std::to_string(argc),
         e.span);
  }
  std::vector<Term> args;
  for (std::size_t k = 1; k < e.items.size(); ++k) {
    args.push_back(parse_term(e.items[k], sig, vars));
  }
  return Term::app(head, std::move(args));
}

inline Equation parse(const SExpr& e, const Signature& sig,
                      const std::vector<std::string>& vars) {
  if (!e.is_list || e.items.size() != 3 || !e.items[0].is_atom() || e.items[0].atom != "=") {
    fail(ErrorKind::kParse, "expected an equation (= lhs rhs)", e.span);
  }
  return Equation(parse_term(e.items[1], sig, vars), parse_term(e.items[2], sig, vars));
}

namespace detail {

// Terms of a sentence batch, interned bottom-up so that each distinct
// subterm is evaluated once per environment.
struct TermDag {
  struct Node {
    int var = -1;     // variable index, or -1 for an application
    std::size_t op = 0;
    std::vector<int> args;
  };
  std::vector<Node> nodes;
  std::map<Term, int> ids;
  std::vector<std::string> vars;

  int intern(const Signature& sig, const Term& t) {
    if (auto it = ids.find(t); it != ids.end()) return it->second;
    Node n;
    if (t.is_var()) {
      auto v = std::find(vars.begin(), vars.end(), t.name());
      n.var = static_cast<int>(v - vars.begin());
      if (v == vars.end()) vars.push_back(t.name());
    } else {
      auto i = sig.find(t.name());
      if (!i) {
        fail(ErrorKind::kSymbolNotInSignature,
             "operation '" + t.name() + "' is not in signature '" + sig.name() + "'");
      }
      n.op = *i;
      for (const auto& a : t.args()) n.args.push_back(intern(sig, a));
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    ids.emplace(t, id);
    return id;
  }
};

}  // namespace detail
}  // namespace eq

// Unsorted equational logic. Models are finite algebras with carriers of size
// 1..max_carrier, so entailment is relative to that bounded model class.
struct Eq {
  using Sentence = eq::Equation;
  using Model = eq::FiniteAlgebra;

  static constexpr std::string_view kName = "eq";

  static void check_signature(const Signature&) {}

  static void check_term(const Signature& sig, const eq::Term& t) {
    if (t.is_var()) return;
    auto i = sig.find(t.name());
    if (!i) {
      fail(ErrorKind::kSymbolNotInSignature,
           "operation '" + t.name() + "' is not in signature '" + sig.name() + "'");
    }
    if (sig[*i].arity != static_cast<int>(t.args().size())) {
      fail(ErrorKind::kArityMismatch, "arity violation at '" + t.name() + "'");
    }
    for (const auto& a : t.args()) check_term(sig, a);
  }

  static void check_sentence(const Signature& sig, const Sentence& e) {
    check_term(sig, e.lhs());
    check_term(sig, e.rhs());
  }

  static eq::Term translate_term(const SignatureMorphism& sigma, const eq::Term& t) {
    if (t.is_var()) return t;
    std::vector<eq::Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(translate_term(sigma, a));
    return eq::Term::app(sigma.image(t.name()), std::move(args));
  }

  static Sentence translate(const SignatureMorphism& sigma, const Sentence& e) {
    return Sentence(translate_term(sigma, e.lhs()), translate_term(sigma, e.rhs()));
  }

  // Same carrier; each source op reads the table of its image.
  static Model reduct(const SignatureMorphism& sigma, const Model& m) {
    Model out;
    out.carrier = m.carrier;
    out.tables.resize(sigma.source().size());
    for (std::size_t i = 0; i < out.tables.size(); ++i) {
      out.tables[i] = m.tables.at(sigma.image_index(i));
    }
    return out;
  }

  static bool satisfies(const Signature& sig, const Model& m, const Sentence& e) {
    return eq::satisfies_equation(sig, m, e);
  }

  static std::uint64_t model_count(const Signature& sig, const Bounds& bounds) {
    std::uint64_t total = 0;
    for (int c = 1; c <= bounds.max_carrier; ++c) {
      const auto n = eq::algebra_count(sig, c, bounds.max_models);
      total += n;
      if (n > bounds.max_models || total > bounds.max_models) {
        fail(ErrorKind::kResourceLimit,
             "signature '" + sig.name() + "' has more than " +
                 std::to_string(bounds.max_models) + " algebras with carrier <= " +
                 std::to_string(bounds.max_carrier));
      }
    }
    return total;
  }

  // Carrier size ascending, then table contents in mixed radix.
  static Model model_at(const Signature& sig, const Bounds& bounds, std::uint64_t index) {
    for (int c = 1; c <= bounds.max_carrier; ++c) {
      const auto n = eq::algebra_count(sig, c, bounds.max_models);
      if (index < n) return eq::algebra_at(sig, c, index);
      index -= n;
    }
    fail(ErrorKind::kSemantic, "model index out of range");
  }

  static std::uint64_t model_rank(const Signature& sig, const Bounds& bounds, const Model& m) {
    std::uint64_t offset = 0;
    for (int c = 1; c < m.carrier; ++c) offset += eq::algebra_count(sig, c, bounds.max_models);
    std::uint64_t r = 0;
    for (const auto& table : m.tables) {
      for (auto v : table) r = r * static_cast<std::uint64_t>(m.carrier) + v;
    }
    return offset + r;
  }

  static std::vector<std::string> universe_vars(const Signature& sig) {
    static const char* const kPool[] = {"x", "y", "z", "u", "v", "w", "x1", "y1", "z1"};
    std::vector<std::string> out;
    for (const char* v : kPool) {
      if (!sig.contains(v)) out.emplace_back(v);
      if (out.size() == 2) break;
    }
    return out;
  }

  // All equations between terms of depth <= `depth` over two variables.
  static std::vector<Sentence> generate_universe(const Signature& sig, int depth) {
    using eq::Term;
    std::vector<Term> terms;
    for (const auto& v : universe_vars(sig)) terms.push_back(Term::var(v));
    for (const auto& s : sig.symbols()) {
      if (s.arity == 0) terms.push_back(Term::app(s.name));
    }
    std::size_t level_begin = 0;
    for (int d = 1; d <= depth; ++d) {
      const std::size_t prev_end = terms.size();
      std::vector<Term> next;
      for (const auto& s : sig.symbols()) {
        if (s.arity == 0) continue;
        std::vector<std::size_t> pick(static_cast<std::size_t>(s.arity), 0);
        for (;;) {
          bool fresh = false;
          for (auto p : pick) fresh = fresh || p >= level_begin;
          if (fresh) {
            std::vector<Term> args;
            for (auto p : pick) args.push_back(terms[p]);
            next.push_back(Term::app(s.name, std::move(args)));
          }
          std::size_t k = pick.size();
          while (k > 0 && ++pick[k - 1] == prev_end) pick[--k] = 0;
          if (k == 0) break;
        }
      }
      level_begin = prev_end;
      terms.insert(terms.end(), next.begin(), next.end());
    }
    std::vector<Sentence> out;
    out.reserve(terms.size() * terms.size());
    for (const auto& l : terms) {
      for (const auto& r : terms) out.emplace_back(l, r);
    }
    return out;
  }

  static std::vector<Extent> truth_table(const Signature& sig, std::span<const Model> models,
                                         std::span<const Sentence> sentences) {
    eq::detail::TermDag dag;
    std::vector<std::pair<int, int>> sides;
    sides.reserve(sentences.size());
    for (const auto& e : sentences) {
      sides.emplace_back(dag.intern(sig, e.lhs()), dag.intern(sig, e.rhs()));
    }
    std::vector<Extent> out(sentences.size(), Extent(models.size()));
    std::vector<int> value(dag.nodes.size());
    std::vector<std::uint8_t> holds(sentences.size());
    std::vector<int> env(dag.vars.size());
    const std::uint64_t max_env = Bounds{}.max_environments;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto& alg = models[i];
      const auto c = static_cast<std::uint64_t>(alg.carrier);
      const std::uint64_t envs = eq::ipow(c, dag.vars.size(), max_env);
      if (envs > max_env) fail(ErrorKind::kResourceLimit, "too many environments");
      std::fill(holds.begin(), holds.end(), 1);
      for (std::uint64_t k = 0; k < envs; ++k) {
        std::uint64_t rest = k;
        for (std::size_t v = env.size(); v-- > 0;) {
          env[v] = static_cast<int>(rest % c);
          rest /= c;
        }
        for (std::size_t n = 0; n < dag.nodes.size(); ++n) {
          const auto& node = dag.nodes[n];
          if (node.var >= 0) {
            value[n] = env[static_cast<std::size_t>(node.var)];
            continue;
          }
          std::size_t index = 0;
          for (int a : node.args) index = index * c + static_cast<std::size_t>(value[a]);
          value[n] = alg.tables[node.op][index];
        }
        for (std::size_t s = 0; s < sides.size(); ++s) {
          if (value[sides[s].first] != value[sides[s].second]) holds[s] = 0;
        }
      }
      for (std::size_t s = 0; s < sides.size(); ++s) {
        if (holds[s]) out[s].set(i);
      }
    }
    return out;
  }

  static std::string print(const Sentence& e) { return eq::print(e); }

  static std::string print_model(const Signature& sig, const Model& m) {
    std::string out = "carrier=" + std::to_string(m.carrier);
    for (std::size_t i = 0; i < sig.size(); ++i) {
      out += ' ' + sig[i].name + '=';
      if (sig[i].arity == 0) {
        out += std::to_string(m.tables[i][0]);
        continue;
      }
      out += '[';
      for (std::size_t k = 0; k < m.tables[i].size(); ++k) {
        if (k) out += ',';
        out += std::to_string(m.tables[i][k]);
      }
      out += ']';
    }
    return out;
  }

  static Sentence parse(const SExpr& e, const Signature& sig,
                        const std::vector<std::string>& vars) {
    return eq::parse(e, sig, vars);
  }
};

static_assert(Institution<Eq>);

}  // namespace ifusion
