#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ifusion/error.hpp"
#include "ifusion/institution.hpp"
#include "ifusion/signature.hpp"

namespace ifusion {

// A signature together with a finite axiom set. Axioms are kept sorted and
// duplicate-free: a theory is a set of sentences.
template <Institution I>
class Theory {
 public:
  using Sentence = typename I::Sentence;

  Theory() = default;
  Theory(std::string name, Signature sig, std::vector<Sentence> axioms = {})
      : name_(std::move(name)), sig_(std::move(sig)), axioms_(std::move(axioms)) {
    for (const auto& a : axioms_) I::check_sentence(sig_, a);
    if (!std::is_sorted(axioms_.begin(), axioms_.end())) std::sort(axioms_.begin(), axioms_.end());
    axioms_.erase(std::unique(axioms_.begin(), axioms_.end()), axioms_.end());
  }

  const std::string& name() const { return name_; }
  const Signature& signature() const { return sig_; }
  const std::vector<Sentence>& axioms() const { return axioms_; }
  bool has_axiom(const Sentence& s) const {
    return std::binary_search(axioms_.begin(), axioms_.end(), s);
  }

  Theory renamed(std::string name) const {
    Theory t = *this;
    t.name_ = std::move(name);
    return t;
  }

  friend bool operator==(const Theory& a, const Theory& b) {
    return a.name_ == b.name_ && a.sig_ == b.sig_ && a.axioms_ == b.axioms_;
  }

 private:
  std::string name_;
  Signature sig_;
  std::vector<Sentence> axioms_;
};

// A closed theory, represented by its extent: the set of models of the
// theory, as a bitset over the signature's model enumeration.
struct ClosedTheory {
  Signature sig;
  Extent extent;

  // The closed-theory order: fewer models means more theorems.
  bool entails(const ClosedTheory& other) const { return extent.is_subset_of(other.extent); }

  friend bool operator==(const ClosedTheory& a, const ClosedTheory& b) {
    return a.sig == b.sig && a.extent == b.extent;
  }
};

// Model space plus a finite sentence universe and its truth table. Closures,
// intents and closed-theory joins are computed relative to the universe.
template <Institution I>
class TheoryContext {
 public:
  using Sentence = typename I::Sentence;
  using Model = typename I::Model;

  TheoryContext(ModelSpace<I> space, SentenceUniverse<I> universe)
      : space_(std::move(space)), universe_(std::move(universe)) {
    if (!(space_.signature() == universe_.signature())) {
      fail(ErrorKind::kSemantic, "universe and model space are over different signatures");
    }
    table_ = space_.truth_table(universe_.sentences());
    small_ = space_.size() <= 64;
    if (small_) {
      words_.reserve(table_.size());
      for (const auto& col : table_) words_.push_back(col.empty() ? 0 : col.to_ulong());
    }
  }

  TheoryContext(const Signature& sig, const Bounds& bounds,
                std::span<const Sentence> extras = {})
      : TheoryContext(ModelSpace<I>(sig, bounds),
                      SentenceUniverse<I>::generate(sig, bounds.universe_depth, extras)) {}

  const ModelSpace<I>& space() const { return space_; }
  const SentenceUniverse<I>& universe() const { return universe_; }
  const Signature& signature() const { return space_.signature(); }
  const Extent& column(std::size_t k) const { return table_[k]; }

  // Universe sentences true in every model of `models`.
  Extent intent_bits(const Extent& models) const {
    Extent out(universe_.size());
    for_each_in_intent(models, [&](std::size_t k) { out.set(k); });
    return out;
  }

  std::vector<Sentence> intent(const Extent& models) const {
    std::vector<Sentence> out;
    for_each_in_intent(models, [&](std::size_t k) { out.push_back(universe_[k]); });
    return out;
  }

  // Models of the intent: the Galois closure of a model set.
  Extent close(const Extent& models) const {
    if (small_) {
      const std::uint64_t m = models.empty() ? 0 : models.to_ulong();
      std::uint64_t out = space_.all().empty() ? 0 : space_.all().to_ulong();
      for (const auto w : words_) {
        if ((m & ~w) == 0) out &= w;
      }
      return Extent(space_.size(), out);
    }
    Extent out = space_.all();
    for (const auto& col : table_) {
      if (models.is_subset_of(col)) out &= col;
    }
    return out;
  }

  bool is_closed(const Extent& models) const { return close(models) == models; }

  ClosedTheory closed(const Extent& models) const {
    return ClosedTheory{signature(), close(models)};
  }

 private:
  ModelSpace<I> space_;
  SentenceUniverse<I> universe_;
  std::vector<Extent> table_;
  // One word per column when there are at most 64 models.
  bool small_ = false;
  std::vector<std::uint64_t> words_;

  template <class F>
  void for_each_in_intent(const Extent& models, F&& f) const {
    if (small_) {
      const std::uint64_t m = models.empty() ? 0 : models.to_ulong();
      for (std::size_t k = 0; k < words_.size(); ++k) {
        if ((m & ~words_[k]) == 0) f(k);
      }
      return;
    }
    for (std::size_t k = 0; k < table_.size(); ++k) {
      if (models.is_subset_of(table_[k])) f(k);
    }
  }
};

inline void require_same_signature(const Signature& a, const Signature& b) {
  if (!(a == b)) {
    fail(ErrorKind::kSemantic,
         "signature mismatch: '" + a.name() + "' vs '" + b.name() + "'");
  }
}

template <Institution I>
ClosedTheory extent(const ModelSpace<I>& space, const Theory<I>& t) {
  require_same_signature(space.signature(), t.signature());
  return ClosedTheory{t.signature(),
                      space.extent_of(std::span<const typename I::Sentence>(t.axioms()))};
}

// Every enumerated model of `t` satisfies `s`.
template <Institution I>
bool entails(const ModelSpace<I>& space, const Theory<I>& t, const typename I::Sentence& s) {
  I::check_sentence(space.signature(), s);
  return extent(space, t).extent.is_subset_of(space.extent_of(s));
}

// The first model (in enumeration order) of `t` that refutes `s`.
template <Institution I>
std::optional<typename I::Model> countermodel(const ModelSpace<I>& space, const Theory<I>& t,
                                              const typename I::Sentence& s) {
  I::check_sentence(space.signature(), s);
  Extent bad = extent(space, t).extent - space.extent_of(s);
  const auto i = bad.find_first();
  if (i == Extent::npos) return std::nullopt;
  return space[i];
}

template <Institution I>
std::vector<typename I::Sentence> closure_in_universe(const TheoryContext<I>& ctx,
                                                      const Theory<I>& t) {
  return ctx.intent(extent(ctx.space(), t).extent);
}

// T1 entails every axiom of T2.
template <Institution I>
bool entails_theory(const ModelSpace<I>& space, const Theory<I>& t1, const Theory<I>& t2) {
  require_same_signature(t1.signature(), t2.signature());
  const Extent e1 = extent(space, t1).extent;
  const auto columns = space.truth_table(t2.axioms());
  return std::all_of(columns.begin(), columns.end(),
                     [&](const Extent& c) { return e1.is_subset_of(c); });
}

template <Institution I>
bool equivalent(const ModelSpace<I>& space, const Theory<I>& t1, const Theory<I>& t2) {
  return extent(space, t1) == extent(space, t2);
}

// Meet in the entailment preorder: axiom-set union.
template <Institution I>
Theory<I> meet(const Theory<I>& t1, const Theory<I>& t2, std::string name = {}) {
  require_same_signature(t1.signature(), t2.signature());
  auto axioms = t1.axioms();
  axioms.insert(axioms.end(), t2.axioms().begin(), t2.axioms().end());
  return Theory<I>(name.empty() ? t1.name() : std::move(name), t1.signature(),
                   std::move(axioms));
}

// Join of closed theories: the closure of the union of their extents.
template <Institution I>
ClosedTheory join_closed(const TheoryContext<I>& ctx, const ClosedTheory& c1,
                         const ClosedTheory& c2) {
  require_same_signature(c1.sig, c2.sig);
  return ctx.closed(c1.extent | c2.extent);
}

// Meet of closed theories: extent intersection (already closed).
inline ClosedTheory meet_closed(const ClosedTheory& c1, const ClosedTheory& c2) {
  return ClosedTheory{c1.sig, c1.extent & c2.extent};
}

template <Institution I>
Theory<I> existential_image(const SignatureMorphism& sigma, const Theory<I>& t) {
  require_same_signature(sigma.source(), t.signature());
  std::vector<typename I::Sentence> image;
  image.reserve(t.axioms().size());
  for (const auto& s : t.axioms()) image.push_back(I::translate(sigma, s));
  return Theory<I>(t.name(), sigma.target(), std::move(image));
}

// Source universe sentences whose translation is an axiom of `t2`.
template <Institution I>
std::vector<typename I::Sentence> inverse_image(const SignatureMorphism& sigma,
                                                const Theory<I>& t2,
                                                const SentenceUniverse<I>& u1) {
  require_same_signature(sigma.target(), t2.signature());
  std::vector<typename I::Sentence> out;
  for (const auto& s1 : u1.sentences()) {
    if (t2.has_axiom(I::translate(sigma, s1))) out.push_back(s1);
  }
  return out;
}

// A signature morphism with the semantic context of both ends. The target
// universe is extended with the translated source universe, so that the
// closed-level operators agree with their entailment-level counterparts.
template <Institution I>
class MorphismSemantics {
 public:
  using Sentence = typename I::Sentence;

  MorphismSemantics(SignatureMorphism sigma, const Bounds& bounds,
                    std::span<const Sentence> source_extras = {},
                    std::span<const Sentence> target_extras = {})
      : sigma_(std::move(sigma)),
        source_(sigma_.source(), bounds, source_extras),
        target_(make_target(sigma_, bounds, source_.universe(), target_extras)) {
    reduct_index_.reserve(target_.space().size());
    for (const auto& m2 : target_.space().models()) {
      reduct_index_.push_back(source_.space().rank(I::reduct(sigma_, m2)));
    }
    translated_index_.reserve(source_.universe().size());
    for (const auto& s1 : source_.universe().sentences()) {
      translated_index_.push_back(*target_.universe().find(I::translate(sigma_, s1)));
    }
  }

  const SignatureMorphism& sigma() const { return sigma_; }
  const TheoryContext<I>& source() const { return source_; }
  const TheoryContext<I>& target() const { return target_; }
  // Target model index -> index of its reduct among source models.
  std::size_t reduct_index(std::size_t target_model) const {
    return reduct_index_[target_model];
  }

  // Position of translate(sigma, U1[k]) within the target universe.
  std::size_t translated_index(std::size_t source_sentence) const {
    return translated_index_[source_sentence];
  }

  // Reducts of a set of target models.
  Extent reduct_image(const Extent& target_models) const {
    Extent out = source_.space().none();
    for (auto i = target_models.find_first(); i != Extent::npos;
         i = target_models.find_next(i)) {
      out.set(reduct_index_[i]);
    }
    return out;
  }

  // Target models whose reduct lies in `source_models`.
  Extent reduct_preimage(const Extent& source_models) const {
    Extent out = target_.space().none();
    for (std::size_t i = 0; i < reduct_index_.size(); ++i) {
      if (source_models.test(reduct_index_[i])) out.set(i);
    }
    return out;
  }

 private:
  static TheoryContext<I> make_target(const SignatureMorphism& sigma, const Bounds& bounds,
                                      const SentenceUniverse<I>& u1,
                                      std::span<const Sentence> extras) {
    std::vector<Sentence> more(extras.begin(), extras.end());
    more.reserve(more.size() + u1.size());
    for (const auto& s : u1.sentences()) more.push_back(I::translate(sigma, s));
    return TheoryContext<I>(sigma.target(), bounds, more);
  }

  SignatureMorphism sigma_;
  TheoryContext<I> source_;
  TheoryContext<I> target_;
  std::vector<std::size_t> reduct_index_;
  std::vector<std::size_t> translated_index_;
};

// Target-to-source closed operator: closure of the reduct image.
template <Institution I>
ClosedTheory left_closed(const MorphismSemantics<I>& ms, const ClosedTheory& c2) {
  require_same_signature(ms.sigma().target(), c2.sig);
  return ms.source().closed(ms.reduct_image(c2.extent));
}

// Source-to-target closed operator: reduct preimage.
template <Institution I>
ClosedTheory right_closed(const MorphismSemantics<I>& ms, const ClosedTheory& c1) {
  require_same_signature(ms.sigma().source(), c1.sig);
  return ClosedTheory{ms.sigma().target(), ms.reduct_preimage(c1.extent)};
}

// Substitution applied to the target closure, within the source universe.
template <Institution I>
Theory<I> left_entailment(const MorphismSemantics<I>& ms, const Theory<I>& t2) {
  require_same_signature(ms.sigma().target(), t2.signature());
  const Extent closed = ms.target().intent_bits(extent(ms.target().space(), t2).extent);
  const auto& u1 = ms.source().universe();
  std::vector<typename I::Sentence> axioms;
  for (std::size_t k = 0; k < u1.size(); ++k) {
    if (closed.test(ms.translated_index(k))) axioms.push_back(u1[k]);
  }
  return Theory<I>(t2.name(), ms.sigma().source(), std::move(axioms));
}

template <Institution I>
Theory<I> right_entailment(const SignatureMorphism& sigma, const Theory<I>& t1) {
  return existential_image(sigma, t1);
}

// The closed theory of a single model (its closure relative to the universe).
template <Institution I>
ClosedTheory model_theory(const TheoryContext<I>& ctx, const typename I::Model& m) {
  Extent single = ctx.space().none();
  single.set(ctx.space().rank(m));
  return ctx.closed(single);
}

template <Institution I>
ClosedTheory sentence_theory(const ModelSpace<I>& space, const typename I::Sentence& s) {
  I::check_sentence(space.signature(), s);
  return ClosedTheory{space.signature(), space.extent_of(s)};
}

// Every translated source axiom is a theorem of the target.
template <Institution I>
bool is_theory_morphism(const SignatureMorphism& sigma, const Theory<I>& t1,
                        const Theory<I>& t2, const ModelSpace<I>& target_space) {
  require_same_signature(sigma.source(), t1.signature());
  require_same_signature(sigma.target(), t2.signature());
  const auto image = existential_image(sigma, t1);
  return entails_theory(target_space, t2, image);
}

template <Institution I>
bool is_theory_morphism(const SignatureMorphism& sigma, const Theory<I>& t1,
                        const Theory<I>& t2, const Bounds& bounds) {
  return is_theory_morphism(sigma, t1, t2, ModelSpace<I>(sigma.target(), bounds));
}

template <Institution I>
struct TheoryMorphism {
  SignatureMorphism sigma;
  Theory<I> source;
  Theory<I> target;

  friend bool operator==(const TheoryMorphism&, const TheoryMorphism&) = default;
};

// Checked construction: fails unless `sigma` maps axioms to theorems.
template <Institution I>
TheoryMorphism<I> make_theory_morphism(SignatureMorphism sigma, Theory<I> source,
                                       Theory<I> target, const Bounds& bounds) {
  if (!is_theory_morphism(sigma, source, target, bounds)) {
    fail(ErrorKind::kSemantic, "'" + sigma.name() + "' is not a theory morphism from '" +
                                   source.name() + "' to '" + target.name() + "'");
  }
  return TheoryMorphism<I>{std::move(sigma), std::move(source), std::move(target)};
}

template <Institution I>
TheoryMorphism<I> identity_theory_morphism(const Theory<I>& t) {
  return TheoryMorphism<I>{SignatureMorphism::identity(t.signature()), t, t};
}

// Composite of f then g; the composite is re-verified semantically.
template <Institution I>
TheoryMorphism<I> compose_theory_morphisms(const TheoryMorphism<I>& f,
                                           const TheoryMorphism<I>& g,
                                           const Bounds& bounds) {
  if (!(f.target == g.source)) {
    fail(ErrorKind::kSemantic, "theory morphisms are not composable");
  }
  return make_theory_morphism(f.sigma.then(g.sigma), f.source, g.target, bounds);
}

}  // namespace ifusion
