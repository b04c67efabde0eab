#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ifusion/error.hpp"
#include "ifusion/fca.hpp"
#include "ifusion/institution.hpp"
#include "ifusion/theory.hpp"

namespace ifusion {

// Models as instances, universe sentences as types, satisfaction as incidence.
template <Institution I>
Classification classification_of(const TheoryContext<I>& ctx) {
  std::vector<std::string> instances;
  for (const auto& m : ctx.space().models()) {
    instances.push_back(I::print_model(ctx.signature(), m));
  }
  std::vector<std::string> types;
  std::vector<Extent> columns;
  for (std::size_t k = 0; k < ctx.universe().size(); ++k) {
    types.push_back(I::print(ctx.universe()[k]));
    columns.push_back(ctx.column(k));
  }
  return Classification(std::move(instances), std::move(types), std::move(columns));
}

// <reduct, translate> as an infomorphism between the two classifications.
template <Institution I>
Infomorphism infomorphism_of(const MorphismSemantics<I>& ms) {
  Infomorphism f;
  for (std::size_t i = 0; i < ms.target().space().size(); ++i) {
    f.instance_map.push_back(ms.reduct_index(i));
  }
  for (std::size_t k = 0; k < ms.source().universe().size(); ++k) {
    f.type_map.push_back(ms.translated_index(k));
  }
  return f;
}

// Sends each theory to the concept of its closure; equivalent theories land
// on the same concept.
template <Institution I>
std::vector<std::size_t> closure_quotient(const TheoryContext<I>& ctx, const ConceptLattice& lattice,
                                          const std::vector<Theory<I>>& theories) {
  std::vector<std::size_t> out;
  for (const auto& t : theories) out.push_back(lattice.index_of(extent(ctx.space(), t).extent));
  return out;
}

// Small deterministic theory sample over a universe: the empty theory, then
// random one- and two-axiom theories.
template <Institution I>
std::vector<Theory<I>> sample_theories(const SentenceUniverse<I>& u, std::size_t count,
                                       std::uint64_t seed) {
  std::vector<Theory<I>> out;
  out.emplace_back("empty", u.signature());
  if (u.size() == 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
  for (std::size_t k = 1; k < count; ++k) {
    std::vector<typename I::Sentence> axioms{u[pick(rng)]};
    if (k % 2 == 0) axioms.push_back(u[pick(rng)]);
    out.emplace_back("sample" + std::to_string(k), u.signature(), std::move(axioms));
  }
  return out;
}

struct NaturalityReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

template <Institution I>
using RightEntailmentFn = std::function<Theory<I>(const SignatureMorphism&, const Theory<I>&)>;

// Both squares relating the entailment-level and closed-level operators,
// compared on extents:
//   left:  extent(left_entailment(T2)) == left_closed(extent(T2))
//   right: extent(right_entailment(T1)) == right_closed(extent(T1))
template <Institution I>
NaturalityReport naturality_check(const MorphismSemantics<I>& ms,
                                  const std::vector<Theory<I>>& source_sample,
                                  const std::vector<Theory<I>>& target_sample,
                                  RightEntailmentFn<I> right = right_entailment<I>) {
  NaturalityReport r;
  const auto& space1 = ms.source().space();
  const auto& space2 = ms.target().space();
  for (const auto& t2 : target_sample) {
    ++r.checked;
    const auto lhs = extent(space1, left_entailment(ms, t2));
    const auto rhs = left_closed(ms, extent(space2, t2));
    if (!(lhs == rhs)) {
      r.failures.push_back("left square fails on '" + t2.name() + "': " +
                           to_bitstring(lhs.extent) + " vs " + to_bitstring(rhs.extent));
    }
  }
  for (const auto& t1 : source_sample) {
    ++r.checked;
    const auto lhs = extent(space2, right(ms.sigma(), t1));
    const auto rhs = right_closed(ms, extent(space1, t1));
    if (!(lhs == rhs)) {
      r.failures.push_back("right square fails on '" + t1.name() + "': " +
                           to_bitstring(lhs.extent) + " vs " + to_bitstring(rhs.extent));
    }
  }
  return r;
}

}  // namespace ifusion
