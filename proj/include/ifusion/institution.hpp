#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "ifusion/error.hpp"
#include "ifusion/signature.hpp"

namespace ifusion {

// A set of models, indexed by position in a signature's model enumeration.
using Extent = boost::dynamic_bitset<std::uint64_t>;

// Model 0 is the leftmost character.
inline std::string to_bitstring(const Extent& e) {
  std::string s(e.size(), '0');
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.test(i)) s[i] = '1';
  }
  return s;
}

inline bool lex_less(const Extent& a, const Extent& b) {
  return to_bitstring(a) < to_bitstring(b);
}

// Enumeration limits. Every semantic question is answered by exhaustive
// model enumeration, so the cost of an answer is bounded by these.
struct Bounds {
  int max_atoms = 20;
  int max_carrier = 3;
  int universe_depth = 2;
  std::uint64_t max_models = std::uint64_t{1} << 22;
  std::uint64_t max_environments = std::uint64_t{1} << 16;
};

template <class I>
concept Institution = requires(const Signature& sig,
                               const SignatureMorphism& sigma,
                               const Bounds& bounds,
                               const typename I::Sentence& s,
                               const typename I::Model& m,
                               std::span<const typename I::Model> models,
                               std::span<const typename I::Sentence> sentences,
                               std::uint64_t index, int depth) {
  { I::kName } -> std::convertible_to<std::string_view>;
  { s < s } -> std::convertible_to<bool>;
  { s == s } -> std::convertible_to<bool>;
  { m < m } -> std::convertible_to<bool>;
  { m == m } -> std::convertible_to<bool>;
  { I::check_sentence(sig, s) };
  { I::translate(sigma, s) } -> std::same_as<typename I::Sentence>;
  { I::reduct(sigma, m) } -> std::same_as<typename I::Model>;
  { I::satisfies(sig, m, s) } -> std::same_as<bool>;
  { I::model_count(sig, bounds) } -> std::same_as<std::uint64_t>;
  { I::model_at(sig, bounds, index) } -> std::same_as<typename I::Model>;
  { I::model_rank(sig, bounds, m) } -> std::same_as<std::uint64_t>;
  { I::generate_universe(sig, depth) } -> std::same_as<std::vector<typename I::Sentence>>;
  { I::truth_table(sig, models, sentences) } -> std::same_as<std::vector<Extent>>;
  { I::print(s) } -> std::same_as<std::string>;
  { I::print_model(sig, m) } -> std::same_as<std::string>;
};

// Exhaustive, duplicate-free, deterministically ordered.
template <Institution I>
std::vector<typename I::Model> enumerate_models(const Signature& sig,
                                                const Bounds& bounds) {
  const std::uint64_t n = I::model_count(sig, bounds);
  std::vector<typename I::Model> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(I::model_at(sig, bounds, i));
  return out;
}

// All models of one signature, with extents computed against them.
template <Institution I>
class ModelSpace {
 public:
  using Model = typename I::Model;
  using Sentence = typename I::Sentence;

  ModelSpace(Signature sig, Bounds bounds)
      : sig_(std::move(sig)),
        bounds_(bounds),
        models_(enumerate_models<I>(sig_, bounds_)) {}

  const Signature& signature() const { return sig_; }
  const Bounds& bounds() const { return bounds_; }
  const std::vector<Model>& models() const { return models_; }
  std::size_t size() const { return models_.size(); }
  const Model& operator[](std::size_t i) const { return models_[i]; }

  std::size_t rank(const Model& m) const {
    return static_cast<std::size_t>(I::model_rank(sig_, bounds_, m));
  }

  Extent all() const {
    Extent e(models_.size());
    e.set();
    return e;
  }
  Extent none() const { return Extent(models_.size()); }

  Extent extent_of(const Sentence& s) const {
    return I::truth_table(sig_, models_, std::span<const Sentence>(&s, 1)).front();
  }

  // Models satisfying every sentence; the empty conjunction is everything.
  Extent extent_of(std::span<const Sentence> sentences) const {
    Extent e = all();
    for (const auto& col : I::truth_table(sig_, models_, sentences)) e &= col;
    return e;
  }

  std::vector<Extent> truth_table(std::span<const Sentence> sentences) const {
    return I::truth_table(sig_, models_, sentences);
  }

 private:
  Signature sig_;
  Bounds bounds_;
  std::vector<Model> models_;
};

// A finite stand-in for sen(sig): generated sentences plus any extras that
// must be present (loaded axioms and their translations).
template <Institution I>
class SentenceUniverse {
 public:
  using Sentence = typename I::Sentence;

  SentenceUniverse() = default;
  SentenceUniverse(Signature sig, std::vector<Sentence> sentences,
                   std::string generator)
      : sig_(std::move(sig)),
        sentences_(std::move(sentences)),
        generator_(std::move(generator)) {
    for (const auto& s : sentences_) I::check_sentence(sig_, s);
    std::sort(sentences_.begin(), sentences_.end());
    sentences_.erase(std::unique(sentences_.begin(), sentences_.end()),
                     sentences_.end());
  }

  static SentenceUniverse generate(const Signature& sig, int depth,
                                   std::span<const Sentence> extras = {}) {
    auto all = I::generate_universe(sig, depth);
    const std::size_t generated = all.size();
    all.insert(all.end(), extras.begin(), extras.end());
    SentenceUniverse u(sig, std::move(all), "depth<=" + std::to_string(depth));
    // Extras already produced by the generator are not counted.
    if (u.size() > generated) u.generator_ += " +" + std::to_string(u.size() - generated) + " extra";
    return u;
  }

  const Signature& signature() const { return sig_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::string& generator() const { return generator_; }
  std::size_t size() const { return sentences_.size(); }
  const Sentence& operator[](std::size_t i) const { return sentences_[i]; }

  std::optional<std::size_t> find(const Sentence& s) const {
    auto it = std::lower_bound(sentences_.begin(), sentences_.end(), s);
    if (it == sentences_.end() || !(*it == s)) return std::nullopt;
    return static_cast<std::size_t>(it - sentences_.begin());
  }
  bool contains(const Sentence& s) const { return find(s).has_value(); }

 private:
  Signature sig_;
  std::vector<Sentence> sentences_;
  std::string generator_;
};

template <Institution I>
struct SatisfactionReport {
  SignatureMorphism morphism;
  std::uint64_t checked = 0;
  // (target model, source sentence) pairs where the two sides disagree.
  std::vector<std::pair<typename I::Model, typename I::Sentence>> violations;

  bool ok() const { return violations.empty(); }
};

// Checks reduct(sigma, m2) |= s1 <=> m2 |= translate(sigma, s1) for every
// enumerated target model m2 and every sentence s1 of `sample`.
// `translate` is a parameter so that a faulty translation can be exercised.
template <Institution I, class Translate>
SatisfactionReport<I> check_satisfaction_condition(
    const SignatureMorphism& sigma, const Bounds& bounds,
    std::span<const typename I::Sentence> sample, Translate translate) {
  using Sentence = typename I::Sentence;
  using Model = typename I::Model;

  const ModelSpace<I> target(sigma.target(), bounds);
  std::vector<Model> reducts;
  reducts.reserve(target.size());
  for (const auto& m2 : target.models()) reducts.push_back(I::reduct(sigma, m2));

  std::vector<Sentence> translated;
  translated.reserve(sample.size());
  for (const auto& s1 : sample) translated.push_back(translate(sigma, s1));

  const auto lhs = I::truth_table(sigma.source(), reducts, sample);
  const auto rhs = target.truth_table(translated);

  SatisfactionReport<I> report{sigma, 0, {}};
  report.checked = static_cast<std::uint64_t>(target.size()) * sample.size();
  for (std::size_t k = 0; k < sample.size(); ++k) {
    if (lhs[k] == rhs[k]) continue;
    const Extent diff = lhs[k] ^ rhs[k];
    for (auto i = diff.find_first(); i != Extent::npos; i = diff.find_next(i)) {
      report.violations.emplace_back(target[i], sample[k]);
    }
  }
  return report;
}

template <Institution I>
SatisfactionReport<I> check_satisfaction_condition(
    const SignatureMorphism& sigma, const Bounds& bounds,
    std::span<const typename I::Sentence> sample) {
  return check_satisfaction_condition<I>(
      sigma, bounds, sample,
      [](const SignatureMorphism& s, const typename I::Sentence& x) {
        return I::translate(s, x);
      });
}

// Uses the generated universe of the source signature as the sample.
template <Institution I>
SatisfactionReport<I> check_satisfaction_condition(const SignatureMorphism& sigma,
                                                   const Bounds& bounds) {
  const auto sample = I::generate_universe(sigma.source(), bounds.universe_depth);
  return check_satisfaction_condition<I>(
      sigma, bounds, std::span<const typename I::Sentence>(sample));
}

}  // namespace ifusion
