#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support/helpers.hpp"

using namespace th;

namespace {

const Signature kP = oracle::atoms("P", {"p"});
const Signature kPQ = oracle::atoms("PQ", {"p", "q"});

Theory<Prop> T(const std::string& name, const Signature& sig, std::vector<std::string> axioms) {
  std::vector<prop::Formula> fs;
  for (const auto& a : axioms) fs.push_back(P(a, sig));
  return Theory<Prop>(name, sig, fs);
}

Bounds depth(int d) {
  Bounds b;
  b.universe_depth = d;
  return b;
}

std::set<std::string> printed(const std::vector<prop::Formula>& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) out.insert(Prop::print(f));
  return out;
}

}  // namespace

// Extents below are written model by model: over PQ the order is
// (p,q) = 00, 01, 10, 11.

TEST(TheoryOps, EntailsAndCountermodel) {
  const ModelSpace<Prop> space(kPQ, Bounds{});
  const auto kb = T("KB", kPQ, {"p", "(implies p q)"});
  const auto pos = T("Pos", kPQ, {"p"});
  EXPECT_TRUE(entails(space, kb, P("q", kPQ)));
  EXPECT_FALSE(entails(space, pos, P("q", kPQ)));
  const auto m = countermodel(space, pos, P("q", kPQ));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(Prop::print_model(kPQ, *m), Prop::print_model(kPQ, prop::Assignment{{1, 0}}));
  EXPECT_FALSE(countermodel(space, kb, P("q", kPQ)).has_value());
  EXPECT_TRUE(entails(space, T("Empty", kPQ, {}), P("(or p (not p))", kPQ)));
}

TEST(TheoryOps, Extent) {
  const ModelSpace<Prop> space(kPQ, Bounds{});
  EXPECT_EQ(extent(space, T("KB", kPQ, {"p", "(implies p q)"})).extent, bits("0001"));
  EXPECT_EQ(extent(space, T("Pos", kPQ, {"p"})).extent, bits("0011"));
  EXPECT_EQ(extent(space, T("Empty", kPQ, {})).extent, bits("1111"));
  EXPECT_EQ(extent(space, T("Bad", kPQ, {"(and p (not p))"})).extent, bits("0000"));
}

TEST(TheoryOps, ClosureInCustomUniverse) {
  const std::vector<prop::Formula> u = {P("p", kPQ), P("q", kPQ), P("(or p q)", kPQ)};
  const TheoryContext<Prop> ctx(ModelSpace<Prop>(kPQ, Bounds{}), SentenceUniverse<Prop>(kPQ, u, "custom"));
  EXPECT_EQ(printed(closure_in_universe(ctx, T("Pos", kPQ, {"p"}))),
            (std::set<std::string>{"p", "(or p q)"}));
  EXPECT_EQ(printed(closure_in_universe(ctx, T("Empty", kPQ, {}))), std::set<std::string>{});
  EXPECT_EQ(closure_in_universe(ctx, T("Bad", kPQ, {"false"})).size(), 3U);
}

TEST(TheoryOps, ClosureAgreesWithOracle) {
  const TheoryContext<Prop> ctx(kPQ, depth(1));
  const auto vals = oracle::valuations(kPQ);
  const auto u = ctx.universe().sentences();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
  for (int k = 0; k < 50; ++k) {
    std::vector<prop::Formula> axioms{u[pick(rng)], u[pick(rng)]};
    const Theory<Prop> t("t", kPQ, axioms);
    std::set<prop::Formula> expected;
    for (const auto& s : u) {
      if (oracle::entails(vals, axioms, s)) expected.insert(s);
    }
    const auto got = closure_in_universe(ctx, t);
    EXPECT_EQ(std::set<prop::Formula>(got.begin(), got.end()), expected);
  }
}

TEST(TheoryOps, EntailsTheoryEquivalentMeet) {
  const ModelSpace<Prop> space(kPQ, Bounds{});
  const auto kb = T("KB", kPQ, {"p", "(implies p q)"});
  const auto both = T("Both", kPQ, {"(and p q)"});
  const auto pos = T("Pos", kPQ, {"p"});
  EXPECT_TRUE(entails_theory(space, kb, both));
  EXPECT_TRUE(entails_theory(space, kb, pos));
  EXPECT_FALSE(entails_theory(space, pos, kb));
  EXPECT_TRUE(equivalent(space, kb, both));
  EXPECT_FALSE(equivalent(space, kb, pos));

  const auto m = meet(pos, T("Q", kPQ, {"q"}), "PQ");
  EXPECT_EQ(printed(m.axioms()), (std::set<std::string>{"p", "q"}));
  EXPECT_TRUE(equivalent(space, m, both));
  EXPECT_THROW(meet(pos, T("Other", kP, {"p"})), Error);
}

TEST(TheoryOps, JoinAndMeetOfClosedTheories) {
  const TheoryContext<Prop> ctx(kP, depth(1));
  const auto p = sentence_theory(ctx.space(), P("p", kP));
  const auto np = sentence_theory(ctx.space(), P("(not p)", kP));
  EXPECT_EQ(p.extent, bits("01"));
  EXPECT_EQ(join_closed(ctx, p, np).extent, bits("11"));
  EXPECT_EQ(meet_closed(p, np).extent, bits("00"));
  EXPECT_TRUE(meet_closed(p, np).entails(p));
  EXPECT_TRUE(p.entails(join_closed(ctx, p, np)));
}

TEST(TheoryOps, ClosureOperatorLaws) {
  const TheoryContext<Prop> ctx(oracle::atoms("S", {"a", "b", "c"}), depth(1));
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<unsigned> byte(0, 255);
  for (int k = 0; k < 100; ++k) {
    Extent a(8, byte(rng)), b(8, byte(rng));
    b |= a;
    const auto ca = ctx.close(a);
    EXPECT_TRUE(a.is_subset_of(ca));
    EXPECT_EQ(ctx.close(ca), ca);
    EXPECT_TRUE(ca.is_subset_of(ctx.close(b)));
  }
}

TEST(TheoryOps, ExistentialAndInverseImage) {
  const auto ws = corpus<Prop>("corpus/prop/sigma.mor");
  const auto& collapse = ws.morphism("collapse");
  const auto& sigma = ws.morphism("sigma");
  const auto& abc = sigma.target();
  const auto img = existential_image(collapse, T("KB", kPQ, {"p", "(implies p q)"}));
  EXPECT_EQ(img.signature(), abc);
  EXPECT_EQ(printed(img.axioms()), (std::set<std::string>{"a", "(implies a a)"}));

  const auto u1 = SentenceUniverse<Prop>::generate(kPQ, 1);
  const auto pre = inverse_image(sigma, T("AC", abc, {"a", "(or a c)"}), u1);
  EXPECT_EQ(printed(pre), (std::set<std::string>{"p", "(or p q)"}));
  EXPECT_TRUE(inverse_image(sigma, T("B", abc, {"b"}), u1).empty());
}

TEST(TheoryOps, LeftAndRightClosedAlongInclusion) {
  const MorphismSemantics<Prop> ms(SignatureMorphism::inclusion(kP, kPQ), depth(1));
  const ModelSpace<Prop>& s1 = ms.source().space();
  const ModelSpace<Prop>& s2 = ms.target().space();
  EXPECT_EQ(right_closed(ms, sentence_theory(s1, P("p", kP))).extent, bits("0011"));
  EXPECT_EQ(right_closed(ms, sentence_theory(s1, P("(not p)", kP))).extent, bits("1100"));
  EXPECT_EQ(left_closed(ms, sentence_theory(s2, P("q", kPQ))).extent, bits("11"));
  EXPECT_EQ(left_closed(ms, sentence_theory(s2, P("(and p q)", kPQ))).extent, bits("01"));
  EXPECT_EQ(left_closed(ms, sentence_theory(s2, P("(or p q)", kPQ))).extent, bits("11"));
  EXPECT_EQ(left_closed(ms, sentence_theory(s2, P("false", kPQ))).extent, bits("00"));
}

TEST(TheoryOps, LeftRightClosedFormAnAdjunction) {
  const auto ws = corpus<Prop>("corpus/prop/sigma.mor");
  for (const auto* name : {"sigma", "collapse"}) {
    const MorphismSemantics<Prop> ms(ws.morphism(name), depth(1));
    const auto& ctx1 = ms.source();
    const auto& ctx2 = ms.target();
    std::vector<ClosedTheory> c1s, c2s;
    for (unsigned m = 0; m < 16; ++m) {
      const Extent e(4, m);
      if (ctx1.is_closed(e)) c1s.push_back(ctx1.closed(e));
    }
    for (unsigned m = 0; m < 256; ++m) {
      const Extent e(8, m);
      if (ctx2.is_closed(e)) c2s.push_back(ctx2.closed(e));
    }
    // Depth 1 cannot express xor, so not every set of models is closed.
    EXPECT_EQ(c1s.size(), 14U);
    EXPECT_LT(c2s.size(), 256U);
    for (const auto& c1 : c1s) {
      const auto r = right_closed(ms, c1);
      EXPECT_TRUE(ctx2.is_closed(r.extent));
      for (const auto& c2 : c2s) {
        EXPECT_EQ(c2.entails(r), left_closed(ms, c2).entails(c1));
      }
    }
  }
}

TEST(TheoryOps, LeftEntailmentAlongIdentityIsClosure) {
  const MorphismSemantics<Prop> ms(SignatureMorphism::identity(kPQ), depth(1));
  for (const auto& t : {T("KB", kPQ, {"p", "(implies p q)"}), T("E", kPQ, {}), T("Q", kPQ, {"q"})}) {
    const auto left = left_entailment(ms, t);
    EXPECT_EQ(printed(left.axioms()), printed(closure_in_universe(ms.source(), t)));
    EXPECT_TRUE(equivalent(ms.source().space(), left, t));
  }
}

TEST(TheoryOps, LeftEntailmentAgreesWithOracle) {
  const auto ws = corpus<Prop>("corpus/prop/sigma.mor");
  const auto& collapse = ws.morphism("collapse");
  const auto& abc = collapse.target();
  const MorphismSemantics<Prop> ms(collapse, depth(1));
  const auto vals = oracle::valuations(abc);
  for (const auto& t2 : {T("A", abc, {"a"}), T("NA", abc, {"(not a)"}), T("E", abc, {}),
                         T("BC", abc, {"(implies b c)", "a"})}) {
    std::set<std::string> expected;
    for (const auto& s1 : ms.source().universe().sentences()) {
      if (oracle::entails(vals, t2.axioms(), Prop::translate(collapse, s1))) {
        expected.insert(Prop::print(s1));
      }
    }
    EXPECT_EQ(printed(left_entailment(ms, t2).axioms()), expected) << t2.name();
  }
}

TEST(TheoryOps, ModelAndSentenceTheories) {
  const TheoryContext<Prop> ctx(kPQ, depth(1));
  EXPECT_EQ(model_theory(ctx, prop::Assignment{{1, 0}}).extent, bits("0010"));
  EXPECT_EQ(sentence_theory(ctx.space(), P("(iff p q)", kPQ)).extent, bits("1001"));
  EXPECT_THROW(sentence_theory(ctx.space(), P("a", oracle::atoms("A", {"a"}))), Error);
}

TEST(TheoryMorphisms, CheckCompositionAndIdentity) {
  const auto swap = corpus<Prop>("corpus/prop/swap.mor").morphisms.front();
  const auto pos = T("Pos", kPQ, {"p"});
  const auto q = T("Q", kPQ, {"q"});
  const auto both = T("Both", kPQ, {"(and p q)"});
  EXPECT_TRUE(is_theory_morphism(swap, pos, q, Bounds{}));
  EXPECT_FALSE(is_theory_morphism(swap, pos, pos, Bounds{}));
  EXPECT_TRUE(is_theory_morphism(swap, pos, both, Bounds{}));
  EXPECT_THROW(make_theory_morphism(swap, pos, pos, Bounds{}), Error);

  const auto f = make_theory_morphism(swap, pos, q, Bounds{});
  const auto g = make_theory_morphism(swap, q, pos, Bounds{});
  const auto h = make_theory_morphism(SignatureMorphism::identity(kPQ), pos, both, Bounds{});
  const auto fg = compose_theory_morphisms(f, g, Bounds{});
  EXPECT_EQ(fg.sigma, SignatureMorphism::identity(kPQ));
  EXPECT_EQ(compose_theory_morphisms(fg, h, Bounds{}),
            compose_theory_morphisms(f, compose_theory_morphisms(g, h, Bounds{}), Bounds{}));
  EXPECT_EQ(compose_theory_morphisms(identity_theory_morphism(pos), f, Bounds{}).sigma, f.sigma);
  EXPECT_EQ(compose_theory_morphisms(f, identity_theory_morphism(q), Bounds{}).sigma, f.sigma);
  EXPECT_THROW(compose_theory_morphisms(f, f, Bounds{}), Error);
}

TEST(TheoryOps, EqEntailmentWithinBounds) {
  const auto ws = corpus<Eq>("corpus/eq/xor.thy");
  const auto& t = ws.theories.front();
  Bounds b;
  b.max_carrier = 2;
  const ModelSpace<Eq> space(t.signature(), b);
  EXPECT_TRUE(entails(space, t, E("(= (f (f x x) y) (f y (f z z)))", t.signature())));
  const auto m = countermodel(space, t, E("(= (f x x) x)", t.signature()));
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE(Eq::satisfies(t.signature(), *m, t.axioms().front()));
  EXPECT_FALSE(Eq::satisfies(t.signature(), *m, E("(= (f x x) x)", t.signature())));
}
