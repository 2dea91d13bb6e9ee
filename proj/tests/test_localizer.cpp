#include <gtest/gtest.h>

#include "epos/classifier.hpp"
#include "epos/error.hpp"
#include "epos/evaluator.hpp"
#include "epos/generators.hpp"
#include "epos/localizer.hpp"

using namespace epos;

namespace {

FiniteStructure s1() {
  Signature sig;
  sig.add_relation("NEQ", 2);
  FiniteStructure s("S1", sig, 2);
  s.set_relation("NEQ", std::vector<Tuple>{{0, 1}, {1, 0}});
  return s;
}

FiniteStructure s2() {
  Signature sig;
  sig.add_relation("R", 2);
  FiniteStructure s("S2", sig, 2);
  s.set_relation("R", std::vector<Tuple>{{0, 0}, {0, 1}});
  return s;
}

BoolFormula T() { return BoolFormula::constant(true); }
BoolFormula F() { return BoolFormula::constant(false); }

// Same connective skeleton, ignoring quantifiers and leaf values.
bool same_shape(const Formula& f, const BoolFormula& b) {
  if (f.kind() == Formula::Kind::Exists) return same_shape(f.body(), b);
  if (f.kind() == Formula::Kind::Atom)
    return b.kind() == BoolFormula::Kind::True || b.kind() == BoolFormula::Kind::False;
  const bool is_and = f.kind() == Formula::Kind::And;
  if (b.kind() != (is_and ? BoolFormula::Kind::And : BoolFormula::Kind::Or)) return false;
  return same_shape(f.lhs(), b.lhs()) && same_shape(f.rhs(), b.rhs());
}

}  // namespace

TEST(Localize, OracleExample) {
  AtomOracle n = nat_neq_oracle(false);
  BoolFormula b = localize(n, parse_formula("E x. E y. NEQ(x,y) & NEQ(x,x)", n.signature));
  EXPECT_EQ(b, BoolFormula::conj(T(), F()));
  EXPECT_EQ(to_string(b), "And(true, false)");
}

TEST(Localize, FiniteExamples) {
  FiniteStructure b = s2();
  EXPECT_EQ(localize(b, parse_formula("R(x,y)", b.signature())), T());
  FiniteStructure a = s1();
  EXPECT_EQ(localize(a, parse_formula("NEQ(x,y) | NEQ(x,x)", a.signature())),
            BoolFormula::disj(T(), F()));
}

TEST(EvalBool, Basics) {
  EXPECT_FALSE(eval_bool(BoolFormula::conj(T(), F())));
  EXPECT_TRUE(eval_bool(BoolFormula::disj(F(), T())));
  EXPECT_TRUE(eval_bool(T()));
}

TEST(AtomPattern, InvariantUnderInjectiveRenaming) {
  Atom a{"R", {Term::var("x"), Term::var("y"), Term::var("x")}};
  Atom b{"R", {Term::var("u"), Term::var("w"), Term::var("u")}};
  Atom c{"R", {Term::var("u"), Term::var("u"), Term::var("u")}};
  EXPECT_EQ(atom_pattern(a), atom_pattern(b));
  EXPECT_NE(atom_pattern(a), atom_pattern(c));
}

TEST(FastPath, Examples) {
  AtomOracle n = nat_neq_oracle(false);
  EXPECT_FALSE(decide_fast_path(n, parse_formula("E x. E y. NEQ(x,y) & NEQ(x,x)", n.signature)));
  FiniteStructure b = s2();
  EXPECT_TRUE(decide_fast_path(b, parse_formula("E x. R(x,x) & R(x,x)", b.signature())));
  FiniteStructure a = s1();
  EXPECT_THROW(decide_fast_path(a, parse_formula("E x. NEQ(x,x)", a.signature())),
               NotLocallyRefutableError);
  AtomOracle ne = nat_neq_oracle(true);
  EXPECT_THROW(decide_fast_path(ne, parse_formula("E x. EQ(x,x)", ne.signature)),
               NotLocallyRefutableError);
  EXPECT_THROW(decide_fast_path(powerset_algebra(1), parse_formula("E x. NEQ(x,x)", powerset_algebra(1).signature())),
               NotLocallyRefutableError);
}

TEST(Localize, ShapeAndSoundness) {
  gen::Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    gen::StructureOptions o;
    o.validity = i % 2 == 0 ? gen::Validity::Any : gen::Validity::NotAValid;
    FiniteStructure s = gen::random_structure(rng, o);
    for (int j = 0; j < 20; ++j) {
      Formula f = gen::random_sentence(rng, s.signature(), {});
      BoolFormula b = localize(s, f);
      EXPECT_TRUE(same_shape(f, b));
      if (!eval_bool(b)) EXPECT_FALSE(brute_force_eval(s, f)) << print_formula(f);
    }
  }
}

TEST(FastPath, CompleteOnAValidStructures) {
  gen::Rng rng(43);
  for (int i = 0; i < 40; ++i) {
    gen::StructureOptions o;
    o.validity = gen::Validity::AValid;
    FiniteStructure s = gen::random_structure(rng, o);
    ASSERT_FALSE(a_valid_witnesses(s).empty());
    for (int j = 0; j < 30; ++j) {
      Formula f = gen::random_sentence(rng, s.signature(), {});
      EXPECT_EQ(decide_fast_path(s, f), brute_force_eval(s, f)) << print_formula(f);
    }
  }
}
