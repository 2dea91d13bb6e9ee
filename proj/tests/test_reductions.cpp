#include <gtest/gtest.h>

#include "epos/classifier.hpp"
#include "epos/error.hpp"
#include "epos/evaluator.hpp"
#include "epos/generators.hpp"
#include "epos/reductions.hpp"

#include "oracle.hpp"

using namespace epos;

namespace {

FiniteStructure s1() {
  Signature sig;
  sig.add_relation("NEQ", 2);
  FiniteStructure s("S1", sig, 2);
  s.set_relation("NEQ", std::vector<Tuple>{{0, 1}, {1, 0}});
  return s;
}

WitnessPair s1_pair() { return *classify(s1()).witness; }

FiniteStructure r1r2() {
  Signature sig;
  sig.add_relation("R1", 1).add_relation("R2", 1);
  FiniteStructure s("rr", sig, 2);
  s.set_relation("R1", std::vector<Tuple>{{0}});
  s.set_relation("R2", std::vector<Tuple>{{1}});
  return s;
}

}  // namespace

TEST(Prop, ParseAndPrint) {
  PropFormula p = parse_prop("1 & (-2 | 3)");
  EXPECT_EQ(p.kind(), PropFormula::Kind::And);
  EXPECT_EQ(to_string(p), "1 & (-2 | 3)");
  EXPECT_EQ(to_string(parse_prop(to_string(p))), to_string(p));
  EXPECT_THROW(parse_prop("-(1 & 2)"), ParseError);
  EXPECT_THROW(parse_prop("0"), ParseError);
  EXPECT_THROW(parse_prop("1 &"), ParseError);
}

TEST(Gadget, SingleClause) {
  FiniteStructure s = s1();
  GadgetInstance g = threesat_to_expos(s, parse_dimacs("p cnf 3 1\n1 2 3 0\n"), s1_pair());
  EXPECT_EQ(count_binders(g.formula), 9u);
  Formula body = g.formula;
  while (body.kind() == Formula::Kind::Exists) body = body.body();
  EXPECT_EQ(top_level_conjuncts(body).size(), 4u);
  EXPECT_TRUE(brute_force_eval(s, g.formula));
  EXPECT_TRUE(oracle::holds(s, g.formula));
}

TEST(Gadget, Unsatisfiable) {
  FiniteStructure s = s1();
  GadgetInstance g = threesat_to_expos(s, parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"), s1_pair());
  EXPECT_FALSE(brute_force_eval(s, g.formula));
}

TEST(Gadget, NoClauses) {
  FiniteStructure s = s1();
  GadgetInstance g = threesat_to_expos(s, parse_dimacs("p cnf 2 0\n"), s1_pair());
  EXPECT_EQ(count_binders(g.formula), 6u);
  EXPECT_TRUE(brute_force_eval(s, g.formula));
}

TEST(Gadget, BlocksAreFreshAndDisjoint) {
  FiniteStructure s = s1();
  WitnessPair w = s1_pair();
  GadgetInstance g = threesat_to_expos(s, parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 0\n"), w);
  ASSERT_EQ(g.blocks.size(), 3u);
  std::set<std::string> seen;
  for (const auto& b : g.blocks) {
    EXPECT_EQ(b.size(), w.arity());
    for (const auto& v : b) {
      EXPECT_TRUE(seen.insert(v).second);
      EXPECT_EQ(std::count(w.vars.begin(), w.vars.end(), v), 0);
    }
  }
  EXPECT_EQ(g.blocks[0][0], "v1_b1");
}

TEST(Gadget, NamesAvoidWitnessVariables) {
  FiniteStructure s = s1();
  WitnessPair w = s1_pair();
  std::map<std::string, std::string> ren = {{"x", "v1_b1"}, {"y", "v1_b2"}, {"z", "q"}};
  WitnessPair clash{rename_free(w.psi0, ren), rename_free(w.psi1, ren), {"v1_b1", "v1_b2", "q"}};
  GadgetInstance g = threesat_to_expos(s, parse_dimacs("p cnf 1 1\n1 0\n"), clash);
  EXPECT_NE(g.blocks[0][0], "v1_b1");
  EXPECT_TRUE(brute_force_eval(s, g.formula));
}

TEST(Gadget, Errors) {
  FiniteStructure s = s1();
  EXPECT_THROW(threesat_to_expos(s, parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), s1_pair()), PreconditionError);
  GadgetOptions strict;
  strict.pad_short_clauses = false;
  EXPECT_THROW(threesat_to_expos(s, parse_dimacs("p cnf 2 1\n1 2 0\n"), s1_pair(), strict),
               PreconditionError);
  WitnessPair bogus = s1_pair();
  bogus.psi1 = bogus.psi0;
  EXPECT_THROW(threesat_to_expos(s, parse_dimacs("p cnf 1 1\n1 0\n"), bogus), PreconditionError);
}

TEST(Gadget, MatchesSatisfiabilityOnRandomCnfs) {
  FiniteStructure s = s1();
  WitnessPair w = s1_pair();
  gen::Rng rng(71);
  for (int i = 0; i < 60; ++i) {
    CNF cnf = gen::random_cnf(rng, 2, 3, 1, 3);
    GadgetInstance g = threesat_to_expos(s, cnf, w);
    EXPECT_EQ(brute_force_eval(s, g.formula), oracle::cnf_sat(cnf)) << print_dimacs(cnf);
    EXPECT_EQ(top_level_conjuncts([&] {
                Formula b = g.formula;
                while (b.kind() == Formula::Kind::Exists) b = b.body();
                return b;
              }())
                  .size(),
              cnf.num_vars + cnf.clauses.size());
  }
}

TEST(Embed, Examples) {
  FiniteStructure s = s1();
  WitnessPair w = s1_pair();
  GadgetInstance g = boolean_embed(s, parse_prop("1"), w);
  EXPECT_TRUE(brute_force_eval(s, g.formula));
  GadgetInstance h = boolean_embed(s, parse_prop("1 & -1"), w);
  EXPECT_FALSE(brute_force_eval(s, h.formula));
}

TEST(Embed, MatchesPropositionalSatisfiability) {
  FiniteStructure p1 = powerset_algebra(1);
  WitnessPair w = *classify(p1).witness;  // d = 1 keeps brute force cheap
  gen::Rng rng(73);
  for (int i = 0; i < 100; ++i) {
    const int n = gen::uniform(rng, 1, 4);
    PropFormula p = gen::random_prop(rng, n, gen::uniform(rng, 1, 7));
    GadgetInstance g = boolean_embed(p1, p, w, n);
    EXPECT_EQ(brute_force_eval(p1, g.formula), oracle::prop_sat(p, n)) << to_string(p);
    EXPECT_EQ(prop_satisfiable(p), oracle::prop_sat(p, n));
  }
}

TEST(Embed, AgreesWithGadgetOnThreeCnf) {
  FiniteStructure s = s1();
  WitnessPair w = s1_pair();
  gen::Rng rng(79);
  for (int i = 0; i < 30; ++i) {
    CNF cnf = gen::random_cnf(rng, 2, 2, 3, 3);
    Formula a = threesat_to_expos(s, cnf, w).formula;
    Formula b = boolean_embed(s, cnf_to_prop(cnf), w, cnf.num_vars).formula;
    EXPECT_EQ(a, b);
    EXPECT_EQ(brute_force_eval(s, a), brute_force_eval(s, b));
  }
}

TEST(Product, SingletonProduct) {
  FiniteStructure p = product_structure(r1r2());
  EXPECT_EQ(p.signature().relations().size(), 1u);
  EXPECT_EQ(p.signature().relations()[0].arity, 2);
  EXPECT_EQ(p.relation(product_relation_name(r1r2())).tuples(), (std::vector<Tuple>{{0, 1}}));
}

TEST(Product, SingleRelationIsIdentity) {
  FiniteStructure s = s1();
  FiniteStructure p = product_structure(s);
  EXPECT_EQ(p.relation("NEQ").tuples(), s.relation("NEQ").tuples());
  Formula f = parse_formula("E x. E y. NEQ(x,y)", s.signature());
  EXPECT_EQ(product_rewrite(f, s), f);
}

TEST(Product, RewriteExamples) {
  FiniteStructure s = r1r2();
  FiniteStructure p = product_structure(s);
  Formula same = parse_formula("E x. R1(x) & R2(x)", s.signature());
  Formula apart = parse_formula("E x. E y. R1(x) & R2(y)", s.signature());
  EXPECT_FALSE(brute_force_eval(s, same));
  EXPECT_FALSE(brute_force_eval(p, product_rewrite(same, s)));
  EXPECT_TRUE(brute_force_eval(s, apart));
  EXPECT_TRUE(brute_force_eval(p, product_rewrite(apart, s)));
  EXPECT_EQ(print_formula(product_rewrite(same, s)),
            "E x. (E p1_2. R1_x_R2(x,p1_2)) & (E p2_1. R1_x_R2(p2_1,x))");
}

TEST(Product, Errors) {
  Signature sig;
  sig.add_relation("R", 1).add_relation("S", 1);
  FiniteStructure s("e", sig, 2);
  s.set_relation("R", std::vector<Tuple>{{0}});
  EXPECT_THROW(product_structure(s), PreconditionError);
  EXPECT_THROW(product_structure(powerset_algebra(1)), PreconditionError);
  Limits l;
  l.max_product_arity = 1;
  EXPECT_THROW(product_structure(r1r2(), l), LimitError);
  Signature other;
  other.add_relation("Q", 1);
  EXPECT_THROW(product_rewrite(parse_formula("E x. Q(x)", other), r1r2()), SignatureError);
}

TEST(Product, RoundTripOnRandomStructures) {
  gen::Rng rng(83);
  for (int i = 0; i < 50; ++i) {
    gen::StructureOptions o;
    o.min_relations = 2;
    o.max_relations = 3;
    o.max_arity = 2;
    FiniteStructure s = gen::random_structure(rng, o);
    FiniteStructure p = product_structure(s);
    std::size_t expected = 1;
    for (const auto& sym : s.signature().relations()) expected *= s.relation(sym.name).size();
    EXPECT_EQ(p.relation(product_relation_name(s)).size(), expected);
    gen::SentenceOptions so;
    so.max_bound_vars = 3;
    so.max_atoms = 3;
    Formula f = gen::random_sentence(rng, s.signature(), so);
    EXPECT_EQ(brute_force_eval(p, product_rewrite(f, s)), brute_force_eval(s, f)) << print_formula(f);
  }
}

TEST(SatToBa, Examples) {
  Formula f = sat_to_ba_expos(parse_dimacs("p cnf 2 1\n1 -2 0\n"));
  EXPECT_EQ(print_formula(f), "E v1. E v2. NEQ(join(v1,c(v2)),zero)");
  EXPECT_TRUE(brute_force_eval(powerset_algebra(1), f));
  Formula g = sat_to_ba_expos(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"));
  EXPECT_EQ(print_formula(g), "E v1. NEQ(meet(v1,c(v1)),zero)");
  for (int k = 1; k <= 3; ++k) EXPECT_FALSE(brute_force_eval(powerset_algebra(k), g));
  EXPECT_THROW(sat_to_ba_expos(parse_dimacs("p cnf 2 0\n")), PreconditionError);
}

TEST(SatToBa, MatchesSatisfiability) {
  gen::Rng rng(89);
  const FiniteStructure p2 = powerset_algebra(2);
  for (int i = 0; i < 100; ++i) {
    CNF cnf = gen::random_cnf(rng, 4, 5);
    EXPECT_EQ(brute_force_eval(p2, sat_to_ba_expos(cnf)), oracle::cnf_sat(cnf)) << print_dimacs(cnf);
  }
}

TEST(NormalizeDiseq, CanonicalShape) {
  Atom a = normalize_diseq(Term::var("x"), Term::var("x"));
  EXPECT_EQ(to_string(a), "NEQ(join(meet(x,c(x)),meet(c(x),x)),zero)");
  for (int k = 1; k <= 3; ++k) EXPECT_FALSE(atom_satisfiable(powerset_algebra(k), a));
  EXPECT_THROW(normalize_diseq(Term::apply("f", {Term::var("x")}), Term::var("x")), SignatureError);
}

TEST(NormalizeDiseq, XAgainstOne) {
  FiniteStructure p = powerset_algebra(2);
  Atom a = normalize_diseq(Term::var("x"), Term::apply("one"));
  Atom b{"NEQ", {Term::apply("c", {Term::var("x")}), Term::apply("zero")}};
  for (Element x = 0; x < 4; ++x) EXPECT_EQ(eval_atom(p, a, {{"x", x}}), eval_atom(p, b, {{"x", x}}));
}

TEST(NormalizeDiseq, EquivalentOnRandomPairs) {
  gen::Rng rng(97);
  const FiniteStructure p = powerset_algebra(3);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int i = 0; i < 40; ++i) {
    Term l = gen::random_term(rng, p.signature(), vars, 4);
    Term r = gen::random_term(rng, p.signature(), vars, 4);
    Atom orig{"NEQ", {l, r}};
    Atom norm = normalize_diseq(l, r);
    for (Element x = 0; x < 8; ++x)
      for (Element y = 0; y < 8; ++y)
        for (Element z = 0; z < 8; ++z) {
          Assignment a{{"x", x}, {"y", y}, {"z", z}};
          ASSERT_EQ(eval_atom(p, orig, a), eval_atom(p, norm, a));
        }
  }
}
