#include <gtest/gtest.h>

#include "epos/error.hpp"
#include "epos/generators.hpp"
#include "epos/syntax.hpp"

using namespace epos;

namespace {

Signature neq_sig() {
  Signature s;
  s.add_relation("NEQ", 2);
  return s;
}

Signature rs_sig() {
  Signature s;
  s.add_relation("R", 1).add_relation("S", 2).add_relation("A", 1).add_relation("B", 1).add_relation("C", 1);
  return s;
}

Atom neq(const std::string& a, const std::string& b) { return Atom{"NEQ", {Term::var(a), Term::var(b)}}; }

}  // namespace

TEST(Signature, RejectsDuplicatesAcrossKinds) {
  Signature s;
  s.add_relation("R", 2);
  EXPECT_THROW(s.add_function("R", 1), Error);
  EXPECT_THROW(s.add_relation("R", 1), Error);
  EXPECT_EQ(s.relation_arity("R"), 2);
  EXPECT_FALSE(s.function_arity("R"));
}

TEST(Parse, NestedExists) {
  Formula f = parse_formula("E x. E y. NEQ(x,y)", neq_sig());
  Formula expected = Formula::exists("x", Formula::exists("y", Formula::atom(neq("x", "y"))));
  EXPECT_EQ(f, expected);
}

TEST(Parse, ArityMismatch) {
  EXPECT_THROW(parse_formula("NEQ(x)", neq_sig()), SignatureError);
}

TEST(Parse, UndeclaredSymbols) {
  EXPECT_THROW(parse_formula("E x. EQ(x,x)", neq_sig()), SignatureError);
  EXPECT_THROW(parse_formula("E x. NEQ(f(x),x)", neq_sig()), SignatureError);
}

TEST(Parse, ConstantsResolveBySignature) {
  Signature s;
  s.add_relation("NEQ", 2).add_function("union", 2).add_function("zero", 0).add_function("one", 0);
  Formula f = parse_formula("E x. NEQ(union(x,one), zero)", s);
  const Atom& a = f.body().atom();
  ASSERT_EQ(a.args.size(), 2u);
  EXPECT_EQ(a.args[0].name, "union");
  EXPECT_TRUE(a.args[0].args[0].is_variable());
  EXPECT_FALSE(a.args[0].args[1].is_variable());
  EXPECT_EQ(a.args[0].args[1].name, "one");
  EXPECT_FALSE(a.args[1].is_variable());
  EXPECT_EQ(a.args[1].name, "zero");
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  try {
    parse_formula("E x. NEQ(x,", neq_sig());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GE(e.position(), 10u);
  }
  EXPECT_THROW(parse_formula("E x NEQ(x,x)", neq_sig()), ParseError);
  EXPECT_THROW(parse_formula("NEQ(x,x) &", neq_sig()), ParseError);
  EXPECT_THROW(parse_formula("", neq_sig()), ParseError);
}

TEST(Parse, AndBindsTighterThanOr) {
  Signature s = rs_sig();
  Formula f = parse_formula("A(x) | B(x) & C(x)", s);
  ASSERT_EQ(f.kind(), Formula::Kind::Or);
  EXPECT_EQ(f.rhs().kind(), Formula::Kind::And);
}

TEST(Parse, ExistsScopesToTheRight) {
  Formula f = parse_formula("E x. A(x) | B(x)", rs_sig());
  ASSERT_EQ(f.kind(), Formula::Kind::Exists);
  EXPECT_EQ(f.body().kind(), Formula::Kind::Or);
}

TEST(Print, CanonicalForms) {
  EXPECT_EQ(print_formula(Formula::exists("x", Formula::atom(neq("x", "x")))), "E x. NEQ(x,x)");
  Signature s = rs_sig();
  Formula f = Formula::conj(Formula::disj(parse_formula("A(x)", s), parse_formula("B(x)", s)),
                            parse_formula("C(x)", s));
  EXPECT_EQ(print_formula(f), "(A(x) | B(x)) & C(x)");
}

TEST(Print, RoundTripsGeneratedFormulas) {
  gen::Rng rng(11);
  Signature s;
  s.add_relation("R", 2).add_relation("P", 1).add_function("f", 1).add_function("k", 0);
  for (int i = 0; i < 300; ++i) {
    gen::SentenceOptions o;
    o.max_term_depth = i % 3;
    Formula f = gen::random_sentence(rng, s, o);
    EXPECT_EQ(parse_formula(print_formula(f), s), f) << print_formula(f);
  }
}

TEST(Print, RoundTripsHandBuiltShapes) {
  Signature s = rs_sig();
  Formula a = parse_formula("A(x)", s), b = parse_formula("B(x)", s), c = parse_formula("C(x)", s);
  const std::vector<Formula> shapes = {
      Formula::conj(a, Formula::conj(b, c)),
      Formula::disj(a, Formula::disj(b, c)),
      Formula::conj(Formula::exists("x", a), b),
      Formula::conj(a, Formula::exists("x", Formula::disj(b, c))),
      Formula::disj(Formula::exists("x", a), Formula::exists("y", b)),
      Formula::conj(Formula::disj(a, b), Formula::disj(b, c)),
  };
  for (const auto& f : shapes) EXPECT_EQ(parse_formula(print_formula(f), s), f) << print_formula(f);
}

TEST(FreeVariables, Examples) {
  Signature s = neq_sig();
  EXPECT_EQ(free_variables(parse_formula("E x. NEQ(x,y)", s)), std::vector<std::string>{"y"});
  EXPECT_TRUE(free_variables(parse_formula("E x. E y. NEQ(x,y)", s)).empty());
  EXPECT_EQ(free_variables(parse_formula("NEQ(x,y) & (E y. NEQ(y,z))", s)),
            (std::vector<std::string>{"x", "y", "z"}));
}

TEST(FreeVariables, GeneratedSentencesAreClosed) {
  gen::Rng rng(5);
  Signature s = rs_sig();
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(is_sentence(gen::random_sentence(rng, s, {})));
}

TEST(RenameFree, AvoidsCapture) {
  Signature s = neq_sig();
  Formula f = parse_formula("E y. NEQ(x,y)", s);
  Formula g = rename_free(f, {{"x", "y"}});
  EXPECT_EQ(free_variables(g), std::vector<std::string>{"y"});
  ASSERT_EQ(g.kind(), Formula::Kind::Exists);
  EXPECT_NE(g.var(), "y");
}

TEST(Prenex, PullsQuantifiersForward) {
  Signature s = rs_sig();
  PPSentence p = to_prenex_pp(parse_formula("E x. (R(x) & E y. S(x,y))", s));
  EXPECT_EQ(p.variables, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(p.atoms.size(), 2u);
  EXPECT_EQ(to_string(p.atoms[0]), "R(x)");
  EXPECT_EQ(to_string(p.atoms[1]), "S(x,y)");
}

TEST(Prenex, RenamesSiblingBinders) {
  Signature s = rs_sig();
  PPSentence p = to_prenex_pp(parse_formula("(E x. R(x)) & (E x. A(x))", s));
  EXPECT_EQ(p.variables, (std::vector<std::string>{"x", "x_1"}));
  EXPECT_EQ(to_string(p.atoms[0]), "R(x)");
  EXPECT_EQ(to_string(p.atoms[1]), "A(x_1)");
}

TEST(Prenex, RejectsDisjunction) {
  EXPECT_THROW(to_prenex_pp(parse_formula("E x. A(x) | B(x)", rs_sig())), PreconditionError);
}

TEST(Dimacs, ParsesClausesInOrder) {
  CNF c = parse_dimacs("p cnf 2 1\n1 -2 0\n");
  EXPECT_EQ(c.num_vars, 2);
  EXPECT_EQ(c.clauses, (std::vector<std::vector<int>>{{1, -2}}));
  CNF d = parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0\n");
  EXPECT_EQ(d.clauses, (std::vector<std::vector<int>>{{1}, {-1}}));
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n1\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p dnf 1 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("1 0\n"), ParseError);
}

TEST(Dimacs, PrintRoundTrip) {
  CNF c = parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 0\n");
  EXPECT_EQ(parse_dimacs(print_dimacs(c)), c);
}
