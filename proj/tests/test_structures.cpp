#include <gtest/gtest.h>

#include "epos/error.hpp"
#include "epos/generators.hpp"
#include "epos/limits.hpp"
#include "epos/structure_io.hpp"
#include "epos/structures.hpp"

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

Term v(const std::string& n) { return Term::var(n); }
Term ap(const std::string& f, std::vector<Term> a = {}) { return Term::apply(f, std::move(a)); }

}  // namespace

TEST(Structure, RejectsOutOfRangeTuples) {
  Signature sig;
  sig.add_relation("R", 1);
  FiniteStructure s("s", sig, 2);
  EXPECT_THROW(s.set_relation("R", std::vector<Tuple>{{2}}), Error);
  EXPECT_THROW(s.set_relation("R", std::vector<Tuple>{{0, 1}}), Error);
}

TEST(Structure, FunctionsMustBeTotal) {
  EXPECT_THROW(Function::from_table(1, 2, {0}), Error);
  EXPECT_THROW(Function::from_table(1, 2, {0, 2}), Error);
  Function f = Function::from_table(1, 2, {1, 0});
  const Element zero = 0;
  EXPECT_EQ(f.apply(std::span<const Element>(&zero, 1)), 1u);
}

TEST(EvalTerm, PowersetExamples) {
  FiniteStructure p1 = powerset_algebra(1);
  EXPECT_EQ(eval_term(p1, ap("c", {v("x")}), {{"x", 0}}), 1u);
  EXPECT_EQ(eval_term(p1, ap("meet", {ap("one"), ap("zero")}), {}), 0u);
  FiniteStructure p2 = powerset_algebra(2);
  EXPECT_EQ(eval_term(p2, ap("join", {v("x"), v("y")}), {{"x", 1}, {"y", 2}}), 3u);
}

TEST(EvalTerm, UnboundVariable) {
  EXPECT_THROW(eval_term(powerset_algebra(1), v("x"), {}), Error);
}

TEST(EvalAtom, Examples) {
  FiniteStructure s = s1();
  Atom xy{"NEQ", {v("x"), v("y")}}, xx{"NEQ", {v("x"), v("x")}};
  EXPECT_TRUE(eval_atom(s, xy, {{"x", 0}, {"y", 1}}));
  EXPECT_FALSE(eval_atom(s, xx, {{"x", 0}}));
  EXPECT_TRUE(eval_atom(powerset_algebra(1), Atom{"NEQ", {ap("c", {v("x")}), v("x")}}, {{"x", 0}}));
}

TEST(AtomSatisfiable, FiniteAndOracle) {
  FiniteStructure s = s1();
  EXPECT_TRUE(atom_satisfiable(s, Atom{"NEQ", {v("x"), v("y")}}));
  EXPECT_FALSE(atom_satisfiable(s, Atom{"NEQ", {v("x"), v("x")}}));
  EXPECT_FALSE(atom_satisfiable(powerset_algebra(1),
                                Atom{"NEQ", {ap("meet", {v("x"), ap("c", {v("x")})}), ap("zero")}}));

  AtomOracle n = nat_neq_oracle(false);
  EXPECT_TRUE(atom_satisfiable(n, Atom{"NEQ", {v("x"), v("y")}}));
  EXPECT_FALSE(atom_satisfiable(n, Atom{"NEQ", {v("x"), v("x")}}));
  EXPECT_TRUE(n.locally_refutable);
  AtomOracle ne = nat_neq_oracle(true);
  EXPECT_TRUE(atom_satisfiable(ne, Atom{"EQ", {v("x"), v("y")}}));
  EXPECT_FALSE(ne.locally_refutable);
}

TEST(AtomSatisfiable, OracleIgnoresVariableNames) {
  AtomOracle n = nat_neq_oracle(true);
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{{"x", "y"}, {"u", "w"}, {"q", "q"}, {"z", "z"}}) {
    EXPECT_EQ(atom_satisfiable(n, Atom{"NEQ", {v(a), v(b)}}), a != b);
  }
}

TEST(AtomSatisfiable, AgreesWithFullEnumeration) {
  gen::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    FiniteStructure s = gen::random_structure(rng, {});
    for (const auto& sym : s.signature().relations()) {
      // Every variable pattern over at most three names.
      std::vector<std::string> names = {"x", "y", "z"};
      std::vector<int> idx(static_cast<std::size_t>(sym.arity), 0);
      while (true) {
        Atom a{sym.name, {}};
        for (int k : idx) a.args.push_back(v(names[static_cast<std::size_t>(k)]));
        bool expected = false;
        for (Element x = 0; x < s.domain_size(); ++x)
          for (Element y = 0; y < s.domain_size(); ++y)
            for (Element z = 0; z < s.domain_size(); ++z)
              expected = expected || eval_atom(s, a, {{"x", x}, {"y", y}, {"z", z}});
        EXPECT_EQ(atom_satisfiable(s, a), expected);
        int p = sym.arity - 1;
        while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == 3) idx[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) break;
      }
    }
  }
}

TEST(Powerset, Shapes) {
  FiniteStructure p1 = powerset_algebra(1);
  EXPECT_EQ(p1.domain_size(), 2u);
  EXPECT_EQ(p1.relation("NEQ").tuples(), (std::vector<Tuple>{{0, 1}, {1, 0}}));
  FiniteStructure p2 = powerset_algebra(2);
  EXPECT_EQ(p2.domain_size(), 4u);
  auto table = p2.function("meet").table();
  ASSERT_EQ(table.size(), 16u);
  for (Element a = 0; a < 4; ++a)
    for (Element b = 0; b < 4; ++b) EXPECT_EQ(table[a * 4 + b], a & b);
  EXPECT_THROW(powerset_algebra(0), Error);
  EXPECT_THROW(powerset_algebra(kMaxPowersetBase + 1), Error);
  EXPECT_EQ(powerset_algebra(kMaxPowersetBase).domain_size(), std::size_t{1} << kMaxPowersetBase);
}

TEST(Powerset, AlgebraLaws) {
  for (int k = 1; k <= 3; ++k) {
    FiniteStructure p = powerset_algebra(k);
    const Element n = static_cast<Element>(p.domain_size());
    auto meet = [&](Element a, Element b) { return eval_term(p, ap("meet", {v("a"), v("b")}), {{"a", a}, {"b", b}}); };
    auto join = [&](Element a, Element b) { return eval_term(p, ap("join", {v("a"), v("b")}), {{"a", a}, {"b", b}}); };
    auto comp = [&](Element a) { return eval_term(p, ap("c", {v("a")}), {{"a", a}}); };
    const Element zero = eval_term(p, ap("zero"), {}), one = eval_term(p, ap("one"), {});
    for (Element a = 0; a < n; ++a) {
      EXPECT_EQ(comp(comp(a)), a);
      EXPECT_EQ(meet(a, comp(a)), zero);
      EXPECT_EQ(join(a, comp(a)), one);
      for (Element b = 0; b < n; ++b) {
        EXPECT_EQ(meet(a, b), meet(b, a));
        EXPECT_EQ(join(a, b), join(b, a));
        EXPECT_EQ(meet(a, join(a, b)), a);
        EXPECT_EQ(join(a, meet(a, b)), a);
        for (Element c = 0; c < n; ++c) {
          EXPECT_EQ(meet(a, meet(b, c)), meet(meet(a, b), c));
          EXPECT_EQ(join(a, join(b, c)), join(join(a, b), c));
        }
      }
    }
  }
}

TEST(StructureFormat, RoundTrip) {
  const std::string text =
      "# demo\n"
      "structure demo\n"
      "domain 3\n"
      "rel R 2 { 0 1 ; 2 2 }\n"
      "rel P 1 { }\n"
      "fun f 1 { 0 -> 1 ; 1 -> 2 ; 2 -> 0 }\n"
      "const k 2\n";
  FiniteStructure s = parse_structure(text);
  EXPECT_EQ(s.name(), "demo");
  EXPECT_EQ(s.domain_size(), 3u);
  EXPECT_EQ(s.relation("R").tuples(), (std::vector<Tuple>{{0, 1}, {2, 2}}));
  EXPECT_TRUE(s.relation("P").tuples().empty());
  EXPECT_EQ(eval_term(s, ap("f", {ap("k")}), {}), 0u);
  FiniteStructure t = parse_structure(print_structure(s));
  EXPECT_EQ(print_structure(t), print_structure(s));
  EXPECT_EQ(t.signature().symbols().size(), 4u);
}

TEST(StructureFormat, ZeroAryFunctionSyntax) {
  FiniteStructure s = parse_structure("structure z\ndomain 2\nfun k 0 { -> 1 }\nrel R 1 { 1 }\n");
  EXPECT_EQ(eval_term(s, ap("k"), {}), 1u);
}

TEST(StructureFormat, Errors) {
  EXPECT_THROW(parse_structure("domain 2\n"), ParseError);
  EXPECT_THROW(parse_structure("structure a\ndomain 2\nrel R 1 { 2 }\n"), Error);
  EXPECT_THROW(parse_structure("structure a\ndomain 2\nfun f 1 { 0 -> 1 }\n"), Error);
  EXPECT_THROW(parse_structure("structure a\ndomain 2\nrel R 1 { 0 }\nrel R 1 { 1 }\n"), Error);
  EXPECT_THROW(parse_structure("structure a\ndomain 2\nrel R 2 { 0 }\n"), Error);
}

TEST(Limits, Overrides) {
  Limits l = apply_overrides({}, "max_vars=12,max_branches=4096");
  EXPECT_EQ(l.max_vars, 12);
  EXPECT_EQ(l.max_branches, 4096u);
  EXPECT_THROW(apply_overrides({}, "bogus=1"), PreconditionError);
  EXPECT_THROW(apply_overrides({}, "max_vars=-3"), PreconditionError);
  EXPECT_THROW(apply_overrides({}, "max_vars"), PreconditionError);
}
