#include <gtest/gtest.h>

#include "epos/classifier.hpp"
#include "epos/error.hpp"
#include "epos/generators.hpp"
#include "epos/structure_io.hpp"

using namespace epos;

TEST(Generators, SameSeedSameOutput) {
  gen::Rng a(5), b(5);
  for (int i = 0; i < 20; ++i) {
    FiniteStructure s = gen::random_structure(a, {});
    FiniteStructure t = gen::random_structure(b, {});
    EXPECT_EQ(print_structure(s), print_structure(t));
    EXPECT_EQ(gen::random_sentence(a, s.signature(), {}), gen::random_sentence(b, t.signature(), {}));
    EXPECT_EQ(gen::random_cnf(a, 4, 5), gen::random_cnf(b, 4, 5));
  }
}

TEST(Generators, StructureOptionsRespected) {
  gen::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    gen::StructureOptions o;
    o.validity = static_cast<gen::Validity>(i % 3);
    FiniteStructure s = gen::random_structure(rng, o);
    EXPECT_LE(s.domain_size(), 3u);
    EXPECT_GE(s.signature().relations().size(), 1u);
    EXPECT_LE(s.signature().relations().size(), 2u);
    for (const auto& sym : s.signature().relations()) {
      EXPECT_LE(sym.arity, 3);
      EXPECT_FALSE(s.relation(sym.name).empty());
    }
    if (o.validity == gen::Validity::AValid) EXPECT_FALSE(a_valid_witnesses(s).empty());
    if (o.validity == gen::Validity::NotAValid) EXPECT_TRUE(a_valid_witnesses(s).empty());
  }
  gen::StructureOptions impossible;
  impossible.max_domain = 1;
  impossible.validity = gen::Validity::NotAValid;
  EXPECT_THROW(gen::random_structure(rng, impossible), PreconditionError);
}

TEST(Generators, SentenceOptionsRespected) {
  gen::Rng rng(13);
  Signature sig;
  sig.add_relation("R", 2).add_relation("P", 1);
  for (int i = 0; i < 300; ++i) {
    gen::SentenceOptions o;
    Formula f = gen::random_sentence(rng, sig, o);
    EXPECT_TRUE(is_sentence(f));
    EXPECT_LE(count_atoms(f), 8u);
    EXPECT_LE(count_or_nodes(f), 3u);
    EXPECT_LE(count_binders(f), 6u);
  }
}

TEST(Generators, CnfShape) {
  gen::Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    CNF c = gen::random_cnf(rng, 3, 3, 3, 3);
    EXPECT_LE(c.num_vars, 3);
    EXPECT_GE(c.clauses.size(), 1u);
    for (const auto& cl : c.clauses) {
      EXPECT_EQ(cl.size(), 3u);
      for (int l : cl) EXPECT_LE(std::abs(l), c.num_vars);
    }
  }
}

TEST(Generators, EmptyRelationsKeepAValidity) {
  gen::Rng rng(19);
  gen::StructureOptions o;
  o.nonempty = false;
  o.empty_probability = 0.5;
  o.validity = gen::Validity::AValid;
  int with_empty = 0;
  for (int i = 0; i < 100; ++i) {
    FiniteStructure s = gen::random_structure(rng, o);
    EXPECT_FALSE(a_valid_witnesses(s).empty());
    for (const auto& r : s.signature().relations())
      if (s.relation(r.name).empty()) {
        ++with_empty;
        break;
      }
  }
  EXPECT_GT(with_empty, 20);
}
