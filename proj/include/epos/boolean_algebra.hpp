#ifndef EPOS_BOOLEAN_ALGEBRA_HPP
#define EPOS_BOOLEAN_ALGEBRA_HPP

#include "epos/classifier.hpp"
#include "epos/structures.hpp"
#include "epos/syntax.hpp"

// Finite powerset algebras (2^{1..k}; NEQ, meet, join, c, zero, one).
//
// The infinite algebra over the naturals is locally refutable: a system of
// disequalities is satisfiable iff each one is, once every t1 != t2 is
// normalised to (t1 xor t2) != 0 (see normalize_diseq). No engine for the
// infinite case exists here. The finite algebras are the opposite: NEQ(x,zero)
// and NEQ(x,one) are individually satisfiable but jointly not when k = 1,
// and larger k need longer conjunctions, so they carry hardness.
namespace epos::ba {

inline constexpr const char* kNeq = "NEQ";
inline constexpr const char* kMeet = "meet";
inline constexpr const char* kJoin = "join";
inline constexpr const char* kComplement = "c";
inline constexpr const char* kZero = "zero";
inline constexpr const char* kOne = "one";

/// NEQ/2; meet/2, join/2, c/1, zero/0, one/0 in this declaration order.
Signature signature();

/// Largest k for which catalog_entry runs the classifier.
inline constexpr int kMaxCatalogBase = 3;

struct CatalogEntry {
  FiniteStructure structure;
  ClassificationResult classification;
};

/// powerset_algebra(k) with its classification. Throws PreconditionError for
/// k outside 1..kMaxCatalogBase.
CatalogEntry catalog_entry(int k, const SearchBounds& bounds = {});

/// Value of a term over the BA signature in powerset_algebra(k), with
/// variables looked up in `a`. Independent of FiniteStructure tables.
Element eval(const Term& t, int k, const Assignment& a);

}  // namespace epos::ba

#endif  // EPOS_BOOLEAN_ALGEBRA_HPP
