#include "epos/boolean_algebra.hpp"

#include <string>

#include "epos/error.hpp"

namespace epos::ba {

Signature signature() {
  Signature sig;
  sig.add_relation(kNeq, 2);
  sig.add_function(kMeet, 2);
  sig.add_function(kJoin, 2);
  sig.add_function(kComplement, 1);
  sig.add_function(kZero, 0);
  sig.add_function(kOne, 0);
  return sig;
}

CatalogEntry catalog_entry(int k, const SearchBounds& bounds) {
  if (k < 1 || k > kMaxCatalogBase)
    throw PreconditionError("powerset base " + std::to_string(k) + " outside 1.." +
                            std::to_string(kMaxCatalogBase));
  FiniteStructure s = powerset_algebra(k);
  ClassificationResult r = classify(s, bounds);
  return {std::move(s), std::move(r)};
}

Element eval(const Term& t, int k, const Assignment& a) {
  const Element full = (Element{1} << k) - 1;
  if (t.is_variable()) {
    auto it = a.find(t.name);
    if (it == a.end()) throw PreconditionError("unassigned variable '" + t.name + "'");
    return it->second & full;
  }
  const auto& args = t.args;
  const std::string& f = t.name;
  if (f == kZero && args.empty()) return 0;
  if (f == kOne && args.empty()) return full;
  if (f == kComplement && args.size() == 1) return full & ~eval(args[0], k, a);
  if (f == kMeet && args.size() == 2) return eval(args[0], k, a) & eval(args[1], k, a);
  if (f == kJoin && args.size() == 2) return eval(args[0], k, a) | eval(args[1], k, a);
  throw SignatureError("'" + f + "' is not a Boolean-algebra operation of that arity");
}

}  // namespace epos::ba
