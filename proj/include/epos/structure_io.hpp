#ifndef EPOS_STRUCTURE_IO_HPP
#define EPOS_STRUCTURE_IO_HPP

#include <string>
#include <string_view>

#include "epos/structures.hpp"

namespace epos {

/// Line-oriented structure format:
///
///   structure NAME
///   domain N
///   rel R 2 { 0 1 ; 1 0 }
///   fun f 1 { 0 -> 1 ; 1 -> 0 }
///   const zero 0
///
/// '#' starts a comment. Symbols are declared in file order. Function tables
/// must be total.
FiniteStructure parse_structure(std::string_view text);
std::string print_structure(const FiniteStructure& s);

}  // namespace epos

#endif  // EPOS_STRUCTURE_IO_HPP
