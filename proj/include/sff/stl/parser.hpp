#pragma once

#include <set>
#include <string>

#include "sff/stl/ast.hpp"

namespace sff::stl {

// Parses formula text against a set of known predicate names.
//
// Grammar (weakest to tightest binding: `|`, `&`, `U[a,b]`, prefix ops):
//   formula  := or ;  or := and ("|" and)* ;  and := until ("&" until)* ;
//   until    := unary ("U[" num "," num "]" unary)? ;
//   unary    := "!" unary | "G[" num "," num "]" unary | "F[" num "," num "]" unary
//             | "(" formula ")" | "true" | IDENT ;
//
// Throws SyntaxError, UnknownPredicate, BadInterval.
Formula parse_stl(const std::string& text, const std::set<std::string>& table);

}  // namespace sff::stl
