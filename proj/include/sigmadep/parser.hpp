#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sigmadep/field.hpp"

namespace sigmadep {

// Grammar (precedence climbing, lowest first):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)?        -- binds tighter than unary minus
//   exponent:= ['-'] integer | '(' ['-'] integer ')'
//   primary := integer | identifier | '(' expr ')'
FieldElement parse_expression(std::string_view text, const std::vector<std::string>& names);
FieldElement parse_expression(std::string_view text, const TowerSpec& tower);

// "[[a, b], [c, d]]"; rows must have equal length.
std::vector<std::vector<FieldElement>> parse_matrix(std::string_view text, const TowerSpec& tower);
// Comma-separated list of expressions.
std::vector<FieldElement> parse_list(std::string_view text, const TowerSpec& tower);

// Re-parseable renderings.
std::string format_poly(const Poly& p, const std::vector<std::string>& names);
std::string to_string(const FieldElement& f, const std::vector<std::string>& names);
std::string to_string(const FieldElement& f, const TowerSpec& tower);
std::string to_string(const BigRational& q);

// One tower level: "name" (both actions identity) or
// "name: phi=<expr>, sigma=<expr>" where each image is name, name + c or
// c*name with c over the previously declared variables.
VarDecl parse_var_decl(std::string_view text, const std::vector<VarDecl>& below);
// Declarations bottom to top; the last one is the equation variable.
TowerSpec parse_tower(const std::vector<std::string>& decls);
// Inverse of parse_var_decl.
std::string format_var_decl(const TowerSpec& tower, int v);

}  // namespace sigmadep
