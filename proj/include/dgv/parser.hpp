#ifndef DGV_PARSER_HPP
#define DGV_PARSER_HPP

#include <string>
#include <vector>

#include "dgv/ratfunc.hpp"

namespace dgv {

// Parses an expression in the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? atom ('^' uint)?
//   atom   := rational | ident | '(' expr ')'
//   rational := int ('/' uint)? ; ident := [A-Za-z_][A-Za-z0-9_]*
// returning the canonical rational function equal to it.  Variables must
// appear in `variables` (the enclosing chart's coordinates).
RationalFunction parse_expression(const std::string& text,
                                  const std::vector<std::string>& variables);

}  // namespace dgv

#endif
