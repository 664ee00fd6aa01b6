#pragma once

#include <string>
#include <vector>

#include "opmax/ast.hpp"
#include "opmax/lexer.hpp"

namespace opmax {

// Parses a full model (one \begin{align}...\end{align} block).
ast::Model parse_model(const std::vector<Token>& tokens);
ast::Model parse_model_text(const std::string& source);

// Parses an instance-data file: one `lhs = rhs` assignment per line,
// blank lines and %-comments ignored. Duplicate lhs is an error.
std::vector<ast::Assignment> parse_instance_data(const std::string& source);

}  // namespace opmax
