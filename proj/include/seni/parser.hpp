#pragma once

#include "ast.hpp"
#include "lexer.hpp"

#include <span>
#include <string_view>

namespace seni
{

// Parses a whole source file. The first error aborts with parse_error.
program_ast parse( std::span<const token> tokens, std::string file = "<input>" );

// Convenience: tokenize + parse.
program_ast parse_source( std::string_view source, std::string file = "<input>" );

// Parses a standalone expression (props, properties, sat formulas).
expr_ptr parse_expression( std::string_view source );

// Parses a standalone spec expression.
spec_ptr parse_spec_expression( std::string_view source );

} // namespace seni
