#pragma once

#include "source.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace seni
{

enum class token_kind
{
    ident,
    int_lit,
    string_lit,
    type_name,      // int, bool, string

    // keywords
    kw_system,
    kw_record,
    kw_state,
    kw_action,
    kw_init,
    kw_spec,
    kw_prop,
    kw_func,
    kw_import,
    kw_refines,
    kw_static,
    kw_property,
    kw_always,
    kw_null,
    kw_true,
    kw_false,
    kw_if,
    kw_then,
    kw_else,
    kw_mod,

    // punctuation
    lbrace,
    rbrace,
    lparen,
    rparen,
    lbracket,
    rbracket,
    semicolon,
    comma,
    colon,
    double_colon,
    arrow,          // ->
    at,
    dot,
    bar,            // |
    double_bar,     // ||
    amp,            // &
    bang,           // !
    eq,             // =
    neq,            // /=
    implies,        // =>
    lt,
    le,
    gt,
    ge,
    plus,
    minus,
    star,
    slash,
    ellipsis,       // ...
};

struct token
{
    token_kind kind;
    std::string lexeme;
    int line = 1;
    int col = 1;
    std::size_t offset = 0;

    [[nodiscard]] source_loc loc() const { return { line, col }; }
    [[nodiscard]] std::size_t end() const { return offset + lexeme.size(); }
};

// Human-readable spelling of a token kind, used in parse diagnostics.
std::string_view describe( token_kind kind );

bool is_keyword( token_kind kind );

// Splits source text into tokens. Whitespace and `//` comments are skipped;
// lexemes are verbatim slices of the source, so gaps between consecutive
// tokens are exactly the skipped text. Throws lex_error.
std::vector<token> tokenize( std::string_view source );

} // namespace seni
