#include "seni/lexer.hpp"

#include <charconv>
#include <unordered_map>

namespace seni
{

namespace
{

const std::unordered_map<std::string_view, token_kind>& keywords()
{
    static const std::unordered_map<std::string_view, token_kind> table = {
        { "system", token_kind::kw_system },     { "record", token_kind::kw_record },
        { "state", token_kind::kw_state },       { "action", token_kind::kw_action },
        { "init", token_kind::kw_init },         { "spec", token_kind::kw_spec },
        { "prop", token_kind::kw_prop },         { "func", token_kind::kw_func },
        { "import", token_kind::kw_import },     { "refines", token_kind::kw_refines },
        { "static", token_kind::kw_static },     { "property", token_kind::kw_property },
        { "always", token_kind::kw_always },     { "null", token_kind::kw_null },
        { "true", token_kind::kw_true },         { "false", token_kind::kw_false },
        { "if", token_kind::kw_if },             { "then", token_kind::kw_then },
        { "else", token_kind::kw_else },         { "mod", token_kind::kw_mod },
        { "int", token_kind::type_name },        { "bool", token_kind::type_name },
        { "string", token_kind::type_name },
    };
    return table;
}

bool ident_start( char c )
{
    return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || c == '_';
}

bool ident_char( char c )
{
    return ident_start( c ) || ( c >= '0' && c <= '9' );
}

class scanner
{
    std::string_view _src;
    std::size_t _pos = 0;
    int _line = 1;
    int _col = 1;
    std::vector<token> _out;

public:
    explicit scanner( std::string_view src ) : _src{ src } {}

    std::vector<token> run()
    {
        while ( _pos < _src.size() )
        {
            const char c = _src[ _pos ];

            if ( c == ' ' || c == '\t' || c == '\r' || c == '\n' )
            {
                advance( 1 );
                continue;
            }

            if ( c == '/' && peek( 1 ) == '/' )
            {
                while ( _pos < _src.size() && _src[ _pos ] != '\n' )
                    advance( 1 );
                continue;
            }

            if ( ident_start( c ) )
            {
                std::size_t len = 1;
                while ( _pos + len < _src.size() && ident_char( _src[ _pos + len ] ) )
                    ++len;

                const auto word = _src.substr( _pos, len );
                const auto it = keywords().find( word );
                emit( it == keywords().end() ? token_kind::ident : it->second, len );
                continue;
            }

            if ( c >= '0' && c <= '9' )
            {
                std::size_t len = 1;
                while ( _pos + len < _src.size() && _src[ _pos + len ] >= '0' && _src[ _pos + len ] <= '9' )
                    ++len;
                if ( _pos + len < _src.size() && ident_start( _src[ _pos + len ] ) )
                    throw lex_error( { _line, _col }, "malformed integer literal" );

                long long value = 0;
                const auto text = _src.substr( _pos, len );
                const auto [ ptr, ec ] = std::from_chars( text.data(), text.data() + text.size(), value );
                if ( ec != std::errc{} )
                    throw lex_error( { _line, _col }, "integer literal out of range" );
                emit( token_kind::int_lit, len );
                continue;
            }

            if ( c == '"' )
            {
                lex_string();
                continue;
            }

            lex_punct();
        }

        return std::move( _out );
    }

private:
    [[nodiscard]] char peek( std::size_t ahead ) const
    {
        return _pos + ahead < _src.size() ? _src[ _pos + ahead ] : '\0';
    }

    void advance( std::size_t n )
    {
        for ( std::size_t i = 0; i < n; ++i )
        {
            const auto c = static_cast<unsigned char>( _src[ _pos++ ] );
            if ( c == '\n' )
            {
                ++_line;
                _col = 1;
            }
            else if ( ( c & 0xC0 ) != 0x80 )
                ++_col;
        }
    }

    void emit( token_kind kind, std::size_t len )
    {
        _out.push_back( token{ kind, std::string{ _src.substr( _pos, len ) }, _line, _col, _pos } );
        advance( len );
    }

    void lex_string()
    {
        std::size_t len = 1;
        while ( true )
        {
            if ( _pos + len >= _src.size() || _src[ _pos + len ] == '\n' )
                throw lex_error( { _line, _col }, "unterminated string literal" );
            const char c = _src[ _pos + len ];
            if ( c == '\\' )
            {
                if ( _pos + len + 1 >= _src.size() )
                    throw lex_error( { _line, _col }, "unterminated string literal" );
                len += 2;
                continue;
            }
            ++len;
            if ( c == '"' )
                break;
        }
        emit( token_kind::string_lit, len );
    }

    void lex_punct()
    {
        const char c = _src[ _pos ];
        const char n = peek( 1 );

        switch ( c )
        {
        case '{': return emit( token_kind::lbrace, 1 );
        case '}': return emit( token_kind::rbrace, 1 );
        case '(': return emit( token_kind::lparen, 1 );
        case ')': return emit( token_kind::rparen, 1 );
        case '[': return emit( token_kind::lbracket, 1 );
        case ']': return emit( token_kind::rbracket, 1 );
        case ';': return emit( token_kind::semicolon, 1 );
        case ',': return emit( token_kind::comma, 1 );
        case '@': return emit( token_kind::at, 1 );
        case '&': return emit( token_kind::amp, 1 );
        case '!': return emit( token_kind::bang, 1 );
        case '+': return emit( token_kind::plus, 1 );
        case '*': return emit( token_kind::star, 1 );
        case ':':
            return n == ':' ? emit( token_kind::double_colon, 2 ) : emit( token_kind::colon, 1 );
        case '-':
            return n == '>' ? emit( token_kind::arrow, 2 ) : emit( token_kind::minus, 1 );
        case '|':
            return n == '|' ? emit( token_kind::double_bar, 2 ) : emit( token_kind::bar, 1 );
        case '=':
            return n == '>' ? emit( token_kind::implies, 2 ) : emit( token_kind::eq, 1 );
        case '/':
            return n == '=' ? emit( token_kind::neq, 2 ) : emit( token_kind::slash, 1 );
        case '<':
            return n == '=' ? emit( token_kind::le, 2 ) : emit( token_kind::lt, 1 );
        case '>':
            return n == '=' ? emit( token_kind::ge, 2 ) : emit( token_kind::gt, 1 );
        case '.':
            if ( n == '.' && peek( 2 ) == '.' )
                return emit( token_kind::ellipsis, 3 );
            return emit( token_kind::dot, 1 );
        default:
            break;
        }

        const auto uc = static_cast<unsigned char>( c );
        std::string shown = uc < 0x80 && uc >= 0x20 ? std::string( 1, c ) : "\\x" + std::to_string( uc );
        throw lex_error( { _line, _col }, "unexpected character '" + shown + "'" );
    }
};

} // namespace

std::string_view describe( token_kind kind )
{
    switch ( kind )
    {
    case token_kind::ident: return "identifier";
    case token_kind::int_lit: return "integer literal";
    case token_kind::string_lit: return "string literal";
    case token_kind::type_name: return "type name";
    case token_kind::kw_system: return "'system'";
    case token_kind::kw_record: return "'record'";
    case token_kind::kw_state: return "'state'";
    case token_kind::kw_action: return "'action'";
    case token_kind::kw_init: return "'init'";
    case token_kind::kw_spec: return "'spec'";
    case token_kind::kw_prop: return "'prop'";
    case token_kind::kw_func: return "'func'";
    case token_kind::kw_import: return "'import'";
    case token_kind::kw_refines: return "'refines'";
    case token_kind::kw_static: return "'static'";
    case token_kind::kw_property: return "'property'";
    case token_kind::kw_always: return "'always'";
    case token_kind::kw_null: return "'null'";
    case token_kind::kw_true: return "'true'";
    case token_kind::kw_false: return "'false'";
    case token_kind::kw_if: return "'if'";
    case token_kind::kw_then: return "'then'";
    case token_kind::kw_else: return "'else'";
    case token_kind::kw_mod: return "'mod'";
    case token_kind::lbrace: return "'{'";
    case token_kind::rbrace: return "'}'";
    case token_kind::lparen: return "'('";
    case token_kind::rparen: return "')'";
    case token_kind::lbracket: return "'['";
    case token_kind::rbracket: return "']'";
    case token_kind::semicolon: return "';'";
    case token_kind::comma: return "','";
    case token_kind::colon: return "':'";
    case token_kind::double_colon: return "'::'";
    case token_kind::arrow: return "'->'";
    case token_kind::at: return "'@'";
    case token_kind::dot: return "'.'";
    case token_kind::bar: return "'|'";
    case token_kind::double_bar: return "'||'";
    case token_kind::amp: return "'&'";
    case token_kind::bang: return "'!'";
    case token_kind::eq: return "'='";
    case token_kind::neq: return "'/='";
    case token_kind::implies: return "'=>'";
    case token_kind::lt: return "'<'";
    case token_kind::le: return "'<='";
    case token_kind::gt: return "'>'";
    case token_kind::ge: return "'>='";
    case token_kind::plus: return "'+'";
    case token_kind::minus: return "'-'";
    case token_kind::star: return "'*'";
    case token_kind::slash: return "'/'";
    case token_kind::ellipsis: return "'...'";
    }
    return "token";
}

bool is_keyword( token_kind kind )
{
    return kind >= token_kind::kw_system && kind <= token_kind::kw_mod;
}

std::vector<token> tokenize( std::string_view source )
{
    return scanner{ source }.run();
}

std::string to_string( const diagnostic& d )
{
    const char* level = d.level == severity::error ? "error" : d.level == severity::warning ? "warning" : "note";
    return d.file + ":" + std::to_string( d.loc.line ) + ":" + std::to_string( d.loc.col ) + ": " + level + ": " +
           d.message;
}

std::ostream& operator<<( std::ostream& out, const diagnostic& d )
{
    return out << to_string( d );
}

} // namespace seni
