#include "seni/parser.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace seni
{

namespace
{

class parser
{
    std::span<const token> _toks;
    std::size_t _pos = 0;
    std::size_t _last_end = 0;
    std::string _file;

public:
    parser( std::span<const token> toks, std::string file ) : _toks{ toks }, _file{ std::move( file ) } {}

    program_ast program()
    {
        program_ast prog;
        prog.file = _file;
        std::set<std::string> seen_imports;

        while ( !at_end() )
        {
            if ( check( token_kind::kw_import ) )
            {
                advance();
                const auto& name = expect( token_kind::ident );
                if ( !seen_imports.insert( name.lexeme ).second )
                    throw parse_error( name.loc(), "duplicate import of '" + name.lexeme + "'" );
                prog.imports.push_back( { name.lexeme, name.loc() } );
                expect( token_kind::semicolon );
            }
            else if ( check( token_kind::kw_system ) )
                prog.systems.push_back( system() );
            else
                fail( { token_kind::kw_import, token_kind::kw_system } );
        }

        return prog;
    }

    expr_ptr standalone_expression()
    {
        auto e = expression();
        if ( !at_end() )
            fail( {}, "end of input" );
        return e;
    }

    spec_ptr standalone_spec()
    {
        auto s = spec_par();
        if ( !at_end() )
            fail( {}, "end of input" );
        return s;
    }

private:
    // ---- token plumbing ----

    [[nodiscard]] bool at_end() const { return _pos >= _toks.size(); }

    [[nodiscard]] const token* peek( std::size_t ahead = 0 ) const
    {
        return _pos + ahead < _toks.size() ? &_toks[ _pos + ahead ] : nullptr;
    }

    [[nodiscard]] bool check( token_kind kind, std::size_t ahead = 0 ) const
    {
        const auto* t = peek( ahead );
        return t && t->kind == kind;
    }

    const token& advance()
    {
        const auto& t = _toks[ _pos++ ];
        _last_end = t.end();
        return t;
    }

    bool accept( token_kind kind )
    {
        if ( !check( kind ) )
            return false;
        advance();
        return true;
    }

    const token& expect( token_kind kind )
    {
        if ( !check( kind ) )
            fail( { kind } );
        return advance();
    }

    const token& ident_or_fail()
    {
        if ( !check( token_kind::ident ) )
            fail( { token_kind::at, token_kind::ident, token_kind::rbrace } );
        return advance();
    }

    [[nodiscard]] source_loc here() const
    {
        if ( const auto* t = peek() )
            return t->loc();
        if ( _toks.empty() )
            return { 1, 1 };
        const auto& last = _toks.back();
        int col = last.col;
        int line = last.line;
        for ( char c : last.lexeme )
        {
            if ( c == '\n' )
            {
                ++line;
                col = 1;
            }
            else
                ++col;
        }
        return { line, col };
    }

    [[noreturn]] void fail( std::initializer_list<token_kind> expected, std::string_view extra = {} ) const
    {
        std::vector<std::string> names;
        for ( auto k : expected )
            names.emplace_back( describe( k ) );
        if ( !extra.empty() )
            names.emplace_back( extra );

        std::ostringstream msg;
        if ( names.size() == 1 )
            msg << "expected " << names.front();
        else
        {
            msg << "expected one of ";
            for ( std::size_t i = 0; i < names.size(); ++i )
                msg << ( i ? ", " : "" ) << names[ i ];
        }
        if ( const auto* t = peek() )
            msg << ", found '" << t->lexeme << "'";
        else
            msg << ", found end of input";
        throw parse_error( here(), msg.str(), std::move( names ) );
    }

    [[nodiscard]] source_span open_span() const
    {
        const auto* t = peek();
        if ( !t )
            return { _last_end, _last_end, here() };
        return { t->offset, t->offset, t->loc() };
    }

    source_span close( source_span s ) const
    {
        s.end = _last_end;
        return s;
    }

    // ---- declarations ----

    system_ast system()
    {
        system_ast sys;
        sys.file = _file;
        sys.loc = expect( token_kind::kw_system ).loc();
        sys.name = expect( token_kind::ident ).lexeme;
        if ( check( token_kind::kw_refines ) )
        {
            advance();
            const auto& parent = expect( token_kind::ident );
            sys.refines = parent.lexeme;
            sys.refines_loc = parent.loc();
        }
        expect( token_kind::lbrace );

        while ( !check( token_kind::rbrace ) )
        {
            if ( at_end() )
                fail( { token_kind::rbrace } );
            member( sys );
        }
        advance();
        accept( token_kind::semicolon );
        return sys;
    }

    void member( system_ast& sys )
    {
        const auto* t = peek();
        switch ( t->kind )
        {
        case token_kind::kw_record:
            sys.records.push_back( record() );
            return;
        case token_kind::kw_state:
        {
            advance();
            state_decl decl;
            decl.type = type();
            const auto& name = expect( token_kind::ident );
            decl.name = name.lexeme;
            decl.loc = name.loc();
            if ( accept( token_kind::colon ) )
                decl.init = expression();
            expect( token_kind::semicolon );
            sys.state_vars.push_back( std::move( decl ) );
            return;
        }
        case token_kind::lbracket:
        case token_kind::ident:
        {
            instance_decl decl;
            decl.type = type();
            const auto& name = expect( token_kind::ident );
            decl.name = name.lexeme;
            decl.loc = name.loc();
            expect( token_kind::semicolon );
            sys.instance_vars.push_back( std::move( decl ) );
            return;
        }
        case token_kind::kw_action:
        {
            advance();
            action_decl decl;
            const auto& name = expect( token_kind::ident );
            decl.name = name.lexeme;
            decl.loc = name.loc();
            expect( token_kind::lbrace );
            decl.body = statements( false ).first;
            expect( token_kind::rbrace );
            accept( token_kind::semicolon );
            sys.actions.push_back( std::move( decl ) );
            return;
        }
        case token_kind::kw_init:
        {
            const auto loc = advance().loc();
            if ( sys.init )
                throw parse_error( loc, "duplicate init declaration in system '" + sys.name + "'" );
            init_decl decl;
            decl.loc = loc;
            expect( token_kind::lparen );
            if ( !check( token_kind::rparen ) )
            {
                do
                {
                    param_decl p;
                    p.type = type();
                    const auto& name = expect( token_kind::ident );
                    p.name = name.lexeme;
                    p.loc = name.loc();
                    decl.params.push_back( std::move( p ) );
                } while ( accept( token_kind::comma ) );
            }
            expect( token_kind::rparen );
            expect( token_kind::lbrace );
            decl.body = statements( false ).first;
            expect( token_kind::rbrace );
            accept( token_kind::semicolon );
            sys.init = std::move( decl );
            return;
        }
        case token_kind::kw_spec:
        {
            advance();
            spec_decl decl;
            const auto& name = expect( token_kind::ident );
            decl.name = name.lexeme;
            decl.loc = name.loc();
            expect( token_kind::lbrace );
            decl.body = spec_par();
            expect( token_kind::rbrace );
            accept( token_kind::semicolon );
            sys.specs.push_back( std::move( decl ) );
            return;
        }
        case token_kind::kw_prop:
        {
            advance();
            prop_decl decl;
            const auto& name = expect( token_kind::ident );
            decl.name = name.lexeme;
            decl.loc = name.loc();
            expect( token_kind::lbrace );
            decl.body = expression();
            accept( token_kind::semicolon );
            expect( token_kind::rbrace );
            accept( token_kind::semicolon );
            sys.props.push_back( std::move( decl ) );
            return;
        }
        case token_kind::kw_static:
        case token_kind::kw_property:
        {
            property_decl decl;
            decl.is_static = accept( token_kind::kw_static );
            expect( token_kind::kw_property );
            const auto& name = expect( token_kind::ident );
            decl.name = name.lexeme;
            decl.loc = name.loc();
            expect( token_kind::lbrace );
            decl.body = expression();
            accept( token_kind::semicolon );
            expect( token_kind::rbrace );
            accept( token_kind::semicolon );
            sys.properties.push_back( std::move( decl ) );
            return;
        }
        case token_kind::kw_func:
            sys.funcs.push_back( func() );
            return;
        default:
            fail( { token_kind::kw_record, token_kind::kw_state, token_kind::kw_action, token_kind::kw_init,
                    token_kind::kw_spec, token_kind::kw_prop, token_kind::kw_property, token_kind::kw_func,
                    token_kind::rbrace },
                  "instance declaration" );
        }
    }

    record_decl record()
    {
        expect( token_kind::kw_record );
        record_decl rec;
        const auto& name = expect( token_kind::ident );
        rec.name = name.lexeme;
        rec.loc = name.loc();
        expect( token_kind::lbrace );
        while ( !check( token_kind::rbrace ) )
        {
            field_decl f;
            f.type = type();
            const auto& fname = expect( token_kind::ident );
            f.name = fname.lexeme;
            f.loc = fname.loc();
            if ( accept( token_kind::colon ) )
                f.init = expression();
            rec.fields.push_back( std::move( f ) );
            if ( !accept( token_kind::comma ) && !accept( token_kind::semicolon ) )
                break;
        }
        expect( token_kind::rbrace );
        accept( token_kind::semicolon );
        return rec;
    }

    func_decl func()
    {
        expect( token_kind::kw_func );
        func_decl fn;
        const auto& name = expect( token_kind::ident );
        fn.name = name.lexeme;
        fn.loc = name.loc();
        while ( check( token_kind::ident ) )
            fn.param_names.push_back( advance().lexeme );
        expect( token_kind::double_colon );
        fn.signature.push_back( type() );
        while ( accept( token_kind::arrow ) )
            fn.signature.push_back( type() );
        if ( fn.signature.size() < 2 )
            fail( { token_kind::arrow } );
        expect( token_kind::lbrace );
        auto [ body, result ] = statements( true );
        fn.body = std::move( body );
        fn.result = std::move( result );
        expect( token_kind::rbrace );
        accept( token_kind::semicolon );
        return fn;
    }

    type_ptr type()
    {
        auto t = std::make_shared<type_expr>();
        t->loc = here();
        if ( check( token_kind::type_name ) )
        {
            t->k = type_expr::kind::primitive;
            t->name = advance().lexeme;
        }
        else if ( check( token_kind::ident ) )
        {
            t->k = type_expr::kind::named;
            t->name = advance().lexeme;
        }
        else if ( accept( token_kind::lbracket ) )
        {
            t->k = type_expr::kind::list;
            t->elem = type();
            expect( token_kind::rbracket );
        }
        else
            fail( { token_kind::type_name, token_kind::ident, token_kind::lbracket } );
        return t;
    }

    // Is the upcoming token run an assignment target followed by ':'?
    [[nodiscard]] bool at_assignment() const
    {
        if ( check( token_kind::ident ) )
            return check( token_kind::colon, 1 );
        if ( !check( token_kind::at ) )
            return false;
        std::size_t i = 1;
        while ( check( token_kind::dot, i ) && check( token_kind::ident, i + 1 ) )
            i += 2;
        return i > 1 && check( token_kind::colon, i );
    }

    // Statement list up to the closing brace. With allow_result, a trailing
    // expression is returned as the body's result.
    std::pair<std::vector<stmt>, expr_ptr> statements( bool allow_result )
    {
        std::vector<stmt> out;
        while ( !check( token_kind::rbrace ) && !at_end() )
        {
            if ( allow_result && !at_assignment() )
            {
                auto result = expression();
                accept( token_kind::semicolon );
                return { std::move( out ), std::move( result ) };
            }

            stmt s;
            s.span = open_span();
            if ( accept( token_kind::at ) )
            {
                s.k = stmt::kind::state_assign;
                while ( accept( token_kind::dot ) )
                    s.path.push_back( expect( token_kind::ident ).lexeme );
            }
            else
            {
                s.k = stmt::kind::local_assign;
                s.path.push_back( ident_or_fail().lexeme );
            }
            expect( token_kind::colon );
            s.value = expression();
            accept( token_kind::semicolon );
            s.span = close( s.span );
            out.push_back( std::move( s ) );
        }
        return { std::move( out ), nullptr };
    }

    // ---- spec expressions: always > . > | > || ----

    spec_ptr make_spec( spec_kind kind, source_span span, std::vector<spec_ptr> kids )
    {
        auto s = std::make_shared<spec_expr>();
        s->kind = kind;
        s->span = close( span );
        s->kids = std::move( kids );
        return s;
    }

    spec_ptr spec_par()
    {
        const auto span = open_span();
        auto first = spec_choice();
        if ( !check( token_kind::double_bar ) )
            return first;
        std::vector<spec_ptr> kids{ std::move( first ) };
        while ( accept( token_kind::double_bar ) )
            kids.push_back( spec_choice() );
        return make_spec( spec_kind::par, span, std::move( kids ) );
    }

    spec_ptr spec_choice()
    {
        const auto span = open_span();
        auto lhs = spec_seq();
        while ( accept( token_kind::bar ) )
        {
            auto rhs = spec_seq();
            lhs = make_spec( spec_kind::choice, span, { std::move( lhs ), std::move( rhs ) } );
        }
        return lhs;
    }

    spec_ptr spec_seq()
    {
        const auto span = open_span();
        auto lhs = spec_unary();
        while ( accept( token_kind::dot ) )
        {
            auto rhs = spec_unary();
            lhs = make_spec( spec_kind::seq, span, { std::move( lhs ), std::move( rhs ) } );
        }
        return lhs;
    }

    spec_ptr spec_unary()
    {
        const auto span = open_span();
        if ( accept( token_kind::kw_always ) )
            return make_spec( spec_kind::always, span, { spec_unary() } );
        return spec_atom();
    }

    spec_ptr spec_atom()
    {
        const auto span = open_span();
        if ( accept( token_kind::lparen ) )
        {
            auto inner = spec_par();
            expect( token_kind::rparen );
            return inner;
        }

        const auto& name = expect( token_kind::ident );
        if ( name.lexeme == "fold" && check( token_kind::lparen ) )
        {
            advance();
            auto s = std::make_shared<spec_expr>();
            s->kind = spec_kind::fold;
            if ( accept( token_kind::double_bar ) )
                s->fold_op = spec_kind::par;
            else if ( accept( token_kind::bar ) )
                s->fold_op = spec_kind::choice;
            else if ( accept( token_kind::dot ) )
                s->fold_op = spec_kind::seq;
            else
                fail( { token_kind::double_bar, token_kind::bar, token_kind::dot } );
            expect( token_kind::comma );
            s->name = expect( token_kind::ident ).lexeme;
            expect( token_kind::rparen );
            s->span = close( span );
            return s;
        }

        auto s = std::make_shared<spec_expr>();
        s->kind = spec_kind::ref;
        s->name = name.lexeme;
        s->span = close( span );
        return s;
    }

    // ---- value expressions: => < | < & < !/always < comparison < + - < * / mod < unary < postfix ----

    expr_ptr node( expr_kind kind, source_span span, std::vector<expr_ptr> kids = {} )
    {
        auto e = std::make_shared<expr>();
        e->kind = kind;
        e->span = close( span );
        e->kids = std::move( kids );
        return e;
    }

    expr_ptr binary( binary_op op, source_span span, expr_ptr lhs, expr_ptr rhs )
    {
        auto e = std::make_shared<expr>();
        e->kind = expr_kind::binary;
        e->bop = op;
        e->span = close( span );
        e->kids = { std::move( lhs ), std::move( rhs ) };
        return e;
    }

    expr_ptr expression() { return implication(); }

    expr_ptr implication()
    {
        const auto span = open_span();
        auto lhs = disjunction();
        if ( accept( token_kind::implies ) )
            return binary( binary_op::implies, span, std::move( lhs ), implication() );
        return lhs;
    }

    expr_ptr disjunction()
    {
        const auto span = open_span();
        auto lhs = conjunction();
        while ( accept( token_kind::bar ) )
            lhs = binary( binary_op::logical_or, span, std::move( lhs ), conjunction() );
        return lhs;
    }

    expr_ptr conjunction()
    {
        const auto span = open_span();
        auto lhs = negation();
        while ( accept( token_kind::amp ) )
            lhs = binary( binary_op::logical_and, span, std::move( lhs ), negation() );
        return lhs;
    }

    expr_ptr negation()
    {
        const auto span = open_span();
        if ( accept( token_kind::bang ) )
        {
            auto e = node( expr_kind::unary, span, { negation() } );
            std::const_pointer_cast<expr>( e )->uop = unary_op::logical_not;
            return e;
        }
        if ( accept( token_kind::kw_always ) )
            return node( expr_kind::always, span, { negation() } );
        return comparison();
    }

    expr_ptr comparison()
    {
        const auto span = open_span();
        auto lhs = additive();
        const auto* t = peek();
        if ( !t )
            return lhs;

        binary_op op;
        switch ( t->kind )
        {
        case token_kind::eq: op = binary_op::eq; break;
        case token_kind::neq: op = binary_op::neq; break;
        case token_kind::lt: op = binary_op::lt; break;
        case token_kind::le: op = binary_op::le; break;
        case token_kind::gt: op = binary_op::gt; break;
        case token_kind::ge: op = binary_op::ge; break;
        default: return lhs;
        }
        advance();
        return binary( op, span, std::move( lhs ), additive() );
    }

    expr_ptr additive()
    {
        const auto span = open_span();
        auto lhs = multiplicative();
        while ( true )
        {
            if ( accept( token_kind::plus ) )
                lhs = binary( binary_op::add, span, std::move( lhs ), multiplicative() );
            else if ( accept( token_kind::minus ) )
                lhs = binary( binary_op::sub, span, std::move( lhs ), multiplicative() );
            else
                return lhs;
        }
    }

    expr_ptr multiplicative()
    {
        const auto span = open_span();
        auto lhs = unary();
        while ( true )
        {
            if ( accept( token_kind::star ) )
                lhs = binary( binary_op::mul, span, std::move( lhs ), unary() );
            else if ( accept( token_kind::slash ) )
                lhs = binary( binary_op::div, span, std::move( lhs ), unary() );
            else if ( accept( token_kind::kw_mod ) )
                lhs = binary( binary_op::mod, span, std::move( lhs ), unary() );
            else
                return lhs;
        }
    }

    expr_ptr unary()
    {
        const auto span = open_span();
        if ( accept( token_kind::minus ) )
        {
            auto e = node( expr_kind::unary, span, { unary() } );
            std::const_pointer_cast<expr>( e )->uop = unary_op::negate;
            return e;
        }
        if ( check( token_kind::lparen ) && check( token_kind::type_name, 1 ) && check( token_kind::rparen, 2 ) )
        {
            advance();
            auto t = type();
            expect( token_kind::rparen );
            auto e = node( expr_kind::cast, span, { unary() } );
            std::const_pointer_cast<expr>( e )->cast_type = std::move( t );
            return e;
        }
        return postfix();
    }

    expr_ptr postfix()
    {
        const auto span = open_span();
        auto e = primary();
        while ( true )
        {
            if ( accept( token_kind::dot ) )
            {
                const auto& name = expect( token_kind::ident );
                auto f = node( expr_kind::field, span, { std::move( e ) } );
                std::const_pointer_cast<expr>( f )->name = name.lexeme;
                e = std::move( f );
            }
            else if ( accept( token_kind::lbracket ) )
            {
                auto idx = expression();
                expect( token_kind::rbracket );
                e = node( expr_kind::index, span, { std::move( e ), std::move( idx ) } );
            }
            else
                return e;
        }
    }

    expr_ptr primary()
    {
        const auto span = open_span();
        const auto* t = peek();
        if ( !t )
            fail( {}, "expression" );

        auto e = std::make_shared<expr>();
        switch ( t->kind )
        {
        case token_kind::int_lit:
            e->kind = expr_kind::int_lit;
            e->int_value = std::stoll( advance().lexeme );
            break;
        case token_kind::string_lit:
            e->kind = expr_kind::string_lit;
            e->name = unescape( advance().lexeme );
            break;
        case token_kind::kw_true:
        case token_kind::kw_false:
            e->kind = expr_kind::bool_lit;
            e->bool_value = advance().kind == token_kind::kw_true;
            break;
        case token_kind::kw_null:
            advance();
            e->kind = expr_kind::null_lit;
            break;
        case token_kind::ellipsis:
            advance();
            e->kind = expr_kind::elided;
            break;
        case token_kind::at:
            advance();
            e->kind = expr_kind::state_root;
            break;
        case token_kind::lparen:
        {
            advance();
            auto inner = expression();
            expect( token_kind::rparen );
            return inner;
        }
        case token_kind::lbrace:
            return record_literal();
        case token_kind::kw_if:
        {
            advance();
            auto c = expression();
            expect( token_kind::kw_then );
            auto a = expression();
            expect( token_kind::kw_else );
            auto b = expression();
            return node( expr_kind::conditional, span, { std::move( c ), std::move( a ), std::move( b ) } );
        }
        case token_kind::ident:
        {
            const auto& name = advance();
            if ( name.lexeme == "fold" && check( token_kind::lparen ) )
                return fold( span );
            if ( check( token_kind::double_colon ) )
            {
                advance();
                e->kind = expr_kind::instance_ctor;
                e->binder = name.lexeme;
                e->name = expect( token_kind::ident ).lexeme;
                break;
            }
            e->name = name.lexeme;
            if ( accept( token_kind::lparen ) )
            {
                e->kind = expr_kind::call;
                if ( !check( token_kind::rparen ) )
                {
                    do
                        e->kids.push_back( expression() );
                    while ( accept( token_kind::comma ) );
                }
                expect( token_kind::rparen );
            }
            else
                e->kind = expr_kind::name;
            break;
        }
        default:
            fail( {}, "expression" );
        }
        e->span = close( span );
        return e;
    }

    expr_ptr fold( source_span span )
    {
        expect( token_kind::lparen );
        auto e = std::make_shared<expr>();
        e->kind = expr_kind::fold;
        if ( accept( token_kind::amp ) )
            e->bop = binary_op::logical_and;
        else if ( accept( token_kind::bar ) )
            e->bop = binary_op::logical_or;
        else
            fail( { token_kind::amp, token_kind::bar } );
        expect( token_kind::comma );
        e->kids.push_back( postfix() );
        expect( token_kind::rparen );
        e->span = close( span );
        return e;
    }

    expr_ptr record_literal()
    {
        const auto span = open_span();
        expect( token_kind::lbrace );
        auto e = std::make_shared<expr>();
        e->kind = expr_kind::record_lit;
        while ( !check( token_kind::rbrace ) )
        {
            e->field_names.push_back( expect( token_kind::ident ).lexeme );
            expect( token_kind::colon );
            e->kids.push_back( expression() );
            if ( !accept( token_kind::semicolon ) && !accept( token_kind::comma ) )
                break;
        }
        expect( token_kind::rbrace );
        e->span = close( span );
        return e;
    }

    static std::string unescape( const std::string& lexeme )
    {
        std::string out;
        for ( std::size_t i = 1; i + 1 < lexeme.size(); ++i )
        {
            char c = lexeme[ i ];
            if ( c == '\\' && i + 2 < lexeme.size() )
            {
                c = lexeme[ ++i ];
                if ( c == 'n' )
                    c = '\n';
                else if ( c == 't' )
                    c = '\t';
            }
            out.push_back( c );
        }
        return out;
    }
};

std::string_view fold_spelling( spec_kind k )
{
    return k == spec_kind::par ? "||" : k == spec_kind::choice ? "|" : ".";
}

} // namespace

program_ast parse( std::span<const token> tokens, std::string file )
{
    return parser{ tokens, std::move( file ) }.program();
}

program_ast parse_source( std::string_view source, std::string file )
{
    const auto toks = tokenize( source );
    return parse( toks, std::move( file ) );
}

expr_ptr parse_expression( std::string_view source )
{
    const auto toks = tokenize( source );
    return parser{ toks, "<expr>" }.standalone_expression();
}

spec_ptr parse_spec_expression( std::string_view source )
{
    const auto toks = tokenize( source );
    return parser{ toks, "<spec>" }.standalone_spec();
}

bool system_ast::has_main() const
{
    return std::any_of( specs.begin(), specs.end(), []( const spec_decl& s ) { return s.name == "Main"; } );
}

std::string_view spelling( binary_op op )
{
    switch ( op )
    {
    case binary_op::add: return "+";
    case binary_op::sub: return "-";
    case binary_op::mul: return "*";
    case binary_op::div: return "/";
    case binary_op::mod: return "mod";
    case binary_op::eq: return "=";
    case binary_op::neq: return "/=";
    case binary_op::lt: return "<";
    case binary_op::le: return "<=";
    case binary_op::gt: return ">";
    case binary_op::ge: return ">=";
    case binary_op::logical_and: return "&";
    case binary_op::logical_or: return "|";
    case binary_op::implies: return "=>";
    }
    return "?";
}

bool same_expr( const expr& a, const expr& b )
{
    if ( a.kind != b.kind || a.kids.size() != b.kids.size() )
        return false;

    switch ( a.kind )
    {
    case expr_kind::int_lit:
        if ( a.int_value != b.int_value )
            return false;
        break;
    case expr_kind::bool_lit:
        if ( a.bool_value != b.bool_value )
            return false;
        break;
    case expr_kind::unary:
        if ( a.uop != b.uop )
            return false;
        break;
    case expr_kind::binary:
    case expr_kind::fold:
        if ( a.bop != b.bop )
            return false;
        break;
    case expr_kind::cast:
        if ( a.cast_type->name != b.cast_type->name )
            return false;
        break;
    case expr_kind::record_lit:
        if ( a.field_names != b.field_names )
            return false;
        break;
    case expr_kind::instance_ctor:
        if ( a.binder != b.binder )
            return false;
        break;
    default:
        break;
    }
    if ( a.name != b.name )
        return false;

    for ( std::size_t i = 0; i < a.kids.size(); ++i )
        if ( !same_expr( *a.kids[ i ], *b.kids[ i ] ) )
            return false;
    return true;
}

std::string to_string( const expr& e )
{
    switch ( e.kind )
    {
    case expr_kind::int_lit: return std::to_string( e.int_value );
    case expr_kind::bool_lit: return e.bool_value ? "true" : "false";
    case expr_kind::string_lit: return "\"" + e.name + "\"";
    case expr_kind::null_lit: return "null";
    case expr_kind::name: return e.name;
    case expr_kind::state_root: return "@";
    case expr_kind::field: return to_string( *e.kids[ 0 ] ) + "." + e.name;
    case expr_kind::index: return to_string( *e.kids[ 0 ] ) + "[" + to_string( *e.kids[ 1 ] ) + "]";
    case expr_kind::call:
    {
        std::string out = e.name + "(";
        for ( std::size_t i = 0; i < e.kids.size(); ++i )
            out += ( i ? ", " : "" ) + to_string( *e.kids[ i ] );
        return out + ")";
    }
    case expr_kind::cast: return "(" + e.cast_type->name + ") " + to_string( *e.kids[ 0 ] );
    case expr_kind::unary:
        return ( e.uop == unary_op::logical_not ? "!(" : "-(" ) + to_string( *e.kids[ 0 ] ) + ")";
    case expr_kind::binary:
        return "(" + to_string( *e.kids[ 0 ] ) + " " + std::string{ spelling( e.bop ) } + " " +
               to_string( *e.kids[ 1 ] ) + ")";
    case expr_kind::conditional:
        return "(if " + to_string( *e.kids[ 0 ] ) + " then " + to_string( *e.kids[ 1 ] ) + " else " +
               to_string( *e.kids[ 2 ] ) + ")";
    case expr_kind::record_lit:
    {
        std::string out = "{";
        for ( std::size_t i = 0; i < e.kids.size(); ++i )
            out += ( i ? "; " : "" ) + e.field_names[ i ] + ": " + to_string( *e.kids[ i ] );
        return out + "}";
    }
    case expr_kind::fold:
        return "fold(" + std::string{ spelling( e.bop ) } + ", " + to_string( *e.kids[ 0 ] ) + ")";
    case expr_kind::always: return "always " + to_string( *e.kids[ 0 ] );
    case expr_kind::instance_ctor: return e.binder + "::" + e.name;
    case expr_kind::elided: return "...";
    }
    return "?";
}

bool same_spec( const spec_expr& a, const spec_expr& b )
{
    if ( a.kind != b.kind || a.name != b.name || a.kids.size() != b.kids.size() )
        return false;
    if ( a.kind == spec_kind::fold && a.fold_op != b.fold_op )
        return false;
    for ( std::size_t i = 0; i < a.kids.size(); ++i )
        if ( !same_spec( *a.kids[ i ], *b.kids[ i ] ) )
            return false;
    return true;
}

std::string to_string( const spec_expr& s )
{
    switch ( s.kind )
    {
    case spec_kind::ref: return s.name;
    case spec_kind::seq: return "Seq(" + to_string( *s.kids[ 0 ] ) + ", " + to_string( *s.kids[ 1 ] ) + ")";
    case spec_kind::choice: return "Choice(" + to_string( *s.kids[ 0 ] ) + ", " + to_string( *s.kids[ 1 ] ) + ")";
    case spec_kind::always: return "Always(" + to_string( *s.kids[ 0 ] ) + ")";
    case spec_kind::fold: return "fold(" + std::string{ fold_spelling( s.fold_op ) } + ", " + s.name + ")";
    case spec_kind::par:
    {
        std::string out = "Par(";
        for ( std::size_t i = 0; i < s.kids.size(); ++i )
            out += ( i ? ", " : "" ) + to_string( *s.kids[ i ] );
        return out + ")";
    }
    }
    return "?";
}

} // namespace seni
