#include "fixtures.hpp"

#include "seni/lexer.hpp"
#include "seni/parser.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <functional>

using namespace seni;
using seni::testing::corpus_path;
using seni::testing::read_file;

namespace
{

std::vector<token_kind> kinds( const std::vector<token>& toks )
{
    std::vector<token_kind> out;
    for ( const auto& t : toks )
        out.push_back( t.kind );
    return out;
}

spec_ptr ref( const std::string& name )
{
    auto s = std::make_shared<spec_expr>();
    s->name = name;
    return s;
}

spec_ptr node( spec_kind k, std::vector<spec_ptr> kids )
{
    auto s = std::make_shared<spec_expr>();
    s->kind = k;
    s->kids = std::move( kids );
    return s;
}

void each_expr( const expr& e, const std::function<void( const expr& )>& f )
{
    f( e );
    for ( const auto& k : e.kids )
        each_expr( *k, f );
}

void each_expr( const program_ast& p, const std::function<void( const expr& )>& f )
{
    for ( const auto& s : p.systems )
    {
        for ( const auto& r : s.records )
            for ( const auto& fd : r.fields )
                if ( fd.init )
                    each_expr( *fd.init, f );
        for ( const auto& v : s.state_vars )
            if ( v.init )
                each_expr( *v.init, f );
        for ( const auto& a : s.actions )
            for ( const auto& st : a.body )
                each_expr( *st.value, f );
        if ( s.init )
            for ( const auto& st : s.init->body )
                each_expr( *st.value, f );
        for ( const auto& p : s.props )
            each_expr( *p.body, f );
        for ( const auto& p : s.properties )
            each_expr( *p.body, f );
        for ( const auto& fn : s.funcs )
        {
            for ( const auto& st : fn.body )
                each_expr( *st.value, f );
            if ( fn.result )
                each_expr( *fn.result, f );
        }
    }
}

const std::vector<std::string> sources{ "PhilosopherAbstract.seni", "Philosopher.seni", "Table.seni" };

} // namespace

TEST_CASE( "tokenize: state notation", "[frontend]" )
{
    const auto toks = tokenize( "@.id: 3" );
    CHECK( kinds( toks ) == std::vector{ token_kind::at, token_kind::dot, token_kind::ident, token_kind::colon,
                                         token_kind::int_lit } );
    CHECK( toks[ 2 ].lexeme == "id" );
    CHECK( toks[ 4 ].lexeme == "3" );
}

TEST_CASE( "tokenize: empty input", "[frontend]" )
{
    CHECK( tokenize( "" ).empty() );
    CHECK( tokenize( "  // only a comment\n\n" ).empty() );
}

TEST_CASE( "tokenize: function signature", "[frontend]" )
{
    const auto toks = tokenize( "func getForkId :: int -> string -> int" );
    CHECK( kinds( toks ) == std::vector{ token_kind::kw_func, token_kind::ident, token_kind::double_colon,
                                         token_kind::type_name, token_kind::arrow, token_kind::type_name,
                                         token_kind::arrow, token_kind::type_name } );
    CHECK( toks[ 3 ].lexeme == "int" );
    CHECK( toks[ 5 ].lexeme == "string" );
}

TEST_CASE( "tokenize: keywords are not identifiers", "[frontend]" )
{
    const std::vector<std::pair<std::string, token_kind>> words{
        { "system", token_kind::kw_system },     { "record", token_kind::kw_record },
        { "state", token_kind::kw_state },       { "action", token_kind::kw_action },
        { "init", token_kind::kw_init },         { "spec", token_kind::kw_spec },
        { "prop", token_kind::kw_prop },         { "func", token_kind::kw_func },
        { "import", token_kind::kw_import },     { "refines", token_kind::kw_refines },
        { "static", token_kind::kw_static },     { "property", token_kind::kw_property },
        { "always", token_kind::kw_always },     { "null", token_kind::kw_null },
        { "true", token_kind::kw_true },         { "false", token_kind::kw_false },
    };
    for ( const auto& [ word, kind ] : words )
    {
        const auto toks = tokenize( word );
        REQUIRE( toks.size() == 1 );
        CHECK( toks[ 0 ].kind == kind );
        CHECK( is_keyword( kind ) );
        CHECK( tokenize( word + "x" )[ 0 ].kind == token_kind::ident );
    }
}

TEST_CASE( "tokenize: operators", "[frontend]" )
{
    const auto toks = tokenize( "| || & ! = /= => < <= > >= + - * / :: : ... ->" );
    CHECK( kinds( toks ) == std::vector{ token_kind::bar,   token_kind::double_bar, token_kind::amp,
                                         token_kind::bang,  token_kind::eq,         token_kind::neq,
                                         token_kind::implies, token_kind::lt,       token_kind::le,
                                         token_kind::gt,    token_kind::ge,         token_kind::plus,
                                         token_kind::minus, token_kind::star,       token_kind::slash,
                                         token_kind::double_colon, token_kind::colon, token_kind::ellipsis,
                                         token_kind::arrow } );
}

TEST_CASE( "tokenize: lexemes and gaps reproduce the sources", "[frontend]" )
{
    for ( const auto& file : sources )
    {
        const auto src = read_file( corpus_path( file ) );
        const auto toks = tokenize( src );
        REQUIRE_FALSE( toks.empty() );

        std::string rebuilt;
        std::size_t pos = 0;
        for ( const auto& t : toks )
        {
            REQUIRE( t.offset >= pos );
            const auto gap = src.substr( pos, t.offset - pos );
            // gaps hold only whitespace and comments
            std::string stripped;
            for ( std::size_t i = 0; i < gap.size(); ++i )
            {
                if ( gap.compare( i, 2, "//" ) == 0 )
                    while ( i < gap.size() && gap[ i ] != '\n' )
                        ++i;
                else if ( !std::isspace( static_cast<unsigned char>( gap[ i ] ) ) )
                    stripped += gap[ i ];
            }
            CHECK( stripped.empty() );
            CHECK( src.compare( t.offset, t.lexeme.size(), t.lexeme ) == 0 );
            rebuilt += gap + t.lexeme;
            pos = t.end();
        }
        rebuilt += src.substr( pos );
        CHECK( rebuilt == src );
    }
}

TEST_CASE( "tokenize: positions point at the first character", "[frontend]" )
{
    const auto src = read_file( corpus_path( "Philosopher.seni" ) );
    for ( const auto& t : tokenize( src ) )
    {
        int line = 1;
        int col = 1;
        for ( std::size_t i = 0; i < t.offset; ++i )
        {
            if ( src[ i ] == '\n' )
            {
                ++line;
                col = 1;
            }
            else
                ++col;
        }
        CHECK( t.line == line );
        CHECK( t.col == col );
    }
}

TEST_CASE( "tokenize: stray characters are lex errors", "[frontend]" )
{
    try
    {
        (void)tokenize( "system X {\n  $ }" );
        FAIL( "expected lex_error" );
    }
    catch ( const lex_error& e )
    {
        CHECK( e.loc() == source_loc{ 2, 3 } );
    }
    CHECK_THROWS_AS( tokenize( "\"open" ), lex_error );
}

TEST_CASE( "parse: abstract philosopher shape", "[frontend]" )
{
    const auto p = parse_source( read_file( corpus_path( "PhilosopherAbstract.seni" ) ) );
    REQUIRE( p.systems.size() == 1 );
    const auto& s = p.systems[ 0 ];
    CHECK( s.name == "PhilosopherAbstract" );
    CHECK( s.records.size() == 1 );
    CHECK( s.state_vars.size() == 3 );
    CHECK( s.actions.size() == 2 );
    CHECK( s.specs.size() == 1 );
    CHECK( s.funcs.size() == 1 );
    CHECK( s.init.has_value() );
    CHECK( s.init->params.size() == 1 );
    CHECK( s.has_main() );
    CHECK( to_string( *s.specs[ 0 ].body ) == "Always(Seq(PickFork, ReturnFork))" );
    CHECK( s.funcs[ 0 ].signature.size() == 3 );
}

TEST_CASE( "parse: minimal system", "[frontend]" )
{
    const auto p = parse_source( "system X {}" );
    REQUIRE( p.systems.size() == 1 );
    const auto& s = p.systems[ 0 ];
    CHECK( s.name == "X" );
    CHECK_FALSE( s.refines );
    CHECK( s.records.empty() );
    CHECK( s.state_vars.empty() );
    CHECK( s.instance_vars.empty() );
    CHECK( s.actions.empty() );
    CHECK_FALSE( s.init );
    CHECK( s.specs.empty() );
    CHECK( s.props.empty() );
    CHECK( s.properties.empty() );
    CHECK( s.funcs.empty() );
    CHECK_FALSE( s.has_main() );
}

TEST_CASE( "parse: refined philosopher and table", "[frontend]" )
{
    const auto p2 = parse_source( read_file( corpus_path( "Philosopher.seni" ) ) );
    REQUIRE( p2.imports.size() == 1 );
    CHECK( p2.imports[ 0 ].name == "PhilosopherAbstract" );
    CHECK( p2.systems[ 0 ].refines == "PhilosopherAbstract" );
    CHECK( p2.systems[ 0 ].actions.size() == 4 );
    CHECK( p2.systems[ 0 ].props.size() == 3 );

    const auto p3 = parse_source( read_file( corpus_path( "Table.seni" ) ) );
    const auto& t = p3.systems[ 0 ];
    CHECK( p3.imports.size() == 2 );
    CHECK( t.instance_vars.size() == 2 );
    CHECK( t.instance_vars[ 0 ].name == "philosophers" );
    REQUIRE( t.properties.size() == 1 );
    CHECK( t.properties[ 0 ].name == "DeadlockFree" );
    CHECK( t.properties[ 0 ].is_static );
    CHECK( to_string( *t.properties[ 0 ].body ) == "(Main => always !(AllWaiting))" );
    CHECK( to_string( *t.specs[ 0 ].body ) == "Par(fold(||, philosophers), fold(||, forks))" );
}

TEST_CASE( "parse: spec precedence", "[frontend]" )
{
    using k = spec_kind;
    const auto choice_of_seqs =
            node( k::choice, { node( k::seq, { ref( "A" ), ref( "B" ) } ), node( k::seq, { ref( "C" ), ref( "D" ) } ) } );
    CHECK( same_spec( *parse_spec_expression( "A.B | C.D" ), *choice_of_seqs ) );

    const auto pick_fork = node( k::choice, { node( k::seq, { ref( "PickLeft" ), ref( "PickRight" ) } ),
                                             node( k::seq, { ref( "PickRight" ), ref( "PickLeft" ) } ) } );
    CHECK( same_spec( *parse_spec_expression( "PickLeft.PickRight | PickRight.PickLeft" ), *pick_fork ) );

    // always binds tighter than sequencing, sequencing is left-associative
    CHECK( same_spec( *parse_spec_expression( "always A.B" ), *node( k::seq, { node( k::always, { ref( "A" ) } ), ref( "B" ) } ) ) );
    CHECK( same_spec( *parse_spec_expression( "A.B.C" ),
                      *node( k::seq, { node( k::seq, { ref( "A" ), ref( "B" ) } ), ref( "C" ) } ) ) );
    // choice binds tighter than parallel
    CHECK( same_spec( *parse_spec_expression( "A | B || C" ),
                      *node( k::par, { node( k::choice, { ref( "A" ), ref( "B" ) } ), ref( "C" ) } ) ) );
}

TEST_CASE( "parse: formula precedence", "[frontend]" )
{
    auto same = []( const char* a, const char* b ) { return same_expr( *parse_expression( a ), *parse_expression( b ) ); };
    CHECK( same( "!a & b", "(!a) & b" ) );
    CHECK( same( "a | b & c", "a | (b & c)" ) );
    CHECK( same( "a => b | c", "a => (b | c)" ) );
    CHECK( same( "a & b => c", "(a & b) => c" ) );
    CHECK( same( "!a = b", "!(a = b)" ) );
    CHECK( same( "!x /= null", "!(x /= null)" ) );
    CHECK( same( "a = 1 & b /= null", "(a = 1) & (b /= null)" ) );
    CHECK_FALSE( same( "a | b & c", "(a | b) & c" ) );
}

TEST_CASE( "parse: record separators are interchangeable", "[frontend]" )
{
    CHECK( same_expr( *parse_expression( "{ leftHand: null; rightHand: 1; }" ),
                      *parse_expression( "{ leftHand: null, rightHand: 1 }" ) ) );
}

TEST_CASE( "parse: expression spans re-parse to equal nodes", "[frontend]" )
{
    for ( const auto& file : sources )
    {
        const auto src = read_file( corpus_path( file ) );
        const auto p = parse_source( src, file );
        std::size_t checked = 0;
        each_expr( p, [ & ]( const expr& e )
        {
            const auto text = src.substr( e.span.begin, e.span.end - e.span.begin );
            INFO( file << ": " << text );
            CHECK( same_expr( *parse_expression( text ), e ) );
            ++checked;
        } );
        CHECK( checked > 5 );
    }
}

TEST_CASE( "parse: deterministic", "[frontend]" )
{
    for ( const auto& file : sources )
    {
        const auto src = read_file( corpus_path( file ) );
        const auto a = parse_source( src, file );
        const auto b = parse_source( src, file );
        std::vector<std::string> ra;
        std::vector<std::string> rb;
        each_expr( a, [ & ]( const expr& e ) { ra.push_back( to_string( e ) + "@" + std::to_string( e.span.begin ) ); } );
        each_expr( b, [ & ]( const expr& e ) { rb.push_back( to_string( e ) + "@" + std::to_string( e.span.begin ) ); } );
        CHECK( ra == rb );
        REQUIRE( a.systems.size() == b.systems.size() );
        for ( std::size_t i = 0; i < a.systems.size(); ++i )
            for ( std::size_t j = 0; j < a.systems[ i ].specs.size(); ++j )
                CHECK( same_spec( *a.systems[ i ].specs[ j ].body, *b.systems[ i ].specs[ j ].body ) );
    }
}

TEST_CASE( "parse: errors carry location and expected tokens", "[frontend]" )
{
    try
    {
        (void)parse_source( "system X {\n    spec Main {\n        A.\n    }\n}\n" );
        FAIL( "expected parse_error" );
    }
    catch ( const parse_error& e )
    {
        CHECK( e.loc() == source_loc{ 4, 5 } );
        CHECK_FALSE( e.expected().empty() );
    }
    CHECK_THROWS_AS( parse_source( "import A;\nimport A;\n" ), parse_error );
    CHECK_THROWS_AS( parse_source( "system X { init() {} init() {} }" ), parse_error );
    CHECK_THROWS_AS( parse_source( "system X {" ), parse_error );
}

TEST_CASE( "parse: optional last terminator", "[frontend]" )
{
    const auto p = parse_source( "system X { state int a; action A { @.a: 1; @.a: 2 } }" );
    REQUIRE( p.systems[ 0 ].actions.size() == 1 );
    CHECK( p.systems[ 0 ].actions[ 0 ].body.size() == 2 );
}
