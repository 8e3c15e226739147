#include "seni/verify.hpp"

#include "seni/parser.hpp"

namespace seni
{

bool eval_formula( const prop_formula& f, const std::vector<bool>& labels )
{
    using k = prop_formula::kind;
    switch ( f.k )
    {
    case k::constant: return f.value;
    case k::prop: return labels[ f.prop ];
    case k::negation: return !eval_formula( f.kids[ 0 ], labels );
    case k::conjunction: return eval_formula( f.kids[ 0 ], labels ) && eval_formula( f.kids[ 1 ], labels );
    case k::disjunction: return eval_formula( f.kids[ 0 ], labels ) || eval_formula( f.kids[ 1 ], labels );
    case k::implication: return !eval_formula( f.kids[ 0 ], labels ) || eval_formula( f.kids[ 1 ], labels );
    }
    return false;
}

std::string to_string( const prop_formula& f, const std::vector<std::string>& names )
{
    using k = prop_formula::kind;
    switch ( f.k )
    {
    case k::constant: return f.value ? "true" : "false";
    case k::prop: return names[ f.prop ];
    case k::negation: return "!(" + to_string( f.kids[ 0 ], names ) + ")";
    case k::conjunction: return "(" + to_string( f.kids[ 0 ], names ) + " & " + to_string( f.kids[ 1 ], names ) + ")";
    case k::disjunction: return "(" + to_string( f.kids[ 0 ], names ) + " | " + to_string( f.kids[ 1 ], names ) + ")";
    case k::implication:
        return "(" + to_string( f.kids[ 0 ], names ) + " => " + to_string( f.kids[ 1 ], names ) + ")";
    }
    return {};
}

namespace
{

std::size_t prop_index( const std::string& name, const std::vector<std::string>& names )
{
    for ( std::size_t i = 0; i < names.size(); ++i )
        if ( names[ i ] == name )
            return i;
    throw unresolved_prop( "unknown prop '" + name + "'" );
}

prop_formula::kind connective( binary_op op )
{
    switch ( op )
    {
    case binary_op::logical_and: return prop_formula::kind::conjunction;
    case binary_op::logical_or: return prop_formula::kind::disjunction;
    case binary_op::implies: return prop_formula::kind::implication;
    default: throw unresolved_prop( "operator '" + std::string{ spelling( op ) } + "' is not allowed in formulas" );
    }
}

// Qualified prop name of `philosophers[0].Waiting`-shaped expressions.
std::optional<std::string> dotted_name( const expr& e )
{
    switch ( e.kind )
    {
    case expr_kind::name: return e.name;
    case expr_kind::field:
        if ( auto base = dotted_name( *e.kids[ 0 ] ) )
            return *base + "." + e.name;
        return std::nullopt;
    case expr_kind::index:
        if ( e.kids[ 1 ]->kind != expr_kind::int_lit )
            return std::nullopt;
        if ( auto base = dotted_name( *e.kids[ 0 ] ) )
            return *base + "[" + std::to_string( e.kids[ 1 ]->int_value ) + "]";
        return std::nullopt;
    default: return std::nullopt;
    }
}

prop_formula from_expr( const expr& e, const std::vector<std::string>& names )
{
    switch ( e.kind )
    {
    case expr_kind::bool_lit: return prop_formula::constant_of( e.bool_value );
    case expr_kind::unary:
        if ( e.uop != unary_op::logical_not )
            break;
        return prop_formula::negate( from_expr( *e.kids[ 0 ], names ) );
    case expr_kind::binary:
        return prop_formula::binary( connective( e.bop ), from_expr( *e.kids[ 0 ], names ),
                                     from_expr( *e.kids[ 1 ], names ) );
    default:
        if ( const auto n = dotted_name( e ) )
            return prop_formula::prop_of( prop_index( *n, names ) );
    }
    throw unresolved_prop( "formulas may only combine prop names with ! & | =>" );
}

} // namespace

prop_formula compile_formula( const texpr& e, const std::vector<std::string>& names )
{
    switch ( e.kind )
    {
    case texpr_kind::literal: return prop_formula::constant_of( e.literal.as_bool() );
    case texpr_kind::prop_ref: return prop_formula::prop_of( prop_index( e.name, names ) );
    case texpr_kind::unary: return prop_formula::negate( compile_formula( *e.kids[ 0 ], names ) );
    case texpr_kind::binary:
        return prop_formula::binary( connective( e.bop ), compile_formula( *e.kids[ 0 ], names ),
                                     compile_formula( *e.kids[ 1 ], names ) );
    default: throw unresolved_prop( "unsupported formula" );
    }
}

prop_formula parse_formula( const std::string& text, const std::vector<std::string>& names )
{
    return from_expr( *parse_expression( text ), names );
}

verdict check_property( const prop_formula& f, bool always, const lts& g )
{
    verdict v;
    const auto& nodes = g.nodes();
    const auto limit = always ? nodes.size() : std::size_t{ 1 };
    for ( std::size_t i = 0; i < limit; ++i )
        if ( !eval_formula( f, nodes[ i ].labels ) )
        {
            v.status = verdict_status::violated;
            v.node = i;
            v.trace = g.path_to( i );
            return v;
        }
    if ( always && g.truncated() )
    {
        v.status = verdict_status::inconclusive;
        v.bound = g.bound();
    }
    return v;
}

std::optional<std::size_t> find_satisfying_state( const prop_formula& f, const lts& g )
{
    const auto& nodes = g.nodes();
    for ( std::size_t i = 0; i < nodes.size(); ++i )
        if ( eval_formula( f, nodes[ i ].labels ) )
            return i;
    return std::nullopt;
}

deadlock_report detect_deadlock( const lts& g )
{
    deadlock_report out;
    out.truncated = g.truncated();
    for ( std::size_t i = 0; i < g.nodes().size(); ++i )
        if ( g.nodes()[ i ].complete && g.out_edges( i ).empty() )
            out.sinks.push_back( i );
    return out;
}

std::string render_diff( const state_vector& before, const state_vector& after )
{
    std::string out;
    for ( const auto& [ path, v ] : diff( before, after ) )
    {
        if ( !out.empty() )
            out += ", ";
        out += path + "=" + to_string( v );
    }
    return out.empty() ? "(no change)" : out;
}

std::vector<std::string> render_trace( const lts& g, const std::vector<std::uint32_t>& trace )
{
    std::vector<std::string> out;
    for ( const auto e : trace )
    {
        const auto& edge = g.edges()[ e ];
        out.push_back( "  " + g.label_of( edge ) + " -> " + render_diff( g.state( edge.src ), g.state( edge.dst ) ) );
    }
    return out;
}

} // namespace seni
