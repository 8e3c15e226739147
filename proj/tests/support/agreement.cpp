#include "agreement.hpp"

#include "seni/verify.hpp"

#include <deque>
#include <map>
#include <sstream>

namespace seni::testing
{

random_case load_random( std::uint64_t seed, std::size_t max_states )
{
    random_case c;
    c.model = make_random_system( seed );
    c.x = explore( load_source( c.model.source ), c.model.name, max_states );
    return c;
}

std::string model_key( const model_state& s )
{
    std::string k;
    for ( const auto& [ name, v ] : s )
        k += name + "=" + std::to_string( v ) + ";";
    return k;
}

oracle_graph<model_state> oracle_of( const random_system& model, std::size_t limit )
{
    return enumerate_bfs<model_state>(
            term_of( model ), model.initial(),
            [ & ]( const std::string& a, const model_state& s ) { return model.apply( a, s ); }, model_key, limit );
}

std::string labeling_mismatch( const random_system& model, const lts& g )
{
    const auto& names = g.prop_names();
    for ( std::size_t i = 0; i < g.nodes().size(); ++i )
    {
        const auto s = model.read( g.state( i ) );
        for ( std::size_t p = 0; p < names.size(); ++p )
            if ( g.nodes()[ i ].labels[ p ] != model.eval_prop( names[ p ], s ) )
                return model.name + " node " + std::to_string( i ) + " prop " + names[ p ] + " at " + model_key( s );
    }
    return {};
}

std::string graph_mismatch( const random_system& model, const lts& g, const oracle_graph<model_state>& o )
{
    const auto where = model.name + ": ";
    if ( g.nodes().size() != o.nodes.size() )
        return where + "nodes " + std::to_string( g.nodes().size() ) + " vs oracle " + std::to_string( o.nodes.size() );
    if ( g.edges().size() != o.edges.size() )
        return where + "edges " + std::to_string( g.edges().size() ) + " vs oracle " + std::to_string( o.edges.size() );
    for ( std::size_t i = 0; i < o.nodes.size(); ++i )
    {
        if ( model.read( g.state( i ) ) != o.nodes[ i ].second )
            return where + "state of node " + std::to_string( i );
        if ( g.nodes()[ i ].depth != o.depth[ i ] )
            return where + "depth of node " + std::to_string( i );
    }
    for ( std::size_t k = 0; k < o.edges.size(); ++k )
    {
        const auto& [ src, action, dst ] = o.edges[ k ];
        const auto& e = g.edges()[ k ];
        if ( e.src != src || e.dst != dst || g.label_of( e ) != action )
            return where + "edge " + std::to_string( k ) + " " + g.label_of( e ) + " vs oracle " + action;
    }
    return {};
}

expectation expect_always( const gen_formula& f, const random_system& model, const oracle_graph<model_state>& o )
{
    std::vector<bool> labels;
    expectation e;
    for ( std::size_t i = 0; i < o.nodes.size(); ++i )
    {
        labels.clear();
        for ( const auto& [ name, body ] : model.props )
            labels.push_back( model.eval_prop( name, o.nodes[ i ].second ) );
        if ( !f.eval( labels ) && ( !e.violation_depth || o.depth[ i ] < *e.violation_depth ) )
            e.violation_depth = o.depth[ i ];
    }
    return e;
}

expectation expect_always( const gen_formula& f, const lts& g )
{
    const auto n = g.nodes().size();
    std::vector<std::size_t> dist( n, SIZE_MAX );
    std::vector<std::vector<std::size_t>> succ( n );
    for ( const auto& e : g.edges() )
        succ[ e.src ].push_back( e.dst );
    std::deque<std::size_t> queue{ 0 };
    dist[ 0 ] = 0;
    while ( !queue.empty() )
    {
        const auto u = queue.front();
        queue.pop_front();
        for ( const auto v : succ[ u ] )
            if ( dist[ v ] == SIZE_MAX )
            {
                dist[ v ] = dist[ u ] + 1;
                queue.push_back( v );
            }
    }
    expectation e;
    for ( std::size_t i = 0; i < n; ++i )
        if ( !f.eval( g.nodes()[ i ].labels ) && ( !e.violation_depth || dist[ i ] < *e.violation_depth ) )
            e.violation_depth = dist[ i ];
    return e;
}

std::string verdict_mismatch( const gen_formula& f, const lts& g, const expectation& e )
{
    const auto text = f.text( g.prop_names() );
    const auto v = check_property( parse_formula( text, g.prop_names() ), true, g );
    if ( !e.violation_depth )
        return v.status == verdict_status::holds ? std::string{} : "expected HOLDS for " + text;
    if ( v.status != verdict_status::violated )
        return "expected VIOLATED for " + text;
    if ( v.trace.size() != *e.violation_depth )
        return "trace of " + std::to_string( v.trace.size() ) + " steps, expected " + std::to_string( *e.violation_depth ) +
               " for " + text;
    std::size_t at = 0;
    for ( const auto edge : v.trace )
    {
        if ( g.edges()[ edge ].src != at )
            return "trace is not a path for " + text;
        at = g.edges()[ edge ].dst;
    }
    if ( at != v.node || f.eval( g.nodes()[ at ].labels ) )
        return "trace does not end in a violation of " + text;
    return {};
}

} // namespace seni::testing
