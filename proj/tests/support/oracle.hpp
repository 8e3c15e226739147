#pragma once

// Reference enumerator with its own process semantics. It shares nothing
// with the explorer: terms are plain trees identified by a canonical string.

#include "random_system.hpp"
#include "seni/program.hpp"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace seni::testing
{

struct oterm;
using oterm_ptr = std::shared_ptr<const oterm>;

struct oterm
{
    enum class kind
    {
        done,
        act,
        seq,
        choice,
        always,
        par
    };

    kind k = kind::done;
    std::string action;
    std::vector<oterm_ptr> kids;
    std::string key;
};

namespace oracle
{

oterm_ptr done();
oterm_ptr act( const std::string& action );
oterm_ptr seq( oterm_ptr p, oterm_ptr q );
oterm_ptr choice( oterm_ptr p, oterm_ptr q );
oterm_ptr always( oterm_ptr p );
oterm_ptr par( std::vector<oterm_ptr> parts );

// (action, continuation) pairs in component order, then branch order.
std::vector<std::pair<std::string, oterm_ptr>> steps( const oterm_ptr& t );

} // namespace oracle

// Main process of a generated system, helper specs inlined.
oterm_ptr term_of( const random_system& sys, const std::string& spec = "Main" );

// Process of a spec of a single checked system without sub-instances.
oterm_ptr term_of( const system_def& sys, const std::string& spec = "Main" );

template <typename State>
struct oracle_graph
{
    std::vector<std::pair<oterm_ptr, State>> nodes;     // BFS order
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
    std::vector<std::size_t> depth;
    bool complete = true;
};

// Breadth-first enumeration with deduplication on (term, state key).
template <typename State>
oracle_graph<State> enumerate_bfs( oterm_ptr start, State init, const std::function<State( const std::string&, const State& )>& apply,
                                   const std::function<std::string( const State& )>& key, std::size_t limit )
{
    oracle_graph<State> g;
    std::map<std::string, std::size_t> seen;
    auto add = [ & ]( oterm_ptr t, State s, std::size_t d ) -> std::size_t
    {
        const auto k = t->key + "|" + key( s );
        if ( const auto it = seen.find( k ); it != seen.end() )
            return it->second;
        seen.emplace( k, g.nodes.size() );
        g.nodes.emplace_back( std::move( t ), std::move( s ) );
        g.depth.push_back( d );
        return g.nodes.size() - 1;
    };
    add( std::move( start ), std::move( init ), 0 );
    for ( std::size_t i = 0; i < g.nodes.size(); ++i )
    {
        if ( g.nodes.size() > limit )
        {
            g.complete = false;
            break;
        }
        const auto [ term, state ] = g.nodes[ i ];
        for ( const auto& [ action, next ] : oracle::steps( term ) )
        {
            const auto dst = add( next, apply( action, state ), g.depth[ i ] + 1 );
            g.edges.emplace_back( i, action, dst );
        }
    }
    return g;
}

struct sequence_census
{
    std::size_t configurations = 0;
    std::size_t transitions = 0;        // distinct (source, action, target) triples
    std::size_t states = 0;             // distinct state keys
    std::size_t sequences = 0;          // action sequences walked
    std::size_t new_at_last_level = 0;  // configurations first met at the maximal depth
};

// Walks every action sequence of length up to `depth` without any sharing
// and collects the configurations met on the way.
template <typename State>
sequence_census enumerate_sequences( oterm_ptr start, State init,
                                     const std::function<State( const std::string&, const State& )>& apply,
                                     const std::function<std::string( const State& )>& key, int depth )
{
    std::map<std::string, int> configs;     // key -> least depth
    std::set<std::string> states;
    std::set<std::tuple<std::string, std::string, std::string>> transitions;
    sequence_census out;

    std::function<void( const oterm_ptr&, const State&, int )> walk = [ & ]( const oterm_ptr& t, const State& s, int d )
    {
        const auto k = t->key + "|" + key( s );
        const auto [ it, fresh ] = configs.emplace( k, d );
        if ( !fresh )
            it->second = std::min( it->second, d );
        states.insert( key( s ) );
        ++out.sequences;
        if ( d == depth )
            return;
        for ( const auto& [ action, next ] : oracle::steps( t ) )
        {
            const auto post = apply( action, s );
            transitions.emplace( k, action, next->key + "|" + key( post ) );
            walk( next, post, d + 1 );
        }
    };
    walk( start, init, 0 );

    out.configurations = configs.size();
    out.transitions = transitions.size();
    out.states = states.size();
    for ( const auto& [ k, d ] : configs )
        out.new_at_last_level += d == depth ? 1 : 0;
    return out;
}

} // namespace seni::testing
