#include "seni/explorer.hpp"

#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace seni
{

std::vector<enabled_step> enabled_steps( const system_instance& sys, const configuration& c )
{
    std::vector<enabled_step> out;
    const auto steps = sys.processes().steps( c.control );
    for ( const auto& s : steps )
    {
        const auto act = sys.processes().occ( s.occ ).action;
        state_vector post;
        try
        {
            post = sys.apply_action( c.state, act );
        }
        catch ( const eval_fault& f )
        {
            throw exploration_fault( f.what(), { sys.action_labels()[ act ] } );
        }
        out.push_back( { act, s.occ, { s.next, std::move( post ) } } );
    }
    return out;
}

std::span<const lts_edge> lts::out_edges( std::size_t node ) const
{
    return std::span<const lts_edge>{ _edges }.subspan( _first_edge[ node ], _first_edge[ node + 1 ] - _first_edge[ node ] );
}

std::size_t lts::action_of( const lts_edge& e ) const
{
    return _sys->processes().occ( e.occ ).action;
}

const std::string& lts::label_of( const lts_edge& e ) const
{
    return _sys->action_labels()[ action_of( e ) ];
}

const occurrence& lts::occurrence_of( const lts_edge& e ) const
{
    return _sys->processes().occ( e.occ );
}

std::vector<std::uint32_t> lts::path_to( std::size_t node ) const
{
    std::vector<std::uint32_t> out;
    while ( _nodes[ node ].parent_edge != no_edge )
    {
        out.push_back( _nodes[ node ].parent_edge );
        node = _edges[ _nodes[ node ].parent_edge ].src;
    }
    return { out.rbegin(), out.rend() };
}

namespace
{

struct config_hash
{
    std::size_t operator()( const configuration& c ) const
    {
        auto h = c.state.hash();
        hash_combine( h, c.control );
        return h;
    }
};

} // namespace

lts build_lts( const system_instance& sys, std::size_t max_states )
{
    lts g;
    g._sys = &sys;
    g._bound = max_states;
    if ( max_states == 0 )
        max_states = 1;

    std::unordered_map<configuration, std::uint32_t, config_hash> index;
    std::unordered_set<state_vector, state_vector_hash> states;

    auto add = [ & ]( configuration c, std::uint32_t depth, std::uint32_t parent_edge ) -> std::uint32_t
    {
        const auto id = static_cast<std::uint32_t>( g._nodes.size() );
        lts_node n;
        n.labels = sys.labels( c.state );
        n.depth = depth;
        n.parent_edge = parent_edge;
        states.insert( c.state );
        index.emplace( c, id );
        n.config = std::move( c );
        g._nodes.push_back( std::move( n ) );
        return id;
    };

    add( { sys.main_process(), sys.initial_state() }, 0, no_edge );

    for ( std::size_t cur = 0; cur < g._nodes.size(); ++cur )
    {
        g._first_edge.push_back( g._edges.size() );
        const auto config = g._nodes[ cur ].config;

        std::vector<enabled_step> succ;
        try
        {
            succ = enabled_steps( sys, config );
        }
        catch ( const exploration_fault& f )
        {
            std::vector<std::string> trace;
            for ( const auto e : g.path_to( cur ) )
                trace.push_back( g.label_of( g._edges[ e ] ) );
            trace.insert( trace.end(), f.trace().begin(), f.trace().end() );
            throw exploration_fault( f.what(), std::move( trace ) );
        }

        for ( auto& s : succ )
        {
            std::uint32_t dst;
            if ( const auto it = index.find( s.next ); it != index.end() )
                dst = it->second;
            else if ( g._nodes.size() >= max_states )
            {
                g._nodes[ cur ].complete = false;
                g._truncated = true;
                continue;
            }
            else
                dst = add( std::move( s.next ), g._nodes[ cur ].depth + 1,
                           static_cast<std::uint32_t>( g._edges.size() ) );
            g._edges.push_back( { static_cast<std::uint32_t>( cur ), s.occ, dst } );
        }
    }
    g._first_edge.push_back( g._edges.size() );
    g._states = states.size();
    return g;
}

namespace
{

std::string props_of( const lts& g, std::size_t node, const char* sep )
{
    std::string out;
    const auto& labels = g.nodes()[ node ].labels;
    for ( std::size_t i = 0; i < labels.size(); ++i )
        if ( labels[ i ] )
        {
            if ( !out.empty() )
                out += sep;
            out += g.prop_names()[ i ];
        }
    return out;
}

std::string dot_escape( const std::string& s )
{
    std::string out;
    for ( const char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string export_dot( const lts& g )
{
    std::ostringstream out;
    out << "digraph lts {\n";
    for ( std::size_t i = 0; i < g.nodes().size(); ++i )
    {
        auto label = std::to_string( i );
        const auto props = props_of( g, i, "," );
        if ( !props.empty() )
            label += "\\n" + dot_escape( props );
        out << "  n" << i << " [shape=" << ( i == g.initial() ? "doublecircle" : "circle" ) << ", label=\"" << label
            << "\"];\n";
    }
    for ( const auto& e : g.edges() )
        out << "  n" << e.src << " -> n" << e.dst << " [label=\"" << dot_escape( g.label_of( e ) ) << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string export_text( const lts& g )
{
    std::ostringstream out;
    for ( std::size_t i = 0; i < g.nodes().size(); ++i )
    {
        out << "node " << i;
        const auto props = props_of( g, i, "," );
        if ( !props.empty() )
            out << ' ' << props;
        out << '\n';
    }
    for ( const auto& e : g.edges() )
        out << "edge " << e.src << ' ' << g.label_of( e ) << ' ' << e.dst << '\n';
    out << "init 0\n";
    return out.str();
}

std::vector<walk_step> random_walk( const system_instance& sys, std::size_t steps, std::uint64_t seed )
{
    std::mt19937_64 rng{ seed };
    std::vector<walk_step> out;
    configuration c{ sys.main_process(), sys.initial_state() };
    for ( std::size_t i = 0; i < steps; ++i )
    {
        auto succ = enabled_steps( sys, c );
        if ( succ.empty() )
            break;
        auto& pick = succ[ rng() % succ.size() ];
        c = std::move( pick.next );
        out.push_back( { sys.action_labels()[ pick.action ], c.state } );
    }
    return out;
}

} // namespace seni
