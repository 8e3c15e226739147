#include "seni/refine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <unordered_map>

namespace seni
{

action_map derive_action_map( const system_def& abstract, const system_def& refined )
{
    const auto live = abstract.live_actions();
    const std::set<std::string> abstract_live( live.begin(), live.end() );

    action_map out;
    auto assign = [ & ]( const std::string& action, const std::string& target )
    {
        const auto [ it, fresh ] = out.targets.emplace( action, target );
        if ( !fresh && it->second != target )
            throw refinement_error( "AmbiguousMapping", "action '" + action + "' decomposes both '" + it->second +
                                                                "' and '" + target + "'" );
    };

    for ( const auto& spec : refined.specs )
    {
        if ( !abstract_live.count( spec->name ) )
            continue;
        std::set<std::string> visited{ spec->name };
        std::function<void( const spec_expr& )> walk = [ & ]( const spec_expr& s )
        {
            if ( s.kind == spec_kind::ref )
            {
                if ( const auto* nested = refined.specs.find( s.name ) )
                {
                    if ( abstract_live.count( s.name ) || !visited.insert( s.name ).second )
                        return;
                    walk( *nested->body );
                }
                else if ( refined.actions.contains( s.name ) )
                    assign( s.name, spec->name );
                return;
            }
            for ( const auto& k : s.kids )
                walk( *k );
        };
        walk( *spec->body );
    }

    for ( const auto& a : refined.live_actions() )
    {
        if ( out.targets.count( a ) )
            continue;
        if ( abstract_live.count( a ) )
            out.targets.emplace( a, a );
        else
            out.unmapped.push_back( a );
    }
    return out;
}

action_map identity_map( const system_def& sys )
{
    action_map out;
    for ( const auto& a : sys.live_actions() )
        out.targets.emplace( a, a );
    return out;
}

action_map compose( const action_map& first, const action_map& second )
{
    action_map out;
    out.unmapped = first.unmapped;
    for ( const auto& [ refined, middle ] : first.targets )
    {
        if ( const auto* target = second.find( middle ) )
            out.targets.emplace( refined, *target );
        else
            out.unmapped.push_back( refined );
    }
    return out;
}

namespace
{

struct edge_view
{
    bool internal = false;
    std::string label;      // abstract label the step is observed as
};

bool contains( const std::vector<std::uint32_t>& sorted, std::uint32_t v )
{
    return std::binary_search( sorted.begin(), sorted.end(), v );
}

} // namespace

simulation_result check_simulation( const lts& abstract, const lts& refined, const action_map& map,
                                    simulation_options options )
{
    if ( abstract.truncated() || refined.truncated() )
        throw refinement_error( "TruncatedInput", "simulation needs fully explored transition systems" );

    const auto& rsys = refined.instance();
    const auto n = refined.nodes().size();
    const auto m = abstract.nodes().size();

    // How each refined edge is observed.
    std::vector<edge_view> views;
    views.reserve( refined.edges().size() );
    for ( const auto& e : refined.edges() )
    {
        const auto& act = rsys.actions()[ refined.action_of( e ) ];
        // Sub-instances are shared by both levels; only the entry's own
        // actions are renamed.
        const auto* target = act.instance == 0 ? map.find( act.name ) : &act.name;
        if ( !target )
            throw refinement_error( "UnmappedAction",
                                    "refined action '" + act.label + "' has no abstract counterpart" );
        const auto& scopes = refined.occurrence_of( e ).scopes;
        const auto scope = std::find_if( scopes.rbegin(), scopes.rend(),
                                         [ & ]( const scope_tag& t ) { return t.spec == *target; } );
        edge_view v;
        v.internal = scope != scopes.rend() && !scope->completes;
        v.label = rsys.nodes()[ act.instance ].qualify( *target );
        views.push_back( std::move( v ) );
    }

    std::vector<bool> stable( n, true );
    for ( std::size_t i = 0; i < refined.edges().size(); ++i )
        if ( views[ i ].internal )
            stable[ refined.edges()[ i ].dst ] = false;
    stable[ 0 ] = true;

    // Slots compared in strict mode: the abstract system's state variables.
    std::vector<std::pair<std::size_t, std::size_t>> shared;
    if ( options.strict )
    {
        const auto& paths = abstract.instance().layout().paths;
        for ( std::size_t i = 0; i < paths.size(); ++i )
            if ( const auto j = rsys.layout().find( paths[ i ] ) )
                shared.emplace_back( i, *j );
    }
    auto agree = [ & ]( std::size_t r, std::size_t a )
    {
        if ( !stable[ r ] )
            return true;
        for ( const auto& [ ai, ri ] : shared )
            if ( !( abstract.state( a )[ ai ] == refined.state( r )[ ri ] ) )
                return false;
        return true;
    };

    std::unordered_map<std::size_t, std::vector<std::uint32_t>> by_projection;
    auto projection_hash = [ & ]( const state_vector& s, bool use_abstract_index )
    {
        std::size_t h = 0;
        for ( const auto& [ ai, ri ] : shared )
            hash_combine( h, hash_value( s[ use_abstract_index ? ai : ri ] ) );
        return h;
    };
    for ( std::uint32_t a = 0; a < m; ++a )
        by_projection[ projection_hash( abstract.state( a ), true ) ].push_back( a );

    std::vector<std::vector<std::uint32_t>> cand( n );
    for ( std::size_t r = 0; r < n; ++r )
    {
        if ( !stable[ r ] || shared.empty() )
        {
            cand[ r ].resize( m );
            for ( std::uint32_t a = 0; a < m; ++a )
                cand[ r ][ a ] = a;
            continue;
        }
        const auto it = by_projection.find( projection_hash( refined.state( r ), false ) );
        if ( it == by_projection.end() )
            continue;
        for ( const auto a : it->second )
            if ( agree( r, a ) )
                cand[ r ].push_back( a );
    }

    auto matched = [ & ]( std::size_t r, std::uint32_t a )
    {
        const auto first = refined.out_edges( r ).data() - refined.edges().data();
        const auto out = refined.out_edges( r );
        for ( std::size_t k = 0; k < out.size(); ++k )
        {
            const auto& e = out[ k ];
            const auto& view = views[ static_cast<std::size_t>( first ) + k ];
            if ( view.internal )
            {
                if ( !contains( cand[ e.dst ], a ) )
                    return false;
                continue;
            }
            bool found = false;
            for ( const auto& ae : abstract.out_edges( a ) )
                if ( abstract.label_of( ae ) == view.label && contains( cand[ e.dst ], ae.dst ) )
                {
                    found = true;
                    break;
                }
            if ( !found )
                return false;
        }
        return true;
    };

    simulation_result result;
    for ( bool changed = true; changed; )
    {
        changed = false;
        ++result.iterations;
        for ( std::size_t r = 0; r < n; ++r )
        {
            auto& list = cand[ r ];
            const auto before = list.size();
            std::erase_if( list, [ & ]( std::uint32_t a ) { return !matched( r, a ); } );
            changed = changed || list.size() != before;
        }
    }

    for ( const auto& c : cand )
        result.relation_size += c.size();
    result.simulated = contains( cand[ 0 ], 0 );
    if ( result.simulated )
        return result;

    // Explain: follow the refined system while tracking every abstract node
    // that could still match, until an observable step has no match.
    using key = std::pair<std::size_t, std::vector<std::uint32_t>>;
    struct entry
    {
        key k;
        std::size_t parent;
        std::uint32_t edge;
    };
    std::vector<entry> queue;
    std::set<key> seen;

    std::vector<std::uint32_t> start;
    if ( agree( 0, 0 ) )
        start.push_back( 0 );
    else
    {
        result.refined_node = 0;
        result.candidates = { 0 };
        result.offending_action = "<initial state>";
        return result;
    }
    queue.push_back( { { 0, start }, 0, no_edge } );
    seen.insert( queue.front().k );

    auto trace_of = [ & ]( std::size_t i )
    {
        std::vector<std::uint32_t> t;
        for ( ; queue[ i ].edge != no_edge; i = queue[ i ].parent )
            t.push_back( queue[ i ].edge );
        return std::vector<std::uint32_t>( t.rbegin(), t.rend() );
    };

    constexpr std::size_t explain_limit = 200'000;
    for ( std::size_t i = 0; i < queue.size() && queue.size() < explain_limit; ++i )
    {
        const auto r = queue[ i ].k.first;
        const auto set = queue[ i ].k.second;
        const auto out = refined.out_edges( r );
        const auto first = static_cast<std::size_t>( out.data() - refined.edges().data() );
        for ( std::size_t k = 0; k < out.size(); ++k )
        {
            const auto& e = out[ k ];
            const auto& view = views[ first + k ];
            std::set<std::uint32_t> next;
            for ( const auto a : set )
            {
                if ( view.internal )
                {
                    if ( agree( e.dst, a ) )
                        next.insert( a );
                    continue;
                }
                for ( const auto& ae : abstract.out_edges( a ) )
                    if ( abstract.label_of( ae ) == view.label && agree( e.dst, ae.dst ) )
                        next.insert( ae.dst );
            }
            if ( next.empty() )
            {
                result.refined_node = r;
                result.candidates.assign( set.begin(), set.end() );
                result.offending_action = view.label;
                result.trace = trace_of( i );
                result.trace.push_back( static_cast<std::uint32_t>( first + k ) );
                return result;
            }
            key nk{ e.dst, { next.begin(), next.end() } };
            if ( seen.insert( nk ).second )
                queue.push_back( { std::move( nk ), i, static_cast<std::uint32_t>( first + k ) } );
        }
    }

    // Every trace is matched but the branching structure is not: report the
    // first step of the initial node that no surviving candidate answers.
    result.refined_node = 0;
    result.candidates = { 0 };
    const auto out = refined.out_edges( 0 );
    for ( std::size_t k = 0; k < out.size(); ++k )
    {
        const auto& view = views[ k ];
        bool ok = false;
        if ( view.internal )
            ok = contains( cand[ out[ k ].dst ], 0 );
        else
            for ( const auto& ae : abstract.out_edges( 0 ) )
                ok = ok || ( abstract.label_of( ae ) == view.label && contains( cand[ out[ k ].dst ], ae.dst ) );
        if ( !ok )
        {
            result.offending_action = view.label;
            result.trace = { static_cast<std::uint32_t>( k ) };
            break;
        }
    }
    return result;
}

} // namespace seni
