#include "seni/core.hpp"

#include <algorithm>
#include <set>

namespace seni
{

// ---- process terms ---------------------------------------------------------

std::size_t process_arena::key_hash::operator()( const proc_node& n ) const
{
    std::size_t h = static_cast<std::size_t>( n.kind );
    hash_combine( h, n.occ );
    for ( const auto k : n.kids )
        hash_combine( h, k );
    return h;
}

process_arena::process_arena()
{
    intern( proc_node{} );
}

proc_id process_arena::intern( proc_node n )
{
    if ( const auto it = _index.find( n ); it != _index.end() )
        return it->second;
    const auto id = static_cast<proc_id>( _nodes.size() );
    _nodes.push_back( n );
    _index.emplace( std::move( n ), id );
    _steps.emplace_back();
    return id;
}

std::uint32_t process_arena::add_occurrence( occurrence o )
{
    for ( std::size_t i = 0; i < _occurrences.size(); ++i )
        if ( _occurrences[ i ].action == o.action && _occurrences[ i ].scopes == o.scopes )
            return static_cast<std::uint32_t>( i );
    _occurrences.push_back( std::move( o ) );
    return static_cast<std::uint32_t>( _occurrences.size() - 1 );
}

proc_id process_arena::act( std::uint32_t occ )
{
    return intern( { proc_kind::act, occ, {} } );
}

proc_id process_arena::seq( proc_id p, proc_id q )
{
    if ( p == done() )
        return q;
    // a loop entered through a self reference never ends
    if ( q == done() || _nodes[ p ].kind == proc_kind::self )
        return p;
    return intern( { proc_kind::seq, 0, { p, q } } );
}

proc_id process_arena::choice( proc_id p, proc_id q )
{
    return intern( { proc_kind::choice, 0, { p, q } } );
}

proc_id process_arena::always( proc_id p )
{
    return intern( { proc_kind::always, 0, { p } } );
}

proc_id process_arena::par( std::vector<proc_id> parts )
{
    std::vector<proc_id> flat;
    for ( const auto p : parts )
    {
        if ( _nodes[ p ].kind == proc_kind::par )
            flat.insert( flat.end(), _nodes[ p ].kids.begin(), _nodes[ p ].kids.end() );
        else
            flat.push_back( p );
    }
    if ( std::all_of( flat.begin(), flat.end(), []( proc_id p ) { return p == done(); } ) )
        return done();
    if ( flat.size() == 1 )
        return flat.front();
    return intern( { proc_kind::par, 0, std::move( flat ) } );
}

proc_id process_arena::self_ref()
{
    const auto index = static_cast<std::uint32_t>( _self_targets.size() );
    _self_targets.push_back( done() );
    return intern( { proc_kind::self, index, {} } );
}

void process_arena::bind( proc_id self, proc_id target )
{
    _self_targets[ _nodes[ self ].occ ] = target;
}

const std::vector<proc_step>& process_arena::raw_steps( proc_id id )
{
    if ( _steps[ id ] )
        return *_steps[ id ];

    std::vector<proc_step> out;
    const auto kind = _nodes[ id ].kind;
    switch ( kind )
    {
    case proc_kind::done:
        break;
    case proc_kind::act:
        out.push_back( { _nodes[ id ].occ, done() } );
        break;
    case proc_kind::seq:
    {
        const auto p = _nodes[ id ].kids[ 0 ];
        const auto q = _nodes[ id ].kids[ 1 ];
        const auto inner = raw_steps( p );
        for ( const auto& s : inner )
            out.push_back( { s.occ, seq( s.next, q ) } );
        break;
    }
    case proc_kind::choice:
    {
        const auto p = _nodes[ id ].kids[ 0 ];
        const auto q = _nodes[ id ].kids[ 1 ];
        const auto left = raw_steps( p );
        const auto right = raw_steps( q );
        out = left;
        out.insert( out.end(), right.begin(), right.end() );
        break;
    }
    case proc_kind::always:
    {
        const auto p = _nodes[ id ].kids[ 0 ];
        const auto inner = raw_steps( p );
        for ( const auto& s : inner )
            out.push_back( { s.occ, seq( s.next, id ) } );
        break;
    }
    case proc_kind::self:
        out = raw_steps( _self_targets[ _nodes[ id ].occ ] );
        break;
    case proc_kind::par:
    {
        const auto parts = _nodes[ id ].kids;
        for ( std::size_t i = 0; i < parts.size(); ++i )
        {
            const auto inner = raw_steps( parts[ i ] );
            for ( const auto& s : inner )
            {
                auto next = parts;
                next[ i ] = s.next;
                out.push_back( { s.occ, par( std::move( next ) ) } );
            }
        }
        break;
    }
    }

    _steps[ id ] = std::make_unique<std::vector<proc_step>>( std::move( out ) );
    return *_steps[ id ];
}

const std::vector<proc_step>& process_arena::steps( proc_id id )
{
    if ( _resolved.size() <= id )
        _resolved.resize( _nodes.size() );
    if ( _resolved[ id ] )
        return *_resolved[ id ];
    auto out = raw_steps( id );
    // A whole configuration that is a self reference is the loop itself.
    for ( auto& st : out )
        if ( _nodes[ st.next ].kind == proc_kind::self && _self_targets[ _nodes[ st.next ].occ ] != done() )
            st.next = _self_targets[ _nodes[ st.next ].occ ];
    if ( _resolved.size() <= id )
        _resolved.resize( _nodes.size() );
    _resolved[ id ] = std::make_unique<std::vector<proc_step>>( std::move( out ) );
    return *_resolved[ id ];
}

std::string process_arena::render( proc_id id, const std::vector<std::string>& labels ) const
{
    const auto& n = _nodes[ id ];
    auto list = [ & ]( std::string head )
    {
        head += "(";
        for ( std::size_t i = 0; i < n.kids.size(); ++i )
            head += ( i ? ", " : "" ) + render( n.kids[ i ], labels );
        return head + ")";
    };
    switch ( n.kind )
    {
    case proc_kind::done: return "Done";
    case proc_kind::act: return "Act(" + labels[ _occurrences[ n.occ ].action ] + ")";
    case proc_kind::seq: return list( "Seq" );
    case proc_kind::choice: return list( "Choice" );
    case proc_kind::always: return list( "Always" );
    case proc_kind::par: return list( "Par" );
    case proc_kind::self: return "Self";
    }
    return {};
}

// ---- instances -------------------------------------------------------------

const std::vector<std::size_t>* instance_node::collection( std::string_view name ) const
{
    for ( const auto& [ n, members ] : collections )
        if ( n == name )
            return &members;
    return nullptr;
}

std::optional<std::size_t> system_instance::find_action( std::string_view label ) const
{
    for ( std::size_t i = 0; i < _actions.size(); ++i )
        if ( _actions[ i ].label == label )
            return i;
    return std::nullopt;
}

std::optional<std::size_t> system_instance::find_prop( std::string_view name ) const
{
    for ( std::size_t i = 0; i < _prop_names.size(); ++i )
        if ( _prop_names[ i ] == name )
            return i;
    return std::nullopt;
}

namespace
{

// Resolves prop references of one instance against a full state vector.
class instance_props final : public prop_context
{
    const std::vector<instance_node>& _nodes;
    std::size_t _node;
    const state_vector& _state;

public:
    instance_props( const std::vector<instance_node>& nodes, std::size_t node, const state_vector& state )
            : _nodes{ nodes }, _node{ node }, _state{ state } {}

    [[nodiscard]] bool eval( std::string_view name ) const
    {
        const auto& n = _nodes[ _node ];
        const auto* p = n.def->props.find( name );
        if ( !p )
            throw eval_fault( "unknown prop '" + std::string{ name } + "'" );
        env en;
        en.state = std::span<const value>{ _state.slots() }.subspan( n.base, n.def->state_vars.size() );
        en.props = this;
        return eval_expr( *p->body, en ).as_bool();
    }

    [[nodiscard]] bool prop( std::string_view name ) const override { return eval( name ); }

    [[nodiscard]] bool fold_prop( std::string_view collection, std::string_view prop, binary_op op ) const override
    {
        const auto* members = _nodes[ _node ].collection( collection );
        if ( !members )
            throw eval_fault( "unknown instance collection '" + std::string{ collection } + "'" );
        const bool conj = op == binary_op::logical_and;
        for ( const auto m : *members )
        {
            const bool v = instance_props{ _nodes, m, _state }.eval( prop );
            if ( conj && !v )
                return false;
            if ( !conj && v )
                return true;
        }
        return conj;
    }
};

} // namespace

bool system_instance::eval_prop( std::size_t prop, const state_vector& s ) const
{
    const auto& [ node, name ] = _prop_sources[ prop ];
    return instance_props{ _nodes, node, s }.eval( name );
}

std::vector<bool> system_instance::labels( const state_vector& s ) const
{
    std::vector<bool> out( _prop_names.size() );
    for ( std::size_t i = 0; i < out.size(); ++i )
        out[ i ] = eval_prop( i, s );
    return out;
}

state_vector system_instance::apply_action( const state_vector& pre, std::size_t act ) const
{
    const auto& a = _actions[ act ];
    const auto& n = _nodes[ a.instance ];
    const auto width = n.def->state_vars.size();

    env en;
    en.state = std::span<const value>{ pre.slots() }.subspan( n.base, width );
    body_effects fx;
    try
    {
        fx = run_body( a.def->body, en );
    }
    catch ( const eval_fault& f )
    {
        throw eval_fault( "in action '" + a.label + "': " + f.what() );
    }

    auto post = pre;
    std::vector<value> slots( pre.slots().begin() + static_cast<std::ptrdiff_t>( n.base ),
                              pre.slots().begin() + static_cast<std::ptrdiff_t>( n.base + width ) );
    apply_writes( slots, fx.writes );
    for ( std::size_t i = 0; i < width; ++i )
        post[ n.base + i ] = std::move( slots[ i ] );
    return post;
}

// ---- elaboration -----------------------------------------------------------

class elaborator
{
    const program_def& _program;
    system_instance& _out;
    std::shared_ptr<const program_def> _owner;
    std::vector<value> _slots;
    std::vector<std::string> _paths;
    std::vector<std::string> _stack;    // spec expansion stack, "node:spec"
    std::vector<std::pair<std::string, proc_id>> _selfs;    // unbound self references by stack key

    static constexpr std::size_t max_depth = 64;

public:
    elaborator( std::shared_ptr<const program_def> program, system_instance& out )
            : _program{ *program }, _out{ out }, _owner{ program }
    {
        _out._program = std::move( program );
    }

    void run( std::string_view entry, std::vector<std::string> args, std::string_view spec )
    {
        auto def = _program.find_shared( entry );
        if ( !def )
            throw elaboration_error( "UnknownSystem", "unknown system '" + std::string{ entry } + "'" );
        if ( !def->specs.contains( spec ) )
        {
            if ( spec == "Main" )
                throw elaboration_error( "NoMainSpec", "system '" + def->name + "' has no Main spec" );
            throw elaboration_error( "UnknownSpec",
                                     "system '" + def->name + "' has no spec '" + std::string{ spec } + "'" );
        }
        if ( args.empty() && def->init && !def->init->params.empty() )
            args = { "0" };

        instantiate( def, "", std::move( args ), 0, 0 );

        auto layout = std::make_shared<state_layout>();
        layout->paths = _paths;
        _out._layout = layout;
        _out._initial = state_vector{ layout, _slots };

        collect_props();

        _out._arena = std::make_shared<process_arena>();
        _out._spec = std::string{ spec };
        _out._main = expand_spec( 0, std::string{ spec }, {} );
        if ( _out._main == process_arena::done() )
            throw elaboration_error( "EmptyProcess", "spec '" + std::string{ spec } + "' has no actions" );
    }

private:
    std::size_t instantiate( std::shared_ptr<const system_def> def, std::string path, std::vector<std::string> args,
                             std::size_t parent, std::size_t depth )
    {
        if ( depth > max_depth )
            throw elaboration_error( "UnboundedRecursion",
                                     "instance nesting deeper than " + std::to_string( max_depth ) + " at '" + path +
                                             "'" );

        const auto index = _out._nodes.size();
        instance_node node;
        node.path = path;
        node.def = def;
        node.base = _slots.size();
        node.args = args;
        node.parent = parent;
        _out._nodes.push_back( node );

        for ( const auto& v : def->state_vars )
        {
            _slots.push_back( v.initial );
            _paths.push_back( node.qualify( v.name ) );
        }

        for ( const auto& a : def->actions )
        {
            if ( def->specs.contains( a->name ) )
                continue;
            _out._actions.push_back( { node.qualify( a->name ), a->name, index, def->actions.find_shared( a->name ) } );
            _out._action_labels.push_back( node.qualify( a->name ) );
        }

        if ( !def->init )
        {
            if ( !def->instance_vars.empty() )
                throw elaboration_error( "UninitializedCollection", "system '" + def->name +
                                                                            "' declares instance collections but "
                                                                            "has no init" );
            return index;
        }

        env en;
        const auto width = def->state_vars.size();
        std::vector<value> mine( _slots.begin() + static_cast<std::ptrdiff_t>( node.base ), _slots.end() );
        mine.resize( width );
        en.state = mine;
        if ( !def->init->params.empty() )
        {
            list_value list;
            for ( const auto& a : args )
                list.items.emplace_back( a );
            en.locals.emplace_back( std::move( list ) );
        }

        body_effects fx;
        try
        {
            fx = run_body( def->init->body, en );
        }
        catch ( const eval_fault& f )
        {
            throw elaboration_error( "EvalFault", "in init of '" + ( path.empty() ? def->name : path ) +
                                                          "': " + f.what() );
        }

        apply_writes( mine, fx.writes );
        std::copy( mine.begin(), mine.end(), _slots.begin() + static_cast<std::ptrdiff_t>( node.base ) );

        std::vector<std::pair<std::string, std::vector<std::size_t>>> collections;
        for ( const auto& iv : def->instance_vars )
            collections.emplace_back( iv->name, std::vector<std::size_t>{} );

        std::set<std::string> assigned;
        for ( const auto& w : fx.instances )
        {
            assigned.insert( w.name );
            auto it = std::find_if( collections.begin(), collections.end(),
                                    [ & ]( const auto& c ) { return c.first == w.name; } );
            it->second.clear();
            const auto& items = w.v.as_list().items;
            for ( std::size_t i = 0; i < items.size(); ++i )
            {
                const auto& iv = std::get<instance_value>( items[ i ].v );
                auto child_def = _program.find_shared( iv.system );
                if ( !child_def )
                    throw elaboration_error( "UnknownSystem", "unknown system '" + iv.system + "'" );
                const auto child_path = node.qualify( w.name ) + "[" + std::to_string( i ) + "]";
                it->second.push_back( instantiate( child_def, child_path, iv.args, index, depth + 1 ) );
            }
        }
        for ( const auto& iv : def->instance_vars )
            if ( !assigned.count( iv->name ) )
                throw elaboration_error( "UninitializedCollection",
                                         "instance collection '" + iv->name + "' of '" + def->name +
                                                 "' is not initialized by init" );

        _out._nodes[ index ].collections = std::move( collections );
        return index;
    }

    void collect_props()
    {
        for ( std::size_t i = 0; i < _out._nodes.size(); ++i )
        {
            const auto& n = _out._nodes[ i ];
            for ( const auto& p : n.def->props )
            {
                _out._prop_names.push_back( n.qualify( p->name ) );
                _out._prop_sources.emplace_back( i, p->name );
            }
        }
    }

    proc_id expand_spec( std::size_t node, const std::string& name, std::vector<scope_tag> scopes )
    {
        const auto& n = _out._nodes[ node ];
        const auto* spec = n.def->specs.find( name );
        const auto key = std::to_string( node ) + ":" + name;
        const auto where = n.path.empty() ? n.def->name : n.path;
        if ( std::find( _stack.begin(), _stack.end(), key ) != _stack.end() )
        {
            // Only a spec that is one always loop may name itself; the
            // reference then stands for the loop.
            if ( spec->body->kind != spec_kind::always )
                throw elaboration_error( "UnboundedRecursion", "spec '" + name + "' of '" + where + "' refers to itself" );
            const auto self = _out._arena->self_ref();
            _selfs.emplace_back( key, self );
            return self;
        }
        if ( n.def->actions.contains( name ) )
            scopes.push_back( { name, true } );
        _stack.push_back( key );
        const auto p = build( node, *spec->body, std::move( scopes ) );
        _stack.pop_back();

        for ( auto it = _selfs.begin(); it != _selfs.end(); )
        {
            if ( it->first != key )
            {
                ++it;
                continue;
            }
            if ( unguarded( p, it->second ) )
                throw elaboration_error( "UnboundedRecursion",
                                         "spec '" + name + "' of '" + where + "' refers to itself before any action" );
            _out._arena->bind( it->second, p );
            it = _selfs.erase( it );
        }
        return p;
    }

    // Can `self` be reached from `t` without taking an action first?
    bool unguarded( proc_id t, proc_id self ) const
    {
        const auto& n = _out._arena->node( t );
        switch ( n.kind )
        {
        case proc_kind::done:
        case proc_kind::act: return false;
        case proc_kind::self: return t == self;
        case proc_kind::seq:
        case proc_kind::always: return unguarded( n.kids[ 0 ], self );
        case proc_kind::choice:
        case proc_kind::par:
            return std::any_of( n.kids.begin(), n.kids.end(), [ & ]( proc_id k ) { return unguarded( k, self ); } );
        }
        return false;
    }

    proc_id members( std::size_t node, const std::string& collection, spec_kind op, std::vector<scope_tag> scopes )
    {
        const auto* list = _out._nodes[ node ].collection( collection );
        std::vector<proc_id> parts;
        for ( const auto m : *list )
        {
            const auto& child = _out._nodes[ m ];
            if ( !child.def->has_main() )
                throw elaboration_error( "NoMainSpec", "'" + child.path + "' (" + child.def->name +
                                                               ") has no Main spec" );
            auto tags = scopes;
            if ( op == spec_kind::seq && m != list->back() )
                for ( auto& t : tags )
                    t.completes = false;
            parts.push_back( expand_spec( m, "Main", std::move( tags ) ) );
        }

        auto& arena = *_out._arena;
        if ( parts.empty() )
            return process_arena::done();
        if ( op == spec_kind::par )
            return arena.par( std::move( parts ) );
        auto acc = parts.back();
        for ( auto i = parts.size() - 1; i-- > 0; )
            acc = op == spec_kind::seq ? arena.seq( parts[ i ], acc ) : arena.choice( parts[ i ], acc );
        return acc;
    }

    proc_id build( std::size_t node, const spec_expr& s, std::vector<scope_tag> scopes )
    {
        auto& arena = *_out._arena;
        const auto& n = _out._nodes[ node ];
        switch ( s.kind )
        {
        case spec_kind::ref:
        {
            if ( n.def->specs.contains( s.name ) )
                return expand_spec( node, s.name, std::move( scopes ) );
            if ( n.def->actions.contains( s.name ) )
            {
                const auto label = n.qualify( s.name );
                const auto act = *_out.find_action( label );
                return arena.act( arena.add_occurrence( { act, std::move( scopes ) } ) );
            }
            if ( n.collection( s.name ) )
                return members( node, s.name, spec_kind::par, std::move( scopes ) );
            throw elaboration_error( "UnresolvedName", "unknown spec element '" + s.name + "'" );
        }
        case spec_kind::fold:
            return members( node, s.name, s.fold_op, std::move( scopes ) );
        case spec_kind::seq:
        {
            auto first = scopes;
            for ( auto& t : first )
                t.completes = false;
            auto acc = build( node, *s.kids.back(), scopes );
            for ( auto i = s.kids.size() - 1; i-- > 0; )
                acc = arena.seq( build( node, *s.kids[ i ], first ), acc );
            return acc;
        }
        case spec_kind::choice:
        {
            auto acc = build( node, *s.kids.back(), scopes );
            for ( auto i = s.kids.size() - 1; i-- > 0; )
                acc = arena.choice( build( node, *s.kids[ i ], scopes ), acc );
            return acc;
        }
        case spec_kind::par:
        {
            std::vector<proc_id> parts;
            for ( const auto& k : s.kids )
                parts.push_back( build( node, *k, scopes ) );
            return arena.par( std::move( parts ) );
        }
        case spec_kind::always:
        {
            for ( auto& t : scopes )
                t.completes = false;
            const auto body = build( node, *s.kids.front(), std::move( scopes ) );
            if ( body == process_arena::done() )
                throw elaboration_error( "EmptyAlways", "'always' body has no actions" );
            return arena.always( body );
        }
        }
        return process_arena::done();
    }
};

system_instance elaborate( std::shared_ptr<const program_def> program, std::string_view entry,
                           std::vector<std::string> args, std::string_view spec )
{
    system_instance out;
    elaborator{ program, out }.run( entry, std::move( args ), spec );
    return out;
}

} // namespace seni
