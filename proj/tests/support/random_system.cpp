#include "random_system.hpp"

#include <sstream>
#include <stdexcept>

namespace seni::testing
{

namespace
{

class generator
{
    std::mt19937_64 _rng;
    random_system& _sys;
    std::size_t _props_done = 0;
    std::size_t _specs_done = 0;

public:
    generator( std::uint64_t seed, random_system& sys ) : _rng{ seed }, _sys{ sys } {}

    int pick( int n ) { return static_cast<int>( _rng() % static_cast<std::uint64_t>( n ) ); }
    bool coin( int percent ) { return pick( 100 ) < percent; }

    template <typename T>
    const T& any( const std::vector<T>& xs ) { return xs[ static_cast<std::size_t>( pick( static_cast<int>( xs.size() ) ) ) ]; }

    std::vector<const gen_var*> vars( bool is_bool ) const
    {
        std::vector<const gen_var*> out;
        for ( const auto& v : _sys.vars )
            if ( v.is_bool == is_bool )
                out.push_back( &v );
        return out;
    }

    gen_expr int_expr( int depth )
    {
        const auto ints = vars( false );
        const auto bools = vars( true );
        const int choice = depth <= 0 ? pick( 2 ) : pick( 5 );
        if ( choice == 0 || ( choice == 1 && ints.empty() ) )
            return { gen_expr::op::int_lit, pick( 5 ), {}, {} };
        if ( choice == 1 )
            return { gen_expr::op::var, 0, any( ints )->name, {} };
        if ( choice == 4 && !bools.empty() )
            return { gen_expr::op::conditional, 0, {}, { bool_expr( depth - 1, false ), int_expr( depth - 1 ), int_expr( depth - 1 ) } };
        const auto o = choice == 3 ? gen_expr::op::mul : gen_expr::op::add;
        return { o, 0, {}, { int_expr( depth - 1 ), int_expr( depth - 1 ) } };
    }

    gen_expr bool_expr( int depth, bool in_prop )
    {
        const auto bools = vars( true );
        const int choice = depth <= 0 ? pick( 3 ) : pick( 9 );
        switch ( choice )
        {
        case 0:
            if ( !bools.empty() )
                return { gen_expr::op::var, 0, any( bools )->name, {} };
            [[fallthrough]];
        case 1:
            if ( in_prop && _props_done > 0 && coin( 50 ) )
                return { gen_expr::op::prop, 0, "P" + std::to_string( pick( static_cast<int>( _props_done ) ) ), {} };
            return { gen_expr::op::bool_lit, pick( 2 ), {}, {} };
        case 2:
        case 3:
        {
            const gen_expr::op ops[] = { gen_expr::op::eq, gen_expr::op::neq, gen_expr::op::lt };
            return { ops[ pick( 3 ) ], 0, {}, { int_expr( depth - 1 ), int_expr( depth - 1 ) } };
        }
        case 4: return { gen_expr::op::logical_not, 0, {}, { bool_expr( depth - 1, in_prop ) } };
        case 5: return { gen_expr::op::logical_and, 0, {}, { bool_expr( depth - 1, in_prop ), bool_expr( depth - 1, in_prop ) } };
        case 6: return { gen_expr::op::logical_or, 0, {}, { bool_expr( depth - 1, in_prop ), bool_expr( depth - 1, in_prop ) } };
        case 7:
            if ( in_prop )
                return { gen_expr::op::implies, 0, {}, { bool_expr( depth - 1, in_prop ), bool_expr( depth - 1, in_prop ) } };
            [[fallthrough]];
        default:
            if ( !bools.empty() )
                return { gen_expr::op::logical_not, 0, {}, { { gen_expr::op::var, 0, any( bools )->name, {} } } };
            return { gen_expr::op::bool_lit, pick( 2 ), {}, {} };
        }
    }

    gen_spec spec( int depth )
    {
        const int choice = depth <= 0 ? 0 : pick( 6 );
        if ( choice == 0 || choice == 1 )
        {
            if ( _specs_done > 0 && coin( 25 ) )
                return { gen_spec::kind::ref, "S" + std::to_string( pick( static_cast<int>( _specs_done ) ) ), {} };
            return { gen_spec::kind::act, any( _sys.actions ).name, {} };
        }
        if ( choice == 2 )
            return { gen_spec::kind::seq, {}, { spec( depth - 1 ), spec( depth - 1 ) } };
        if ( choice == 3 )
            return { gen_spec::kind::choice, {}, { spec( depth - 1 ), spec( depth - 1 ) } };
        if ( choice == 4 )
        {
            gen_spec s{ gen_spec::kind::par, {}, {} };
            const int n = 2 + pick( 2 );
            for ( int i = 0; i < n; ++i )
                s.kids.push_back( spec( depth - 2 ) );
            return s;
        }
        return { gen_spec::kind::always, {}, { spec( depth - 1 ) } };
    }

    void run()
    {
        const int ints = 1 + pick( 3 );
        const int bools = pick( 3 );
        for ( int i = 0; i < ints; ++i )
        {
            gen_var v{ "v" + std::to_string( i ), false, 2 + pick( 3 ), 0 };
            v.initial = pick( static_cast<int>( v.modulus ) );
            _sys.vars.push_back( v );
        }
        for ( int i = 0; i < bools; ++i )
            _sys.vars.push_back( { "b" + std::to_string( i ), true, 2, pick( 2 ) } );

        const int actions = 2 + pick( 3 );
        for ( int i = 0; i < actions; ++i )
        {
            gen_action a{ "A" + std::to_string( i ), {} };
            const auto forced = pick( static_cast<int>( _sys.vars.size() ) );
            for ( std::size_t k = 0; k < _sys.vars.size(); ++k )
            {
                const auto& v = _sys.vars[ k ];
                if ( static_cast<int>( k ) != forced && !coin( 45 ) )
                    continue;
                if ( v.is_bool )
                    a.assigns.emplace_back( v.name, bool_expr( 2, false ) );
                else if ( coin( 50 ) )
                {
                    // counters make the state space larger than a few points
                    const gen_expr step{ gen_expr::op::add, 0, {}, { { gen_expr::op::var, 0, v.name, {} },
                                                                     { gen_expr::op::int_lit, 1 + pick( 2 ), {}, {} } } };
                    a.assigns.emplace_back( v.name, gen_expr{ gen_expr::op::mod, v.modulus, {}, { step } } );
                }
                else
                    a.assigns.emplace_back( v.name, gen_expr{ gen_expr::op::mod, v.modulus, {}, { int_expr( 2 ) } } );
            }
            _sys.actions.push_back( std::move( a ) );
        }

        const int helpers = pick( 3 );
        for ( int i = 0; i < helpers; ++i )
        {
            _sys.specs.emplace_back( "S" + std::to_string( i ), spec( 2 ) );
            ++_specs_done;
        }
        auto main = spec( 3 );
        for ( int tries = 0; tries < 8 && ( main.k == gen_spec::kind::act || main.k == gen_spec::kind::ref ); ++tries )
            main = spec( 3 );
        if ( coin( 70 ) && main.k != gen_spec::kind::always )
            main = gen_spec{ gen_spec::kind::always, {}, { std::move( main ) } };
        _sys.specs.emplace_back( "Main", std::move( main ) );

        const int props = 1 + pick( 4 );
        for ( int i = 0; i < props; ++i )
        {
            _sys.props.emplace_back( "P" + std::to_string( i ), bool_expr( 3, true ) );
            ++_props_done;
        }
    }
};

std::string render( const gen_expr& e )
{
    using op = gen_expr::op;
    auto bin = [ & ]( const char* sym ) { return "(" + render( e.kids[ 0 ] ) + " " + sym + " " + render( e.kids[ 1 ] ) + ")"; };
    switch ( e.o )
    {
    case op::int_lit: return std::to_string( e.n );
    case op::bool_lit: return e.n ? "true" : "false";
    case op::var:
    case op::prop: return e.name;
    case op::add: return bin( "+" );
    case op::mul: return bin( "*" );
    case op::mod: return "(" + render( e.kids[ 0 ] ) + " mod " + std::to_string( e.n ) + ")";
    case op::eq: return bin( "=" );
    case op::neq: return bin( "/=" );
    case op::lt: return bin( "<" );
    case op::logical_not: return "!(" + render( e.kids[ 0 ] ) + ")";
    case op::logical_and: return bin( "&" );
    case op::logical_or: return bin( "|" );
    case op::implies: return bin( "=>" );
    case op::conditional:
        return "(if " + render( e.kids[ 0 ] ) + " then " + render( e.kids[ 1 ] ) + " else " + render( e.kids[ 2 ] ) + ")";
    }
    return {};
}

std::string render( const gen_spec& s )
{
    using k = gen_spec::kind;
    switch ( s.k )
    {
    case k::act:
    case k::ref: return s.name;
    case k::seq: return "(" + render( s.kids[ 0 ] ) + "." + render( s.kids[ 1 ] ) + ")";
    case k::choice: return "(" + render( s.kids[ 0 ] ) + " | " + render( s.kids[ 1 ] ) + ")";
    case k::par:
    {
        std::string out = "(";
        for ( std::size_t i = 0; i < s.kids.size(); ++i )
            out += ( i ? " || " : "" ) + render( s.kids[ i ] );
        return out + ")";
    }
    case k::always: return "always (" + render( s.kids[ 0 ] ) + ")";
    }
    return {};
}

std::string render( const random_system& sys )
{
    std::ostringstream out;
    out << "system " << sys.name << " {\n\n";
    for ( const auto& v : sys.vars )
    {
        if ( v.is_bool )
            out << "    state bool " << v.name << ": " << ( v.initial ? "true" : "false" ) << ";\n";
        else
            out << "    state int " << v.name << ": " << v.initial << ";\n";
    }
    for ( const auto& a : sys.actions )
    {
        out << "\n    action " << a.name << " {\n";
        for ( const auto& [ var, e ] : a.assigns )
            out << "        @." << var << ": " << render( e ) << ";\n";
        out << "    }\n";
    }
    for ( const auto& [ name, s ] : sys.specs )
        out << "\n    spec " << name << " {\n        " << render( s ) << "\n    }\n";
    for ( const auto& [ name, e ] : sys.props )
        out << "\n    prop " << name << " {\n        " << render( e ) << "\n    }\n";
    out << "\n}\n";
    return out.str();
}

} // namespace

const gen_spec& random_system::spec( const std::string& name ) const
{
    for ( const auto& [ n, s ] : specs )
        if ( n == name )
            return s;
    throw std::out_of_range( "no spec " + name );
}

const gen_action& random_system::action( const std::string& name ) const
{
    for ( const auto& a : actions )
        if ( a.name == name )
            return a;
    throw std::out_of_range( "no action " + name );
}

const gen_expr& random_system::prop( const std::string& name ) const
{
    for ( const auto& [ n, e ] : props )
        if ( n == name )
            return e;
    throw std::out_of_range( "no prop " + name );
}

model_state random_system::initial() const
{
    model_state s;
    for ( const auto& v : vars )
        s[ v.name ] = v.initial;
    return s;
}

std::int64_t random_system::eval( const gen_expr& e, const model_state& s ) const
{
    using op = gen_expr::op;
    auto k = [ & ]( std::size_t i ) { return eval( e.kids[ i ], s ); };
    switch ( e.o )
    {
    case op::int_lit:
    case op::bool_lit: return e.n;
    case op::var: return s.at( e.name );
    case op::prop: return eval( prop( e.name ), s );
    case op::add: return k( 0 ) + k( 1 );
    case op::mul: return k( 0 ) * k( 1 );
    case op::mod: return k( 0 ) % e.n;
    case op::eq: return k( 0 ) == k( 1 );
    case op::neq: return k( 0 ) != k( 1 );
    case op::lt: return k( 0 ) < k( 1 );
    case op::logical_not: return !k( 0 );
    case op::logical_and: return k( 0 ) && k( 1 );
    case op::logical_or: return k( 0 ) || k( 1 );
    case op::implies: return !k( 0 ) || k( 1 );
    case op::conditional: return k( 0 ) ? k( 1 ) : k( 2 );
    }
    return 0;
}

bool random_system::eval_prop( const std::string& name, const model_state& s ) const
{
    return eval( prop( name ), s ) != 0;
}

model_state random_system::apply( const std::string& name, const model_state& s ) const
{
    auto out = s;
    for ( const auto& [ var, e ] : action( name ).assigns )
        out[ var ] = eval( e, s );
    return out;
}

model_state random_system::read( const state_vector& v ) const
{
    model_state s;
    for ( const auto& var : vars )
    {
        const auto* x = v.get( var.name );
        if ( !x )
            throw std::out_of_range( "state has no " + var.name );
        s[ var.name ] = var.is_bool ? std::int64_t{ x->as_bool() } : x->as_int();
    }
    return s;
}

random_system make_random_system( std::uint64_t seed )
{
    random_system sys;
    sys.name = "Random" + std::to_string( seed );
    generator{ seed, sys }.run();
    sys.source = render( sys );
    return sys;
}

bool gen_formula::eval( const std::vector<bool>& props ) const
{
    switch ( k )
    {
    case kind::constant: return value;
    case kind::prop: return props[ prop ];
    case kind::negation: return !kids[ 0 ].eval( props );
    case kind::conjunction: return kids[ 0 ].eval( props ) && kids[ 1 ].eval( props );
    case kind::disjunction: return kids[ 0 ].eval( props ) || kids[ 1 ].eval( props );
    case kind::implication: return !kids[ 0 ].eval( props ) || kids[ 1 ].eval( props );
    }
    return false;
}

std::string gen_formula::text( const std::vector<std::string>& names ) const
{
    switch ( k )
    {
    case kind::constant: return value ? "true" : "false";
    case kind::prop: return names[ prop ];
    case kind::negation: return "!(" + kids[ 0 ].text( names ) + ")";
    case kind::conjunction: return "(" + kids[ 0 ].text( names ) + " & " + kids[ 1 ].text( names ) + ")";
    case kind::disjunction: return "(" + kids[ 0 ].text( names ) + " | " + kids[ 1 ].text( names ) + ")";
    case kind::implication: return "(" + kids[ 0 ].text( names ) + " => " + kids[ 1 ].text( names ) + ")";
    }
    return {};
}

gen_formula make_random_formula( std::mt19937_64& rng, std::size_t prop_count, int depth )
{
    const auto roll = rng() % ( depth <= 0 ? 2 : 6 );
    gen_formula f;
    if ( roll == 0 || prop_count == 0 )
    {
        if ( prop_count == 0 || rng() % 4 == 0 )
        {
            f.k = gen_formula::kind::constant;
            f.value = rng() % 2;
            return f;
        }
    }
    if ( roll <= 1 )
    {
        f.k = gen_formula::kind::prop;
        f.prop = rng() % prop_count;
        return f;
    }
    if ( roll == 2 )
    {
        f.k = gen_formula::kind::negation;
        f.kids.push_back( make_random_formula( rng, prop_count, depth - 1 ) );
        return f;
    }
    const gen_formula::kind kinds[] = { gen_formula::kind::conjunction, gen_formula::kind::disjunction,
                                        gen_formula::kind::implication };
    f.k = kinds[ roll - 3 ];
    f.kids.push_back( make_random_formula( rng, prop_count, depth - 1 ) );
    f.kids.push_back( make_random_formula( rng, prop_count, depth - 1 ) );
    return f;
}

} // namespace seni::testing
