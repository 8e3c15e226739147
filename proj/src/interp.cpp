#include "seni/interp.hpp"

#include <charconv>

namespace seni
{

namespace
{

template <typename Op>
std::int64_t checked( Op op )
{
    std::int64_t r = 0;
    if ( op( r ) )
        throw eval_fault( "integer overflow" );
    return r;
}

value arith( binary_op op, std::int64_t a, std::int64_t b )
{
    switch ( op )
    {
    case binary_op::add: return checked( [ & ]( std::int64_t& r ) { return __builtin_add_overflow( a, b, &r ); } );
    case binary_op::sub: return checked( [ & ]( std::int64_t& r ) { return __builtin_sub_overflow( a, b, &r ); } );
    case binary_op::mul: return checked( [ & ]( std::int64_t& r ) { return __builtin_mul_overflow( a, b, &r ); } );
    case binary_op::div:
    case binary_op::mod:
        if ( b == 0 )
            throw eval_fault( "division by zero" );
        if ( a == INT64_MIN && b == -1 )
            throw eval_fault( "integer overflow" );
        return op == binary_op::div ? a / b : a % b;
    case binary_op::lt: return a < b;
    case binary_op::le: return a <= b;
    case binary_op::gt: return a > b;
    case binary_op::ge: return a >= b;
    default: break;
    }
    throw eval_fault( "bad arithmetic operator" );
}

value cast_to( const sem_type& to, const value& v )
{
    switch ( to.k )
    {
    case sem_type::kind::int_t:
        if ( const auto* s = std::get_if<std::string>( &v.v ) )
        {
            std::int64_t out = 0;
            const auto* first = s->data();
            const auto* last = s->data() + s->size();
            const auto [ ptr, ec ] = std::from_chars( first, last, out );
            if ( ec != std::errc{} || ptr != last || s->empty() )
                throw eval_fault( "cannot convert \"" + *s + "\" to int" );
            return out;
        }
        return v;
    case sem_type::kind::str_t:
        if ( const auto* i = std::get_if<std::int64_t>( &v.v ) )
            return std::to_string( *i );
        if ( const auto* b = std::get_if<bool>( &v.v ) )
            return std::string{ *b ? "true" : "false" };
        return v;
    case sem_type::kind::bool_t:
        if ( const auto* s = std::get_if<std::string>( &v.v ) )
        {
            if ( *s == "true" )
                return true;
            if ( *s == "false" )
                return false;
            throw eval_fault( "cannot convert \"" + *s + "\" to bool" );
        }
        return v;
    default:
        return v;
    }
}

void write_path( value& target, std::span<const std::size_t> path, value v )
{
    if ( path.empty() )
    {
        target = std::move( v );
        return;
    }
    auto& rec = target.as_record();
    write_path( rec.fields[ path.front() ], path.subspan( 1 ), std::move( v ) );
}

} // namespace

value eval_expr( const texpr& e, env& en )
{
    switch ( e.kind )
    {
    case texpr_kind::literal:
        return e.literal;
    case texpr_kind::local:
        return en.locals[ e.slot ];
    case texpr_kind::state_var:
        return en.state[ e.slot ];
    case texpr_kind::field:
    {
        auto base = eval_expr( *e.kids[ 0 ], en );
        if ( base.is_null() )
            throw eval_fault( "field access on null" );
        return std::move( base.as_record().fields[ e.field ] );
    }
    case texpr_kind::index:
    {
        auto base = eval_expr( *e.kids[ 0 ], en );
        const auto i = eval_expr( *e.kids[ 1 ], en ).as_int();
        const auto& items = base.as_list().items;
        if ( i < 0 || static_cast<std::size_t>( i ) >= items.size() )
            throw eval_fault( "index " + std::to_string( i ) + " out of range for list of length " +
                              std::to_string( items.size() ) );
        return items[ static_cast<std::size_t>( i ) ];
    }
    case texpr_kind::call:
    {
        std::vector<value> args;
        args.reserve( e.kids.size() );
        for ( const auto& k : e.kids )
            args.push_back( eval_expr( *k, en ) );
        return eval_func( *e.func, args, en.limits, en.depth + 1 );
    }
    case texpr_kind::cast:
        return cast_to( e.type, eval_expr( *e.kids[ 0 ], en ) );
    case texpr_kind::unary:
    {
        const auto v = eval_expr( *e.kids[ 0 ], en );
        if ( e.uop == unary_op::logical_not )
            return !v.as_bool();
        const auto x = v.as_int();
        return checked( [ & ]( std::int64_t& r ) { return __builtin_sub_overflow( std::int64_t{ 0 }, x, &r ); } );
    }
    case texpr_kind::binary:
    {
        switch ( e.bop )
        {
        case binary_op::logical_and:
            return eval_expr( *e.kids[ 0 ], en ).as_bool() && eval_expr( *e.kids[ 1 ], en ).as_bool();
        case binary_op::logical_or:
            return eval_expr( *e.kids[ 0 ], en ).as_bool() || eval_expr( *e.kids[ 1 ], en ).as_bool();
        case binary_op::implies:
            return !eval_expr( *e.kids[ 0 ], en ).as_bool() || eval_expr( *e.kids[ 1 ], en ).as_bool();
        case binary_op::eq:
            return eval_expr( *e.kids[ 0 ], en ) == eval_expr( *e.kids[ 1 ], en );
        case binary_op::neq:
            return !( eval_expr( *e.kids[ 0 ], en ) == eval_expr( *e.kids[ 1 ], en ) );
        default:
        {
            const auto a = eval_expr( *e.kids[ 0 ], en ).as_int();
            const auto b = eval_expr( *e.kids[ 1 ], en ).as_int();
            return arith( e.bop, a, b );
        }
        }
    }
    case texpr_kind::conditional:
        return eval_expr( *e.kids[ 0 ], en ).as_bool() ? eval_expr( *e.kids[ 1 ], en ) : eval_expr( *e.kids[ 2 ], en );
    case texpr_kind::record_lit:
    {
        auto rec = e.literal.as_record();
        for ( std::size_t i = 0; i < e.kids.size(); ++i )
            if ( e.kids[ i ] )
                rec.fields[ i ] = eval_expr( *e.kids[ i ], en );
        return rec;
    }
    case texpr_kind::prop_ref:
        if ( !en.props )
            throw eval_fault( "prop '" + e.name + "' evaluated outside an instance" );
        return en.props->prop( e.name );
    case texpr_kind::fold_prop:
        if ( !en.props )
            throw eval_fault( "fold evaluated outside an instance" );
        return en.props->fold_prop( e.name, e.name2, e.bop );
    case texpr_kind::instance_ctor:
        return instance_value{ e.name, {} };
    case texpr_kind::replicate:
        return builtin_replicate( eval_expr( *e.kids[ 0 ], en ), e.name );
    }
    throw eval_fault( "unknown expression" );
}

value eval_func( const func_def& fn, std::span<const value> args, const eval_limits& limits, int depth )
{
    if ( depth > limits.max_call_depth )
        throw eval_fault( "call depth limit of " + std::to_string( limits.max_call_depth ) + " exceeded in '" +
                          fn.name + "'" );

    env en;
    en.limits = limits;
    en.depth = depth;
    en.locals.resize( std::max( fn.body.locals, args.size() ) );
    for ( std::size_t i = 0; i < args.size(); ++i )
        en.locals[ i ] = args[ i ];

    for ( const auto& s : fn.body.stmts )
        en.locals[ s.slot ] = eval_expr( *s.value, en );
    return eval_expr( *fn.result, en );
}

value builtin_replicate( const value& count, const std::string& system )
{
    const auto n = count.as_int();
    if ( n < 0 )
        throw eval_fault( "replicate: negative count " + std::to_string( n ) );

    list_value out;
    for ( std::int64_t i = 0; i < n; ++i )
        out.items.emplace_back( instance_value{ system, { std::to_string( i ) } } );
    return out;
}

body_effects run_body( const body_def& body, env& en )
{
    body_effects fx;
    if ( en.locals.size() < body.locals )
        en.locals.resize( body.locals );

    for ( const auto& s : body.stmts )
    {
        auto v = eval_expr( *s.value, en );
        switch ( s.k )
        {
        case tstmt::kind::local_assign:
            en.locals[ s.slot ] = std::move( v );
            break;
        case tstmt::kind::state_assign:
            fx.writes.push_back( { s.slot, s.field_path, std::move( v ) } );
            break;
        case tstmt::kind::instance_assign:
            fx.instances.push_back( { s.name, std::move( v ) } );
            break;
        }
    }
    return fx;
}

void apply_writes( std::span<value> slots, const std::vector<state_write>& writes )
{
    for ( const auto& w : writes )
        write_path( slots[ w.slot ], w.field_path, w.v );
}

value default_value( const sem_type& t, const named_table<record_def>& records )
{
    if ( t.nullable )
        return null_value{};
    switch ( t.k )
    {
    case sem_type::kind::int_t: return std::int64_t{ 0 };
    case sem_type::kind::bool_t: return false;
    case sem_type::kind::str_t: return std::string{};
    case sem_type::kind::list: return list_value{};
    case sem_type::kind::record:
        if ( const auto* rec = records.find( t.name ) )
            return record_value{ rec->name, rec->field_names, rec->defaults };
        return null_value{};
    default: return null_value{};
    }
}

} // namespace seni
