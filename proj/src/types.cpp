#include "seni/types.hpp"

namespace seni
{

sem_type sem_type::list_of( sem_type elem )
{
    auto t = of( kind::list );
    t.elem = std::make_shared<const sem_type>( std::move( elem ) );
    return t;
}

sem_type sem_type::record( std::string name )
{
    auto t = of( kind::record );
    t.name = std::move( name );
    return t;
}

sem_type sem_type::instance( std::string system )
{
    auto t = of( kind::instance );
    t.name = std::move( system );
    return t;
}

sem_type sem_type::function( std::vector<sem_type> params, sem_type result )
{
    auto t = of( kind::func );
    t.params = std::move( params );
    t.ret = std::make_shared<const sem_type>( std::move( result ) );
    return t;
}

sem_type sem_type::with_nullable( bool value ) const
{
    auto copy = *this;
    copy.nullable = value;
    return copy;
}

bool same_base( const sem_type& a, const sem_type& b )
{
    if ( a.k != b.k )
        return false;
    switch ( a.k )
    {
    case sem_type::kind::list:
        return *a.elem == *b.elem;
    case sem_type::kind::record:
    case sem_type::kind::instance:
        return a.name == b.name;
    case sem_type::kind::func:
        return a.params == b.params && *a.ret == *b.ret;
    default:
        return true;
    }
}

bool operator==( const sem_type& a, const sem_type& b )
{
    return a.nullable == b.nullable && same_base( a, b );
}

bool assignable( const sem_type& target, const sem_type& source )
{
    if ( target.is_error() || source.is_error() )
        return true;
    if ( source.k == sem_type::kind::null_t )
        return target.nullable;
    if ( !same_base( target, source ) )
        return false;
    return target.nullable || !source.nullable;
}

std::string to_string( const sem_type& t )
{
    std::string base;
    switch ( t.k )
    {
    case sem_type::kind::error: return "<error>";
    case sem_type::kind::null_t: return "null";
    case sem_type::kind::int_t: base = "int"; break;
    case sem_type::kind::bool_t: base = "bool"; break;
    case sem_type::kind::str_t: base = "string"; break;
    case sem_type::kind::list: base = "[" + to_string( *t.elem ) + "]"; break;
    case sem_type::kind::record: base = t.name; break;
    case sem_type::kind::instance: base = t.name; break;
    case sem_type::kind::state_set: base = "@"; break;
    case sem_type::kind::func:
        for ( const auto& p : t.params )
            base += to_string( p ) + " -> ";
        base += to_string( *t.ret );
        break;
    }
    return t.nullable ? base + "?" : base;
}

} // namespace seni
