#include "seni/value.hpp"

#include <functional>
#include <sstream>

namespace seni
{

const value* record_value::find( std::string_view field ) const
{
    for ( std::size_t i = 0; i < names.size(); ++i )
        if ( names[ i ] == field )
            return &fields[ i ];
    return nullptr;
}

value* record_value::find( std::string_view field )
{
    for ( std::size_t i = 0; i < names.size(); ++i )
        if ( names[ i ] == field )
            return &fields[ i ];
    return nullptr;
}

bool operator==( const value& a, const value& b )
{
    if ( a.v.index() != b.v.index() )
        return false;

    return std::visit(
            [ & ]( const auto& x ) -> bool
            {
                using T = std::decay_t<decltype( x )>;
                const auto& y = std::get<T>( b.v );
                if constexpr ( std::is_same_v<T, record_value> )
                    return x.type == y.type && x.names == y.names && x.fields == y.fields;
                else if constexpr ( std::is_same_v<T, list_value> )
                    return x.items == y.items;
                else if constexpr ( std::is_same_v<T, instance_value> )
                    return x.system == y.system && x.args == y.args;
                else
                    return x == y;
            },
            a.v );
}

std::size_t hash_value( const value& v )
{
    std::size_t seed = v.v.index();
    std::visit(
            [ & ]( const auto& x )
            {
                using T = std::decay_t<decltype( x )>;
                if constexpr ( std::is_same_v<T, null_value> )
                    hash_combine( seed, 0x6e756c6c );
                else if constexpr ( std::is_same_v<T, record_value> )
                {
                    for ( const auto& f : x.fields )
                        hash_combine( seed, hash_value( f ) );
                }
                else if constexpr ( std::is_same_v<T, list_value> )
                {
                    for ( const auto& item : x.items )
                        hash_combine( seed, hash_value( item ) );
                }
                else if constexpr ( std::is_same_v<T, instance_value> )
                    hash_combine( seed, std::hash<std::string>{}( x.system ) );
                else
                    hash_combine( seed, std::hash<T>{}( x ) );
            },
            v.v );
    return seed;
}

namespace
{

void render( std::ostream& out, const value& v )
{
    std::visit(
            [ & ]( const auto& x )
            {
                using T = std::decay_t<decltype( x )>;
                if constexpr ( std::is_same_v<T, null_value> )
                    out << "null";
                else if constexpr ( std::is_same_v<T, std::int64_t> )
                    out << x;
                else if constexpr ( std::is_same_v<T, bool> )
                    out << ( x ? "true" : "false" );
                else if constexpr ( std::is_same_v<T, std::string> )
                    out << '"' << x << '"';
                else if constexpr ( std::is_same_v<T, record_value> )
                {
                    out << '{';
                    for ( std::size_t i = 0; i < x.names.size(); ++i )
                    {
                        out << ( i ? ", " : "" ) << x.names[ i ] << ": ";
                        render( out, x.fields[ i ] );
                    }
                    out << '}';
                }
                else if constexpr ( std::is_same_v<T, list_value> )
                {
                    out << '[';
                    for ( std::size_t i = 0; i < x.items.size(); ++i )
                    {
                        if ( i )
                            out << ", ";
                        render( out, x.items[ i ] );
                    }
                    out << ']';
                }
                else
                    out << x.system << "::instance";
            },
            v.v );
}

void collect_leaves( const std::string& path, const value& v, std::vector<std::pair<std::string, value>>& out )
{
    if ( const auto* rec = std::get_if<record_value>( &v.v ) )
    {
        for ( std::size_t i = 0; i < rec->names.size(); ++i )
            collect_leaves( path + "." + rec->names[ i ], rec->fields[ i ], out );
        return;
    }
    out.emplace_back( path, v );
}

void diff_leaves( const std::string& path, const value& a, const value& b,
                  std::vector<std::pair<std::string, value>>& out )
{
    const auto* ra = std::get_if<record_value>( &a.v );
    const auto* rb = std::get_if<record_value>( &b.v );
    if ( ra && rb && ra->names == rb->names )
    {
        for ( std::size_t i = 0; i < ra->names.size(); ++i )
            diff_leaves( path + "." + ra->names[ i ], ra->fields[ i ], rb->fields[ i ], out );
        return;
    }
    if ( !( a == b ) )
        out.emplace_back( path, b );
}

} // namespace

std::string to_string( const value& v )
{
    std::ostringstream out;
    render( out, v );
    return out.str();
}

std::ostream& operator<<( std::ostream& out, const value& v )
{
    render( out, v );
    return out;
}

std::optional<std::size_t> state_layout::find( std::string_view path ) const
{
    for ( std::size_t i = 0; i < paths.size(); ++i )
        if ( paths[ i ] == path )
            return i;
    return std::nullopt;
}

const value* state_vector::get( std::string_view path ) const
{
    if ( !_layout )
        return nullptr;
    const auto idx = _layout->find( path );
    return idx ? &_slots[ *idx ] : nullptr;
}

std::size_t state_vector::hash() const
{
    std::size_t seed = _slots.size();
    for ( const auto& s : _slots )
        hash_combine( seed, hash_value( s ) );
    return seed;
}

std::vector<std::pair<std::string, value>> diff( const state_vector& before, const state_vector& after )
{
    std::vector<std::pair<std::string, value>> out;
    for ( std::size_t i = 0; i < after.size(); ++i )
        diff_leaves( after.layout().paths[ i ], before[ i ], after[ i ], out );
    return out;
}

std::vector<std::pair<std::string, value>> flatten( const state_vector& s )
{
    std::vector<std::pair<std::string, value>> out;
    for ( std::size_t i = 0; i < s.size(); ++i )
        collect_leaves( s.layout().paths[ i ], s[ i ], out );
    return out;
}

} // namespace seni
