#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace seni
{

struct value;

struct null_value
{
    friend bool operator==( const null_value&, const null_value& ) = default;
};

struct record_value
{
    std::string type;
    std::vector<std::string> names;
    std::vector<value> fields;

    [[nodiscard]] const value* find( std::string_view field ) const;
    value* find( std::string_view field );
};

struct list_value
{
    std::vector<value> items;
};

// A pending sub-system instance produced by replicate(); consumed by elaboration.
struct instance_value
{
    std::string system;
    std::vector<std::string> args;
};

struct value
{
    using storage = std::variant<null_value, std::int64_t, bool, std::string, record_value, list_value, instance_value>;
    storage v;

    value() = default;
    value( null_value n ) : v{ n } {}
    value( std::int64_t i ) : v{ i } {}
    value( int i ) : v{ std::int64_t{ i } } {}
    value( bool b ) : v{ b } {}
    value( std::string s ) : v{ std::move( s ) } {}
    value( const char* s ) : v{ std::string{ s } } {}
    value( record_value r ) : v{ std::move( r ) } {}
    value( list_value l ) : v{ std::move( l ) } {}
    value( instance_value i ) : v{ std::move( i ) } {}

    [[nodiscard]] bool is_null() const { return std::holds_alternative<null_value>( v ); }
    [[nodiscard]] std::int64_t as_int() const { return std::get<std::int64_t>( v ); }
    [[nodiscard]] bool as_bool() const { return std::get<bool>( v ); }
    [[nodiscard]] const std::string& as_string() const { return std::get<std::string>( v ); }
    [[nodiscard]] const record_value& as_record() const { return std::get<record_value>( v ); }
    record_value& as_record() { return std::get<record_value>( v ); }
    [[nodiscard]] const list_value& as_list() const { return std::get<list_value>( v ); }
};

// Structural equality.
bool operator==( const value& a, const value& b );
std::size_t hash_value( const value& v );

// `null`, `3`, `true`, `"L"`, `{leftHand: 0, rightHand: null}`, `[1, 2]`.
std::string to_string( const value& v );
std::ostream& operator<<( std::ostream& out, const value& v );

// Names of the slots of a state vector, shared by every vector of one
// elaborated system.
struct state_layout
{
    std::vector<std::string> paths;

    [[nodiscard]] std::optional<std::size_t> find( std::string_view path ) const;
};

// Evaluation of every state variable of an elaborated system. Two vectors
// over the same layout are equal iff all slots are equal.
class state_vector
{
    std::shared_ptr<const state_layout> _layout;
    std::vector<value> _slots;

public:
    state_vector() = default;
    state_vector( std::shared_ptr<const state_layout> layout, std::vector<value> slots )
            : _layout{ std::move( layout ) }, _slots{ std::move( slots ) } {}

    [[nodiscard]] const state_layout& layout() const { return *_layout; }
    [[nodiscard]] const std::shared_ptr<const state_layout>& layout_ptr() const { return _layout; }
    [[nodiscard]] std::size_t size() const { return _slots.size(); }
    [[nodiscard]] const value& operator[]( std::size_t i ) const { return _slots[ i ]; }
    value& operator[]( std::size_t i ) { return _slots[ i ]; }
    [[nodiscard]] const std::vector<value>& slots() const { return _slots; }

    // Value at a fully-qualified path such as "philosophers[1].h"; nullptr if absent.
    [[nodiscard]] const value* get( std::string_view path ) const;

    friend bool operator==( const state_vector& a, const state_vector& b ) { return a._slots == b._slots; }
    [[nodiscard]] std::size_t hash() const;
};

struct state_vector_hash
{
    std::size_t operator()( const state_vector& s ) const { return s.hash(); }
};

// Leaf-level differences between two vectors over the same layout, as
// ("path", new value) pairs in layout order. Record fields are reported
// individually ("h.leftHand").
std::vector<std::pair<std::string, value>> diff( const state_vector& before, const state_vector& after );

// Leaf-level listing of a whole vector, same shape as diff().
std::vector<std::pair<std::string, value>> flatten( const state_vector& s );

inline void hash_combine( std::size_t& seed, std::size_t h )
{
    seed ^= h + 0x9e3779b97f4a7c15ULL + ( seed << 6 ) + ( seed >> 2 );
}

} // namespace seni
