#pragma once

#include <memory>
#include <string>
#include <vector>

namespace seni
{

// Static type of an expression. Nullability is part of the type: `int?`
// (an int declared with a `null` default) is distinct from `int`.
struct sem_type
{
    enum class kind
    {
        error,      // poisoned; suppresses follow-up diagnostics
        null_t,     // type of the `null` literal
        int_t,
        bool_t,
        str_t,
        list,
        record,
        instance,   // an instance of a system (only inside instance collections)
        func,
        state_set   // `@`
    };

    kind k = kind::error;
    bool nullable = false;
    std::string name;                       // record or system name
    std::shared_ptr<const sem_type> elem;   // list element
    std::vector<sem_type> params;           // func parameters
    std::shared_ptr<const sem_type> ret;    // func result

    static sem_type of( kind k )
    {
        sem_type t;
        t.k = k;
        return t;
    }
    static sem_type error() { return {}; }
    static sem_type null() { return of( kind::null_t ); }
    static sem_type integer() { return of( kind::int_t ); }
    static sem_type boolean() { return of( kind::bool_t ); }
    static sem_type string() { return of( kind::str_t ); }
    static sem_type state_set() { return of( kind::state_set ); }
    static sem_type list_of( sem_type elem );
    static sem_type record( std::string name );
    static sem_type instance( std::string system );
    static sem_type function( std::vector<sem_type> params, sem_type result );

    [[nodiscard]] bool is_error() const { return k == kind::error; }
    [[nodiscard]] sem_type with_nullable( bool value ) const;
};

// Equality of the underlying type, ignoring the top-level nullable flag.
bool same_base( const sem_type& a, const sem_type& b );

// Full equality including nullability at every level.
bool operator==( const sem_type& a, const sem_type& b );

// May a value of type `source` be stored where `target` is expected?
bool assignable( const sem_type& target, const sem_type& source );

std::string to_string( const sem_type& t );

} // namespace seni
