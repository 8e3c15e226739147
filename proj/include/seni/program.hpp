#pragma once

// Checked program representation produced by sema and consumed by the
// interpreter and elaborator.

#include "ast.hpp"
#include "types.hpp"
#include "value.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace seni
{

struct func_def;
struct texpr;
using texpr_ptr = std::shared_ptr<const texpr>;

enum class texpr_kind
{
    literal,
    local,          // slot
    state_var,      // slot = state variable index within the owning system
    field,          // kids[0], field = position in the record
    index,          // kids[0][kids[1]]
    call,           // func(kids...)
    cast,           // to type
    unary,
    binary,
    conditional,
    record_lit,     // kids in record declaration order
    prop_ref,       // name
    fold_prop,      // fold(bop, name.name2)
    instance_ctor,  // name = system
    replicate       // replicate(kids[0], kids[1])
};

struct texpr
{
    texpr_kind kind = texpr_kind::literal;
    sem_type type;
    source_span span;
    value literal;
    std::size_t slot = 0;
    std::size_t field = 0;
    std::string name;
    std::string name2;
    unary_op uop = unary_op::logical_not;
    binary_op bop = binary_op::add;
    std::vector<texpr_ptr> kids;
    const func_def* func = nullptr;
};

struct tstmt
{
    enum class kind
    {
        state_assign,       // @.var.f.g: value
        local_assign,       // ordinary variable
        instance_assign     // instance collection (init only)
    };

    kind k = kind::local_assign;
    std::size_t slot = 0;                   // state variable index or local slot
    std::vector<std::size_t> field_path;    // record field positions below the variable
    std::string name;                       // for instance_assign
    texpr_ptr value;
    source_span span;
};

struct body_def
{
    std::vector<tstmt> stmts;
    std::size_t locals = 0;
};

struct record_def
{
    std::string name;
    std::vector<std::string> field_names;
    std::vector<sem_type> field_types;
    std::vector<value> defaults;
    source_loc loc;

    [[nodiscard]] std::optional<std::size_t> field_index( std::string_view field ) const;
};

struct state_var_def
{
    std::string name;
    sem_type type;
    value initial;
    source_loc loc;
    std::string origin;     // declaring system
};

struct instance_var_def
{
    std::string name;
    std::string system;     // element system of the collection
    source_loc loc;
    std::string origin;
};

struct action_def
{
    std::string name;
    body_def body;
    source_loc loc;
    std::string origin;
};

struct init_def
{
    std::vector<std::pair<std::string, sem_type>> params;
    body_def body;
    source_loc loc;
    std::string origin;
};

struct spec_def
{
    std::string name;
    spec_ptr body;
    source_loc loc;
    std::string origin;
};

struct prop_def
{
    std::string name;
    texpr_ptr body;
    source_loc loc;
    std::string origin;
};

// `static property Name { Spec => always phi }`; spec defaults to Main.
struct property_def
{
    std::string name;
    std::string spec;
    bool always = true;
    texpr_ptr formula;      // boolean combination of prop_refs and literals
    source_loc loc;
    std::string origin;
};

struct func_def
{
    std::string name;
    std::vector<std::string> param_names;
    std::vector<sem_type> param_types;
    sem_type result_type;
    body_def body;
    texpr_ptr result;
    source_loc loc;
    std::string origin;
};

// Ordered, name-indexed table. Shadowing replaces an entry in place so the
// inherited declaration order is kept.
template <typename T>
class named_table
{
    std::vector<std::shared_ptr<const T>> _items;

public:
    [[nodiscard]] const T* find( std::string_view name ) const
    {
        for ( const auto& item : _items )
            if ( item->name == name )
                return item.get();
        return nullptr;
    }

    [[nodiscard]] std::shared_ptr<const T> find_shared( std::string_view name ) const
    {
        for ( const auto& item : _items )
            if ( item->name == name )
                return item;
        return nullptr;
    }

    // Returns true when an existing entry was replaced.
    bool put( std::shared_ptr<const T> item )
    {
        for ( auto& existing : _items )
            if ( existing->name == item->name )
            {
                existing = std::move( item );
                return true;
            }
        _items.push_back( std::move( item ) );
        return false;
    }

    [[nodiscard]] bool contains( std::string_view name ) const { return find( name ) != nullptr; }
    [[nodiscard]] std::size_t size() const { return _items.size(); }
    [[nodiscard]] bool empty() const { return _items.empty(); }
    [[nodiscard]] auto begin() const { return _items.begin(); }
    [[nodiscard]] auto end() const { return _items.end(); }

    [[nodiscard]] std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        for ( const auto& item : _items )
            out.push_back( item->name );
        return out;
    }
};

struct system_def
{
    std::string name;
    std::optional<std::string> parent;
    std::string file;
    source_loc loc;

    std::vector<state_var_def> state_vars;
    named_table<record_def> records;
    named_table<instance_var_def> instance_vars;
    named_table<action_def> actions;
    std::shared_ptr<const init_def> init;
    named_table<spec_def> specs;
    named_table<prop_def> props;
    named_table<property_def> properties;
    named_table<func_def> funcs;

    // Actions declared by this system itself (not inherited).
    std::vector<std::string> new_actions;
    // Actions inherited from ancestors.
    std::vector<std::string> inherited_actions;

    [[nodiscard]] std::optional<std::size_t> state_index( std::string_view var ) const;
    [[nodiscard]] bool has_main() const { return specs.contains( "Main" ); }

    // Actions not shadowed by a spec of the same name: the system's
    // observable alphabet.
    [[nodiscard]] std::vector<std::string> live_actions() const;
};

// Structural comparison of two checked systems (names, types, and
// declaration identity), optionally ignoring the system name.
bool same_structure( const system_def& a, const system_def& b, bool ignore_name );

struct program_def
{
    // Linked systems in dependency order (refined parents first).
    std::vector<std::shared_ptr<const system_def>> systems;
    // Systems declared in the entry file, in source order.
    std::vector<std::string> entry_systems;

    [[nodiscard]] const system_def* find( std::string_view name ) const;
    [[nodiscard]] std::shared_ptr<const system_def> find_shared( std::string_view name ) const;
};

} // namespace seni
