#pragma once

#include "source.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace seni
{

struct type_expr;
struct expr;
struct spec_expr;

using type_ptr = std::shared_ptr<const type_expr>;
using expr_ptr = std::shared_ptr<const expr>;
using spec_ptr = std::shared_ptr<const spec_expr>;

struct type_expr
{
    enum class kind
    {
        primitive,  // int, bool, string
        named,      // record or system name
        list        // [T]
    };

    kind k = kind::primitive;
    std::string name;
    type_ptr elem;
    source_loc loc;
};

enum class expr_kind
{
    int_lit,
    bool_lit,
    string_lit,
    null_lit,
    name,
    state_root,     // @
    field,          // kids[0].name
    index,          // kids[0][kids[1]]
    call,           // name(kids...)
    cast,           // (cast_type) kids[0]
    unary,
    binary,
    conditional,    // if kids[0] then kids[1] else kids[2]
    record_lit,     // { field_names[i]: kids[i] }
    fold,           // fold(op, kids[0])
    always,         // always kids[0], only meaningful in properties
    instance_ctor,  // binder :: name
    elided          // ...
};

enum class unary_op
{
    logical_not,
    negate
};

enum class binary_op
{
    add,
    sub,
    mul,
    div,
    mod,
    eq,
    neq,
    lt,
    le,
    gt,
    ge,
    logical_and,
    logical_or,
    implies
};

std::string_view spelling( binary_op op );

struct expr
{
    expr_kind kind = expr_kind::null_lit;
    source_span span;
    std::int64_t int_value = 0;
    bool bool_value = false;
    std::string name;     // identifier, string literal value, field name, callee, system name
    std::string binder;   // instance_ctor binder
    unary_op uop = unary_op::logical_not;
    binary_op bop = binary_op::add;
    std::vector<expr_ptr> kids;
    std::vector<std::string> field_names;
    type_ptr cast_type;
};

// Structural equality; spans are ignored.
bool same_expr( const expr& a, const expr& b );

// Canonical fully-parenthesized rendering, e.g. "(Main => always !(AllWaiting))".
std::string to_string( const expr& e );

enum class spec_kind
{
    ref,
    seq,
    choice,
    par,
    always,
    fold
};

struct spec_expr
{
    spec_kind kind = spec_kind::ref;
    source_span span;
    std::string name;                   // ref target or fold collection
    spec_kind fold_op = spec_kind::par; // seq, choice or par
    std::vector<spec_ptr> kids;
};

bool same_spec( const spec_expr& a, const spec_expr& b );
std::string to_string( const spec_expr& s );

// One statement of an action, init or function body.
//   @.a.b: value   -> state_assign, path = {a, b}
//   name: value    -> local_assign, path = {name}
struct stmt
{
    enum class kind
    {
        state_assign,
        local_assign
    };

    kind k = kind::local_assign;
    std::vector<std::string> path;
    expr_ptr value;
    source_span span;
};

struct field_decl
{
    type_ptr type;
    std::string name;
    expr_ptr init;
    source_loc loc;
};

struct record_decl
{
    std::string name;
    std::vector<field_decl> fields;
    source_loc loc;
};

struct state_decl
{
    type_ptr type;
    std::string name;
    expr_ptr init;
    source_loc loc;
};

struct instance_decl
{
    type_ptr type;
    std::string name;
    source_loc loc;
};

struct action_decl
{
    std::string name;
    std::vector<stmt> body;
    source_loc loc;
};

struct param_decl
{
    type_ptr type;
    std::string name;
    source_loc loc;
};

struct init_decl
{
    std::vector<param_decl> params;
    std::vector<stmt> body;
    source_loc loc;
};

struct spec_decl
{
    std::string name;
    spec_ptr body;
    source_loc loc;
};

struct prop_decl
{
    std::string name;
    expr_ptr body;
    source_loc loc;
};

struct property_decl
{
    std::string name;
    expr_ptr body;
    bool is_static = true;
    source_loc loc;
};

struct func_decl
{
    std::string name;
    std::vector<std::string> param_names;   // empty when the declaration names none
    std::vector<type_ptr> signature;        // parameter types followed by the result type
    std::vector<stmt> body;
    expr_ptr result;                        // null when the body has no trailing expression
    source_loc loc;
};

struct system_ast
{
    std::string name;
    source_loc loc;
    std::optional<std::string> refines;
    source_loc refines_loc;
    std::vector<record_decl> records;
    std::vector<state_decl> state_vars;
    std::vector<instance_decl> instance_vars;
    std::vector<action_decl> actions;
    std::optional<init_decl> init;
    std::vector<spec_decl> specs;
    std::vector<prop_decl> props;
    std::vector<property_decl> properties;
    std::vector<func_decl> funcs;
    std::string file;

    [[nodiscard]] bool has_main() const;
};

struct import_decl
{
    std::string name;
    source_loc loc;
};

struct program_ast
{
    std::string file;
    std::vector<import_decl> imports;
    std::vector<system_ast> systems;
};

} // namespace seni
