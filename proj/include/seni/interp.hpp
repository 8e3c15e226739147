#pragma once

#include "program.hpp"
#include "value.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace seni
{

// Resolves proposition references while evaluating prop bodies. Implemented
// by the elaborator, which knows the instance tree.
class prop_context
{
public:
    virtual ~prop_context() = default;
    [[nodiscard]] virtual bool prop( std::string_view name ) const = 0;
    [[nodiscard]] virtual bool fold_prop( std::string_view collection, std::string_view prop, binary_op op ) const = 0;
};

struct eval_limits
{
    int max_call_depth = 10'000;
};

// Evaluation environment. Ordinary variables live in `locals` and may be
// rebound; the state is a read-only view, there is no way to write through it.
struct env
{
    std::vector<value> locals;
    std::span<const value> state;
    const prop_context* props = nullptr;
    eval_limits limits;
    int depth = 0;
};

value eval_expr( const texpr& e, env& en );
value eval_func( const func_def& fn, std::span<const value> args, const eval_limits& limits = {}, int depth = 0 );

// n instances of `system`; instance i gets init args {"i"}. Throws eval_fault
// for negative n.
value builtin_replicate( const value& count, const std::string& system );

struct state_write
{
    std::size_t slot;
    std::vector<std::size_t> field_path;
    value v;
};

struct instance_write
{
    std::string name;
    value v;
};

struct body_effects
{
    std::vector<state_write> writes;
    std::vector<instance_write> instances;
};

// Runs an action/init body. Right-hand sides read the unchanged state in
// `en`; state and instance writes are collected, not applied.
body_effects run_body( const body_def& body, env& en );

// Applies collected writes, in order, to the slots of one system.
void apply_writes( std::span<value> slots, const std::vector<state_write>& writes );

// Default value of a type: 0, false, "", [], record defaults, null if nullable.
value default_value( const sem_type& t, const named_table<record_def>& records );

} // namespace seni
