#pragma once

// Elaboration of checked systems into an executable instance: one flat state
// vector for the whole instance tree, qualified actions, and a hash-consed
// process term for the chosen spec.

#include "interp.hpp"
#include "program.hpp"
#include "value.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seni
{

using proc_id = std::uint32_t;

enum class proc_kind
{
    done,
    act,
    seq,
    choice,
    always,
    par,
    self        // back-reference to the always term of a spec naming itself
};

// Membership of an action occurrence in a decomposing spec, i.e. a spec that
// takes over the name of an inherited action. `completes` marks occurrences
// that can be the last step of that spec.
struct scope_tag
{
    std::string spec;
    bool completes = false;

    friend bool operator==( const scope_tag&, const scope_tag& ) = default;
};

// One syntactic occurrence of an action inside the elaborated process.
struct occurrence
{
    std::size_t action = 0;
    std::vector<scope_tag> scopes;     // outermost first
};

struct proc_node
{
    proc_kind kind = proc_kind::done;
    std::uint32_t occ = 0;             // act
    std::vector<proc_id> kids;
};

struct proc_step
{
    std::uint32_t occ;
    proc_id next;
};

// Interning store for process terms. Terms are kept in normal form:
// Seq(Done, q) = q, Par of all-Done = Done, nested Par flattened.
class process_arena
{
    struct key_hash
    {
        std::size_t operator()( const proc_node& n ) const;
    };
    struct key_eq
    {
        bool operator()( const proc_node& a, const proc_node& b ) const
        {
            return a.kind == b.kind && a.occ == b.occ && a.kids == b.kids;
        }
    };

    std::vector<proc_node> _nodes;
    std::unordered_map<proc_node, proc_id, key_hash, key_eq> _index;
    std::vector<occurrence> _occurrences;
    std::vector<std::unique_ptr<std::vector<proc_step>>> _steps;
    std::vector<proc_id> _self_targets;
    std::vector<std::unique_ptr<std::vector<proc_step>>> _resolved;

    const std::vector<proc_step>& raw_steps( proc_id id );

    proc_id intern( proc_node n );

public:
    process_arena();

    static constexpr proc_id done() { return 0; }

    std::uint32_t add_occurrence( occurrence o );
    proc_id act( std::uint32_t occ );
    proc_id seq( proc_id p, proc_id q );
    proc_id choice( proc_id p, proc_id q );
    proc_id always( proc_id p );
    proc_id par( std::vector<proc_id> parts );

    // A fresh leaf that behaves like `target` once bound.
    proc_id self_ref();
    void bind( proc_id self, proc_id target );

    [[nodiscard]] const proc_node& node( proc_id id ) const { return _nodes[ id ]; }
    [[nodiscard]] std::size_t size() const { return _nodes.size(); }
    [[nodiscard]] const occurrence& occ( std::uint32_t i ) const { return _occurrences[ i ]; }
    [[nodiscard]] std::size_t occurrence_count() const { return _occurrences.size(); }

    // Small-step successors of a term. Interns new continuation terms, so
    // the arena grows during exploration; results are memoized per term.
    const std::vector<proc_step>& steps( proc_id id );

    // "Seq(Act(PickFork), Act(ReturnFork))"-style rendering, with action
    // labels taken from `labels`.
    [[nodiscard]] std::string render( proc_id id, const std::vector<std::string>& labels ) const;
};

// One node of the instance tree.
struct instance_node
{
    std::string path;                       // "" for the entry, "philosophers[1]" below it
    std::shared_ptr<const system_def> def;
    std::size_t base = 0;                   // first slot in the state vector
    std::vector<std::string> args;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> collections;
    std::size_t parent = 0;

    [[nodiscard]] const std::vector<std::size_t>* collection( std::string_view name ) const;
    [[nodiscard]] std::string qualify( std::string_view name ) const
    {
        return path.empty() ? std::string{ name } : path + "." + std::string{ name };
    }
};

struct action_instance
{
    std::string label;          // qualified name, e.g. "philosophers[1].PickLeft"
    std::string name;           // declared name
    std::size_t instance = 0;   // owning instance node
    std::shared_ptr<const action_def> def;
};

class system_instance
{
    std::shared_ptr<const program_def> _program;
    std::vector<instance_node> _nodes;
    std::shared_ptr<const state_layout> _layout;
    state_vector _initial;
    std::vector<action_instance> _actions;
    std::vector<std::string> _action_labels;
    std::shared_ptr<process_arena> _arena;
    proc_id _main = process_arena::done();
    std::string _spec;
    std::vector<std::string> _prop_names;
    std::vector<std::pair<std::size_t, std::string>> _prop_sources;   // (instance node, prop name)

    friend class elaborator;

public:
    [[nodiscard]] const system_def& entry() const { return *_nodes.front().def; }
    [[nodiscard]] const std::string& spec() const { return _spec; }
    [[nodiscard]] const std::vector<instance_node>& nodes() const { return _nodes; }
    [[nodiscard]] const state_layout& layout() const { return *_layout; }
    [[nodiscard]] const state_vector& initial_state() const { return _initial; }
    [[nodiscard]] const std::vector<action_instance>& actions() const { return _actions; }
    [[nodiscard]] const std::vector<std::string>& action_labels() const { return _action_labels; }
    [[nodiscard]] std::optional<std::size_t> find_action( std::string_view label ) const;

    [[nodiscard]] proc_id main_process() const { return _main; }
    [[nodiscard]] process_arena& processes() const { return *_arena; }
    [[nodiscard]] std::string render_process( proc_id id ) const { return _arena->render( id, _action_labels ); }

    // Propositions in labeling order: the entry's own props unqualified,
    // then those of sub-instances qualified by instance path.
    [[nodiscard]] const std::vector<std::string>& prop_names() const { return _prop_names; }
    [[nodiscard]] std::optional<std::size_t> find_prop( std::string_view name ) const;
    [[nodiscard]] bool eval_prop( std::size_t prop, const state_vector& s ) const;
    [[nodiscard]] std::vector<bool> labels( const state_vector& s ) const;

    // Post-state of firing action `act` from `pre`. Throws eval_fault naming
    // the action on evaluation faults.
    [[nodiscard]] state_vector apply_action( const state_vector& pre, std::size_t act ) const;
};

// Elaborates `entry` with init arguments `args`, using spec `spec` as the
// main process. When `args` is empty and init expects [string], ["0"] is
// passed. Throws elaboration_error.
system_instance elaborate( std::shared_ptr<const program_def> program, std::string_view entry,
                           std::vector<std::string> args = {}, std::string_view spec = "Main" );

} // namespace seni
