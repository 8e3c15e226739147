#pragma once

#include "core.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace seni
{

struct configuration
{
    proc_id control = process_arena::done();
    state_vector state;

    friend bool operator==( const configuration&, const configuration& ) = default;
};

struct enabled_step
{
    std::size_t action;         // index into system_instance::actions()
    std::uint32_t occ;          // process occurrence that fired
    configuration next;
};

// Successors in component order, then branch order.
std::vector<enabled_step> enabled_steps( const system_instance& sys, const configuration& c );

inline constexpr std::uint32_t no_edge = std::numeric_limits<std::uint32_t>::max();

struct lts_node
{
    configuration config;
    std::vector<bool> labels;       // indexed like lts::prop_names()
    bool complete = true;           // every successor was recorded
    std::uint32_t depth = 0;        // BFS depth
    std::uint32_t parent_edge = no_edge;
};

struct lts_edge
{
    std::uint32_t src;
    std::uint32_t occ;
    std::uint32_t dst;
};

struct lts_stats
{
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t states = 0;     // distinct state vectors
    bool truncated = false;
};

// Raised when an action faults during exploration; carries the action
// labels leading to the faulting step (the last one is the fault).
class exploration_fault : public eval_fault
{
    std::vector<std::string> _trace;

public:
    exploration_fault( const std::string& message, std::vector<std::string> trace )
            : eval_fault( message ), _trace{ std::move( trace ) } {}

    [[nodiscard]] const std::vector<std::string>& trace() const { return _trace; }
};

// Reachable labelled transition system in BFS order. Refers to the system
// instance it was built from, which must outlive it.
class lts
{
    const system_instance* _sys = nullptr;
    std::vector<lts_node> _nodes;
    std::vector<lts_edge> _edges;
    std::vector<std::size_t> _first_edge;   // edges of node i: [_first_edge[i], _first_edge[i + 1])
    std::size_t _bound = 0;
    std::size_t _states = 0;
    bool _truncated = false;

    friend lts build_lts( const system_instance& sys, std::size_t max_states );

public:
    [[nodiscard]] const system_instance& instance() const { return *_sys; }
    [[nodiscard]] const std::vector<lts_node>& nodes() const { return _nodes; }
    [[nodiscard]] const std::vector<lts_edge>& edges() const { return _edges; }
    [[nodiscard]] std::span<const lts_edge> out_edges( std::size_t node ) const;
    [[nodiscard]] std::size_t initial() const { return 0; }
    [[nodiscard]] bool truncated() const { return _truncated; }
    [[nodiscard]] std::size_t bound() const { return _bound; }
    [[nodiscard]] lts_stats stats() const { return { _nodes.size(), _edges.size(), _states, _truncated }; }

    [[nodiscard]] const std::vector<std::string>& prop_names() const { return _sys->prop_names(); }
    [[nodiscard]] const state_vector& state( std::size_t node ) const { return _nodes[ node ].config.state; }
    [[nodiscard]] std::size_t action_of( const lts_edge& e ) const;
    [[nodiscard]] const std::string& label_of( const lts_edge& e ) const;
    [[nodiscard]] const occurrence& occurrence_of( const lts_edge& e ) const;

    // Edge indices of the BFS-tree path from the initial node to `node`.
    [[nodiscard]] std::vector<std::uint32_t> path_to( std::size_t node ) const;
};

// BFS with deduplication on configurations. At most `max_states` nodes are
// kept; configurations beyond the bound are dropped and the result is
// marked truncated. Throws exploration_fault.
lts build_lts( const system_instance& sys, std::size_t max_states );

// digraph with the initial node drawn as a double circle, nodes labelled
// "index\nprop,prop", edges labelled by qualified action names.
std::string export_dot( const lts& g );

// Line format: `node <idx> <prop,...>`, `edge <src> <action> <dst>`, `init 0`.
std::string export_text( const lts& g );

struct walk_step
{
    std::string action;
    state_vector state;
};

// Seeded random execution of at most `steps` actions from the initial
// configuration; stops early at a configuration without successors.
std::vector<walk_step> random_walk( const system_instance& sys, std::size_t steps, std::uint64_t seed );

} // namespace seni
