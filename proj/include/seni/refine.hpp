#pragma once

#include "explorer.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace seni
{

class refinement_error : public std::runtime_error
{
    std::string _code;

public:
    refinement_error( std::string code, const std::string& message )
            : std::runtime_error( message ), _code{ std::move( code ) } {}

    // "AmbiguousMapping", "UnmappedAction", "TruncatedInput"
    [[nodiscard]] const std::string& code() const { return _code; }
};

// Refined action name -> abstract action name.
struct action_map
{
    std::map<std::string, std::string> targets;
    std::vector<std::string> unmapped;      // refined live actions with no abstract counterpart

    [[nodiscard]] const std::string* find( const std::string& refined ) const
    {
        const auto it = targets.find( refined );
        return it == targets.end() ? nullptr : &it->second;
    }
};

// Actions reachable in a refined spec named after a live abstract action map
// to that action (innermost such spec wins); the remaining live actions of
// the refined system map to themselves when the abstract system has them.
// Throws refinement_error("AmbiguousMapping").
action_map derive_action_map( const system_def& abstract, const system_def& refined );

action_map identity_map( const system_def& sys );

// Composition: refined -> middle by `first`, middle -> abstract by `second`.
action_map compose( const action_map& first, const action_map& second );

struct simulation_options
{
    // Also require the abstract system's state variables to agree at
    // refined nodes that are only entered by observable steps.
    bool strict = true;
};

struct simulation_result
{
    bool simulated = false;
    std::size_t relation_size = 0;
    std::size_t iterations = 0;

    // Explanation when not simulated.
    std::size_t refined_node = 0;
    std::vector<std::size_t> candidates;        // abstract nodes still matching before the failing step
    std::string offending_action;               // abstract label of the unmatched observable step
    std::vector<std::uint32_t> trace;           // refined edges up to and including the failing step
};

// Greatest weak simulation of `refined` by `abstract`. Steps inside a
// decomposing spec are internal except the one completing it, which is
// observed as the mapped abstract action. Throws refinement_error for
// truncated inputs and for reachable unmapped actions.
simulation_result check_simulation( const lts& abstract, const lts& refined, const action_map& map,
                                    simulation_options options = {} );

} // namespace seni
