#pragma once

// Comparisons of library results against the reference model and the
// oracle enumerator. Each returns an empty string on agreement and a
// description of the first disagreement otherwise.

#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_system.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace seni::testing
{

struct random_case
{
    random_system model;
    std::unique_ptr<explored> x;
};

random_case load_random( std::uint64_t seed, std::size_t max_states = 20'000 );

std::string model_key( const model_state& s );

oracle_graph<model_state> oracle_of( const random_system& model, std::size_t limit = 20'000 );

// Every node's labels equal direct evaluation of the props on its state.
std::string labeling_mismatch( const random_system& model, const lts& g );

// Same node order, states and edges as the oracle graph.
std::string graph_mismatch( const random_system& model, const lts& g, const oracle_graph<model_state>& o );

// Expected outcome of `always f`: nullopt when it holds, otherwise the
// least depth of a violating node.
struct expectation
{
    std::optional<std::size_t> violation_depth;
};

// From the oracle graph and model evaluation only.
expectation expect_always( const gen_formula& f, const random_system& model, const oracle_graph<model_state>& o );

// From the node labels of `g` with a breadth-first search of its own.
expectation expect_always( const gen_formula& f, const lts& g );

// check_property( always f ) against an expectation; also replays the
// counterexample along the graph edges.
std::string verdict_mismatch( const gen_formula& f, const lts& g, const expectation& e );

} // namespace seni::testing
