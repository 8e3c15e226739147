#pragma once

#include "seni/explorer.hpp"
#include "seni/sema.hpp"

#include <memory>
#include <string>
#include <vector>

namespace seni::testing
{

std::string corpus_path( const std::string& file );
std::string read_file( const std::string& path );

// Checked program of a corpus file; throws std::runtime_error listing the
// diagnostics when there are any.
std::shared_ptr<const program_def> load_corpus( const std::string& file );

// Checked program of in-memory source; modules are importable by name.
std::shared_ptr<const program_def> load_source( const std::string& text,
                                                const std::vector<std::pair<std::string, std::string>>& modules = {} );

struct explored
{
    std::unique_ptr<system_instance> sys;
    lts g;
};

std::unique_ptr<explored> explore( std::shared_ptr<const program_def> program, const std::string& entry,
                                   std::size_t max_states = 1'000'000, const std::string& spec = "Main" );

// Leaf value at a dotted path such as "h.leftHand", looking inside records.
value leaf( const state_vector& s, const std::string& path );

// Every corpus system with a Main spec, as (file, system) pairs.
std::vector<std::pair<std::string, std::string>> corpus_systems();

} // namespace seni::testing
