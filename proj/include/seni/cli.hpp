#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seni
{

// Exit codes of the command-line tool.
enum exit_code : int
{
    exit_ok = 0,
    exit_failed = 1,        // property violated, unsatisfiable, not simulated
    exit_invalid = 2,       // diagnostics, bad usage, elaboration faults
    exit_io = 3,
    exit_inconclusive = 4
};

struct run_config
{
    std::string command;
    std::string entry_file;
    std::vector<std::string> positional;    // formula for sat, system names for refine
    std::optional<std::string> entry_system;
    std::vector<std::string> args;
    std::size_t max_states = 1'000'000;
    std::string format = "text";
    std::vector<std::string> search_paths;
    std::uint64_t seed = 0;
    std::size_t steps = 10;
};

// Runs one already-parsed command.
int run_command( const run_config& cfg, std::ostream& out, std::ostream& err );

// Parses argv and runs the command; never throws.
int run_cli( int argc, const char* const* argv, std::ostream& out, std::ostream& err );

} // namespace seni
