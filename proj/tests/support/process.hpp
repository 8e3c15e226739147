#pragma once

#include <string>
#include <vector>

namespace seni::testing
{

struct process_result
{
    int code = -1;          // exit status, -1 when killed by a signal
    std::string out;
    std::string err;
};

// Runs `program` with `argv` through the shell, capturing both streams.
process_result run_process( const std::string& program, const std::vector<std::string>& argv );

} // namespace seni::testing
