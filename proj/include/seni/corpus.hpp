#pragma once

#include <string>
#include <vector>

namespace seni
{

// One command of a corpus case with its expected outcome.
struct corpus_run
{
    std::vector<std::string> argv;          // without the program name; .seni operands are absolute
    int exit = 0;
    std::vector<std::string> expect;        // substrings required in stdout
    std::vector<std::string> expect_err;    // substrings required in stderr
};

struct corpus_case
{
    std::string name;
    std::vector<std::string> files;         // absolute paths
    std::vector<corpus_run> runs;
};

// Directory holding the bundled corpus.
std::string corpus_dir();

// Reads `<dir>/MANIFEST`. Throws std::runtime_error on a malformed manifest.
std::vector<corpus_case> corpus_cases( const std::string& dir = corpus_dir() );

} // namespace seni
