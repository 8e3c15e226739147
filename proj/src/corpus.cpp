#include "seni/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef SENI_CORPUS_DIR
#define SENI_CORPUS_DIR "corpus"
#endif

namespace seni
{

std::string corpus_dir()
{
    return SENI_CORPUS_DIR;
}

// Manifest lines:
//   case <name>
//   file <file.seni>
//   run <command> <operands and flags...>
//   exit <code>
//   expect <substring up to end of line>
//   experr <substring of stderr>
//   end
std::vector<corpus_case> corpus_cases( const std::string& dir )
{
    namespace fs = std::filesystem;
    const auto manifest = fs::path{ dir } / "MANIFEST";
    std::ifstream in{ manifest };
    if ( !in )
        throw std::runtime_error( "cannot read " + manifest.string() );

    auto resolve = [ & ]( const std::string& file ) { return ( fs::path{ dir } / file ).string(); };

    std::vector<corpus_case> out;
    corpus_case* current = nullptr;
    std::string line;
    for ( int number = 1; std::getline( in, line ); ++number )
    {
        if ( line.empty() || line.front() == '#' )
            continue;
        const auto space = line.find( ' ' );
        const auto word = line.substr( 0, space );
        const auto rest = space == std::string::npos ? std::string{} : line.substr( space + 1 );
        auto fail = [ & ]( const std::string& why )
        {
            throw std::runtime_error( manifest.string() + ":" + std::to_string( number ) + ": " + why );
        };

        if ( word == "case" )
        {
            out.push_back( { rest, {}, {} } );
            current = &out.back();
            continue;
        }
        if ( !current )
            fail( "'" + word + "' outside a case" );

        if ( word == "file" )
            current->files.push_back( resolve( rest ) );
        else if ( word == "run" )
        {
            corpus_run run;
            std::istringstream tokens{ rest };
            for ( std::string t; tokens >> t; )
                run.argv.push_back( t.ends_with( ".seni" ) ? resolve( t ) : t );
            current->runs.push_back( std::move( run ) );
        }
        else if ( word == "exit" )
        {
            if ( current->runs.empty() )
                fail( "'exit' before 'run'" );
            current->runs.back().exit = std::stoi( rest );
        }
        else if ( word == "expect" )
        {
            if ( current->runs.empty() )
                fail( "'expect' before 'run'" );
            current->runs.back().expect.push_back( rest );
        }
        else if ( word == "experr" )
        {
            if ( current->runs.empty() )
                fail( "'experr' before 'run'" );
            current->runs.back().expect_err.push_back( rest );
        }
        else if ( word == "end" )
            current = nullptr;
        else
            fail( "unknown directive '" + word + "'" );
    }
    return out;
}

} // namespace seni
