#include "fixtures.hpp"

#include "seni/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seni::testing
{

namespace
{

std::shared_ptr<const program_def> expect_clean( analysis a, const std::string& what )
{
    if ( a.io_error )
        throw std::runtime_error( a.io_message );
    if ( !a.diagnostics.empty() )
    {
        std::string msg = what + " has diagnostics:";
        for ( const auto& d : a.diagnostics )
            msg += "\n  " + to_string( d );
        throw std::runtime_error( msg );
    }
    return a.program;
}

} // namespace

std::string corpus_path( const std::string& file )
{
    return ( std::filesystem::path{ corpus_dir() } / file ).string();
}

std::string read_file( const std::string& path )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        throw std::runtime_error( "cannot read " + path );
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::shared_ptr<const program_def> load_corpus( const std::string& file )
{
    return expect_clean( analyze_file( corpus_path( file ), { corpus_dir() }, file_loader{} ), file );
}

std::shared_ptr<const program_def> load_source( const std::string& text,
                                                const std::vector<std::pair<std::string, std::string>>& modules )
{
    memory_loader loader;
    for ( const auto& [ name, body ] : modules )
        loader.add( name, body );
    return expect_clean( analyze_source( text, "test.seni", loader ), "source" );
}

std::unique_ptr<explored> explore( std::shared_ptr<const program_def> program, const std::string& entry,
                                   std::size_t max_states, const std::string& spec )
{
    auto out = std::make_unique<explored>();
    out->sys = std::make_unique<system_instance>( elaborate( std::move( program ), entry, {}, spec ) );
    out->g = build_lts( *out->sys, max_states );
    return out;
}

value leaf( const state_vector& s, const std::string& path )
{
    for ( auto& [ p, v ] : flatten( s ) )
        if ( p == path )
            return v;
    throw std::runtime_error( "no state leaf " + path );
}

std::vector<std::pair<std::string, std::string>> corpus_systems()
{
    return {
        { "PhilosopherAbstract.seni", "PhilosopherAbstract" },
        { "Philosopher.seni", "Philosopher" },
        { "Fork.seni", "Fork" },
        { "Table.seni", "Table" },
        { "BrokenPhilosopher.seni", "BrokenPhilosopher" },
        { "PhilosopherSafety.seni", "PhilosopherSafety" },
        { "TaskChain.seni", "TaskSpec" },
        { "TaskChain.seni", "TaskPlan" },
        { "TaskChain.seni", "TaskImpl" },
    };
}

} // namespace seni::testing
