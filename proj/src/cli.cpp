#include "seni/cli.hpp"

#include "seni/core.hpp"
#include "seni/explorer.hpp"
#include "seni/refine.hpp"
#include "seni/sema.hpp"
#include "seni/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <ostream>

namespace seni
{

namespace
{

using json = nlohmann::ordered_json;

struct built
{
    std::unique_ptr<system_instance> instance;
    std::unique_ptr<lts> graph;
};

class session
{
    const run_config& _cfg;
    std::ostream& _out;
    std::ostream& _err;
    std::shared_ptr<const program_def> _program;

public:
    session( const run_config& cfg, std::ostream& out, std::ostream& err ) : _cfg{ cfg }, _out{ out }, _err{ err } {}

    int run()
    {
        if ( _cfg.max_states < 1 )
            return usage( "--max-states must be at least 1" );
        if ( _cfg.format != "text" && _cfg.format != "json" && !( _cfg.format == "lts" && _cfg.command == "graph" ) )
            return usage( "unknown format '" + _cfg.format + "'" );

        if ( const auto rc = load() )
            return *rc;

        try
        {
            if ( _cfg.command == "check" )
                return check();
            if ( _cfg.command == "graph" )
                return graph();
            if ( _cfg.command == "verify" )
                return verify();
            if ( _cfg.command == "sat" )
                return sat();
            if ( _cfg.command == "refine" )
                return refine();
            if ( _cfg.command == "trace" )
                return trace();
            return usage( "unknown command '" + _cfg.command + "'" );
        }
        catch ( const elaboration_error& e )
        {
            _err << "error: " << e.what() << '\n';
        }
        catch ( const exploration_fault& e )
        {
            _err << "error: " << e.what() << '\n';
            if ( !e.trace().empty() )
            {
                _err << "  trace:";
                for ( const auto& a : e.trace() )
                    _err << ' ' << a;
                _err << '\n';
            }
        }
        catch ( const eval_fault& e )
        {
            _err << "error: " << e.what() << '\n';
        }
        catch ( const refinement_error& e )
        {
            _err << "error: " << e.what() << '\n';
        }
        return exit_invalid;
    }

private:
    bool json_mode() const { return _cfg.format == "json"; }

    int usage( const std::string& message )
    {
        _err << "error: " << message << '\n';
        return exit_invalid;
    }

    std::optional<int> load()
    {
        auto paths = _cfg.search_paths;
        const auto dir = std::filesystem::path{ _cfg.entry_file }.parent_path().string();
        paths.push_back( dir.empty() ? "." : dir );

        file_loader loader;
        auto a = analyze_file( _cfg.entry_file, paths, loader );
        if ( a.io_error )
        {
            _err << "error: " << a.io_message << '\n';
            return exit_io;
        }
        if ( !a.diagnostics.empty() )
        {
            if ( _cfg.command == "check" && json_mode() )
            {
                json diags = json::array();
                for ( const auto& d : a.diagnostics )
                    diags.push_back( { { "file", d.file },
                                       { "line", d.loc.line },
                                       { "col", d.loc.col },
                                       { "code", d.code },
                                       { "message", d.message } } );
                _out << json{ { "command", "check" }, { "diagnostics", diags } }.dump( 2 ) << '\n';
            }
            for ( const auto& d : a.diagnostics )
                _err << to_string( d ) << '\n';
            return exit_invalid;
        }
        _program = a.program;
        return std::nullopt;
    }

    std::optional<std::string> entry_system()
    {
        if ( _cfg.entry_system )
        {
            if ( !_program->find( *_cfg.entry_system ) )
            {
                _err << "error: unknown system '" << *_cfg.entry_system << "'\n";
                return std::nullopt;
            }
            return *_cfg.entry_system;
        }
        std::vector<std::string> mains;
        for ( const auto& name : _program->entry_systems )
            if ( const auto* s = _program->find( name ); s && s->has_main() )
                mains.push_back( name );
        if ( mains.size() == 1 )
            return mains.front();
        if ( mains.empty() )
            _err << "error: '" << _cfg.entry_file << "' declares no system with a Main spec\n";
        else
            _err << "error: '" << _cfg.entry_file << "' declares several systems with a Main spec; use --system\n";
        return std::nullopt;
    }

    built build( const std::string& system, const std::string& spec = "Main" )
    {
        built b;
        b.instance = std::make_unique<system_instance>( elaborate( _program, system, _cfg.args, spec ) );
        b.graph = std::make_unique<lts>( build_lts( *b.instance, _cfg.max_states ) );
        return b;
    }

    static json stats_json( const lts_stats& s )
    {
        return { { "nodes", s.nodes }, { "edges", s.edges }, { "states", s.states }, { "truncated", s.truncated } };
    }

    static std::string stats_text( const lts_stats& s )
    {
        return "stats: nodes=" + std::to_string( s.nodes ) + " edges=" + std::to_string( s.edges ) +
               " states=" + std::to_string( s.states ) + " truncated=" + ( s.truncated ? "yes" : "no" );
    }

    static json trace_json( const lts& g, const std::vector<std::uint32_t>& trace )
    {
        json steps = json::array();
        for ( const auto e : trace )
        {
            const auto& edge = g.edges()[ e ];
            steps.push_back( { { "action", g.label_of( edge ) },
                               { "diff", render_diff( g.state( edge.src ), g.state( edge.dst ) ) } } );
        }
        return steps;
    }

    int check()
    {
        if ( json_mode() )
            _out << json{ { "command", "check" }, { "diagnostics", json::array() } }.dump( 2 ) << '\n';
        return exit_ok;
    }

    int graph()
    {
        const auto entry = entry_system();
        if ( !entry )
            return exit_invalid;
        const auto b = build( *entry );
        const auto& g = *b.graph;

        if ( _cfg.format == "json" )
        {
            json nodes = json::array();
            for ( std::size_t i = 0; i < g.nodes().size(); ++i )
            {
                json props = json::array();
                for ( std::size_t p = 0; p < g.prop_names().size(); ++p )
                    if ( g.nodes()[ i ].labels[ p ] )
                        props.push_back( g.prop_names()[ p ] );
                nodes.push_back( { { "index", i }, { "props", props } } );
            }
            json edges = json::array();
            for ( const auto& e : g.edges() )
                edges.push_back( { { "src", e.src }, { "action", g.label_of( e ) }, { "dst", e.dst } } );
            _out << json{ { "command", "graph" },
                          { "initial", 0 },
                          { "nodes", nodes },
                          { "edges", edges },
                          { "stats", stats_json( g.stats() ) } }
                            .dump( 2 )
                 << '\n';
            return exit_ok;
        }

        if ( _cfg.format == "lts" )
        {
            _out << export_text( g );
            if ( g.truncated() )
                _out << "truncated " << g.bound() << '\n';
            return exit_ok;
        }

        _out << export_dot( g );
        if ( g.truncated() )
            _out << "// truncated at " << g.bound() << '\n';
        return exit_ok;
    }

    int verify()
    {
        const auto entry = entry_system();
        if ( !entry )
            return exit_invalid;
        const auto& def = *_program->find( *entry );

        std::map<std::string, built> graphs;
        std::vector<std::string> order;
        json verdicts = json::array();
        bool violated = false;
        bool inconclusive = false;

        for ( const auto& p : def.properties )
        {
            auto it = graphs.find( p->spec );
            if ( it == graphs.end() )
            {
                it = graphs.emplace( p->spec, build( *entry, p->spec ) ).first;
                order.push_back( p->spec );
            }
            const auto& g = *it->second.graph;
            const auto f = compile_formula( *p->formula, g.prop_names() );
            const auto v = check_property( f, p->always, g );

            std::string status;
            switch ( v.status )
            {
            case verdict_status::holds: status = "HOLDS"; break;
            case verdict_status::violated: status = "VIOLATED"; violated = true; break;
            case verdict_status::inconclusive: status = "INCONCLUSIVE"; inconclusive = true; break;
            }

            if ( json_mode() )
            {
                json item{ { "name", p->name }, { "status", status }, { "spec", p->spec } };
                item[ "trace" ] = trace_json( g, v.trace );
                if ( v.status == verdict_status::inconclusive )
                    item[ "bound" ] = v.bound;
                verdicts.push_back( item );
                continue;
            }
            _out << p->name << ": " << status;
            if ( v.status == verdict_status::inconclusive )
                _out << " (bound=" << v.bound << ")";
            _out << '\n';
            for ( const auto& line : render_trace( g, v.trace ) )
                _out << line << '\n';
        }

        lts_stats total;
        for ( const auto& spec : order )
        {
            const auto s = graphs.at( spec ).graph->stats();
            total.nodes += s.nodes;
            total.edges += s.edges;
            total.states += s.states;
            total.truncated = total.truncated || s.truncated;
        }

        if ( json_mode() )
            _out << json{ { "command", "verify" }, { "verdicts", verdicts }, { "stats", stats_json( total ) } }.dump( 2 )
                 << '\n';
        else if ( def.properties.empty() )
            _out << "no static properties in '" << def.name << "'\n";
        else
            _out << stats_text( total ) << '\n';

        if ( violated )
            return exit_failed;
        return inconclusive ? exit_inconclusive : exit_ok;
    }

    int sat()
    {
        if ( _cfg.positional.size() != 1 )
            return usage( "sat expects one formula" );
        const auto entry = entry_system();
        if ( !entry )
            return exit_invalid;
        const auto b = build( *entry );
        const auto& g = *b.graph;

        prop_formula f;
        try
        {
            f = parse_formula( _cfg.positional.front(), g.prop_names() );
        }
        catch ( const located_error& e )
        {
            _err << "<formula>:" << e.loc().line << ':' << e.loc().col << ": error: " << e.what() << '\n';
            return exit_invalid;
        }
        catch ( const unresolved_prop& e )
        {
            _err << "<formula>: error: " << e.what() << '\n';
            return exit_invalid;
        }

        const auto node = find_satisfying_state( f, g );
        if ( json_mode() )
        {
            json out{ { "command", "sat" }, { "formula", to_string( f, g.prop_names() ) } };
            out[ "status" ] = node ? "SAT" : ( g.truncated() ? "UNKNOWN" : "UNSAT" );
            if ( node )
            {
                out[ "node" ] = *node;
                json state = json::object();
                for ( const auto& [ path, v ] : flatten( g.state( *node ) ) )
                    state[ path ] = to_string( v );
                out[ "state" ] = state;
                out[ "trace" ] = trace_json( g, g.path_to( *node ) );
            }
            out[ "stats" ] = stats_json( g.stats() );
            _out << out.dump( 2 ) << '\n';
        }
        else if ( node )
        {
            _out << "SAT (node " << *node << ")\n";
            for ( const auto& [ path, v ] : flatten( g.state( *node ) ) )
                _out << "  " << path << " = " << v << '\n';
        }
        else if ( g.truncated() )
            _out << "UNKNOWN (bound=" << g.bound() << ")\n";
        else
            _out << "UNSAT\n";

        if ( node )
            return exit_ok;
        return g.truncated() ? exit_inconclusive : exit_failed;
    }

    int refine()
    {
        if ( _cfg.positional.size() != 2 )
            return usage( "refine expects <abstract> <refined>" );
        const auto& abstract_name = _cfg.positional[ 0 ];
        const auto& refined_name = _cfg.positional[ 1 ];
        const auto* abstract_def = _program->find( abstract_name );
        const auto* refined_def = _program->find( refined_name );
        if ( !abstract_def || !refined_def )
            return usage( "unknown system '" + ( abstract_def ? refined_name : abstract_name ) + "'" );

        const auto map = abstract_name == refined_name ? identity_map( *refined_def )
                                                       : derive_action_map( *abstract_def, *refined_def );
        const auto a = build( abstract_name );
        const auto r = build( refined_name );
        if ( a.graph->truncated() || r.graph->truncated() )
        {
            if ( json_mode() )
                _out << json{ { "command", "refine" }, { "status", "INCONCLUSIVE" }, { "bound", _cfg.max_states } }
                                .dump( 2 )
                     << '\n';
            else
                _out << "INCONCLUSIVE (bound=" << _cfg.max_states << ")\n";
            return exit_inconclusive;
        }

        const auto result = check_simulation( *a.graph, *r.graph, map );
        const auto& rg = *r.graph;
        if ( json_mode() )
        {
            json out{ { "command", "refine" },
                      { "abstract", abstract_name },
                      { "refined", refined_name },
                      { "status", result.simulated ? "SIMULATED" : "NOT SIMULATED" },
                      { "relation_size", result.relation_size },
                      { "iterations", result.iterations } };
            if ( !result.simulated )
            {
                out[ "refined_node" ] = result.refined_node;
                out[ "candidates" ] = result.candidates;
                out[ "offending_action" ] = result.offending_action;
                out[ "trace" ] = trace_json( rg, result.trace );
            }
            _out << out.dump( 2 ) << '\n';
        }
        else if ( result.simulated )
            _out << "SIMULATED (|R|=" << result.relation_size << ")\n";
        else
        {
            _out << "NOT SIMULATED\n";
            _out << "  offending action: " << result.offending_action << " at refined node " << result.refined_node
                 << '\n';
            for ( const auto& line : render_trace( rg, result.trace ) )
                _out << line << '\n';
        }
        return result.simulated ? exit_ok : exit_failed;
    }

    int trace()
    {
        const auto entry = entry_system();
        if ( !entry )
            return exit_invalid;
        const auto sys = elaborate( _program, *entry, _cfg.args );
        const auto walk = random_walk( sys, _cfg.steps, _cfg.seed );

        std::vector<std::pair<std::string, std::string>> lines;
        std::string initial;
        for ( const auto& [ path, v ] : flatten( sys.initial_state() ) )
            initial += ( initial.empty() ? "" : ", " ) + path + "=" + to_string( v );
        const state_vector* prev = &sys.initial_state();
        for ( const auto& s : walk )
        {
            lines.emplace_back( s.action, render_diff( *prev, s.state ) );
            prev = &s.state;
        }

        if ( json_mode() )
        {
            json steps = json::array();
            for ( const auto& [ a, d ] : lines )
                steps.push_back( { { "action", a }, { "diff", d } } );
            _out << json{ { "command", "trace" }, { "seed", _cfg.seed }, { "initial", initial }, { "steps", steps } }
                            .dump( 2 )
                 << '\n';
        }
        else
        {
            _out << "init: " << initial << '\n';
            for ( const auto& [ a, d ] : lines )
                _out << "  " << a << " -> " << d << '\n';
        }
        return exit_ok;
    }
};

} // namespace

int run_command( const run_config& cfg, std::ostream& out, std::ostream& err )
{
    try
    {
        return session{ cfg, out, err }.run();
    }
    catch ( const std::exception& e )
    {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
}

int run_cli( int argc, const char* const* argv, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Checker and explorer for Seni transition systems", "seni" };
    app.require_subcommand( 1 );
    app.fallthrough();

    run_config cfg;
    std::string system;
    std::vector<std::string> args;
    app.add_option( "--system", system, "Entry system (default: the only system with a Main spec)" );
    app.add_option( "--args", args, "Comma-separated init arguments" )->delimiter( ',' );
    app.add_option( "--max-states", cfg.max_states, "Exploration bound" )->check( CLI::PositiveNumber );
    app.add_option( "--format", cfg.format, "text, json, or lts (graph only)" );
    app.add_option( "--path", cfg.search_paths, "Module search directory (repeatable)" );
    app.add_option( "--seed", cfg.seed, "Seed for trace" );
    app.add_option( "--steps", cfg.steps, "Number of steps for trace" );

    struct command
    {
        const char* name;
        const char* help;
        int extra;      // positional arguments after the file
    };
    const command commands[] = {
        { "check", "Parse and type-check", 0 },
        { "graph", "Print the reachable transition system", 0 },
        { "verify", "Check every static property", 0 },
        { "sat", "Find a reachable state satisfying a formula", 1 },
        { "refine", "Check that <abstract> simulates <refined>", 2 },
        { "trace", "Print a seeded random execution", 0 },
    };
    for ( const auto& c : commands )
    {
        auto* sub = app.add_subcommand( c.name, c.help );
        sub->add_option( "file", cfg.entry_file, "Entry .seni file" )->required();
        if ( c.extra > 0 )
            sub->add_option( "operands", cfg.positional, c.extra == 1 ? "Formula" : "Abstract and refined system" )
                    ->expected( c.extra )
                    ->required();
    }

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e, out, err );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e, out, err );
        return exit_invalid;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if ( !system.empty() )
        cfg.entry_system = system;
    cfg.args = args;
    return run_command( cfg, out, err );
}

} // namespace seni
