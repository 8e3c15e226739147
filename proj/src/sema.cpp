#include "seni/sema.hpp"

#include "seni/interp.hpp"
#include "seni/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace seni
{

// ---- loaders ---------------------------------------------------------------

std::optional<source_loader::loaded> file_loader::load( const std::string& module,
                                                        std::span<const std::string> search_paths ) const
{
    namespace fs = std::filesystem;
    for ( const auto& dir : search_paths )
    {
        const auto path = dir.empty() ? fs::path{ module + ".seni" } : fs::path{ dir } / ( module + ".seni" );
        std::error_code ec;
        if ( !fs::is_regular_file( path, ec ) )
            continue;
        std::ifstream in{ path, std::ios::binary };
        if ( !in )
            continue;
        std::ostringstream text;
        text << in.rdbuf();
        return loaded{ path.string(), text.str() };
    }
    return std::nullopt;
}

std::optional<source_loader::loaded> memory_loader::load( const std::string& module,
                                                          std::span<const std::string> ) const
{
    const auto it = _modules.find( module );
    if ( it == _modules.end() )
        return std::nullopt;
    return loaded{ module + ".seni", it->second };
}

std::string module_name( const std::string& path )
{
    return std::filesystem::path{ path }.stem().string();
}

std::vector<const system_ast*> linked_program::systems() const
{
    std::vector<const system_ast*> out;
    for ( const auto& f : files )
        for ( const auto& s : f.systems )
            out.push_back( &s );
    return out;
}

namespace
{

diagnostic make_diag( const std::string& file, source_loc loc, std::string code, std::string message )
{
    diagnostic d;
    d.file = file;
    d.loc = loc;
    d.code = std::move( code );
    d.message = std::move( message );
    return d;
}

std::optional<program_ast> parse_into( const std::string& text, const std::string& file,
                                       std::vector<diagnostic>& diags )
{
    try
    {
        return parse_source( text, file );
    }
    catch ( const lex_error& e )
    {
        diags.push_back( make_diag( file, e.loc(), "LexError", e.what() ) );
    }
    catch ( const parse_error& e )
    {
        diags.push_back( make_diag( file, e.loc(), "ParseError", e.what() ) );
    }
    return std::nullopt;
}

} // namespace

// ---- import resolution -----------------------------------------------------

link_result resolve_imports( program_ast entry, std::span<const std::string> search_paths,
                             const source_loader& loader )
{
    link_result out;
    auto& files = out.program.files;
    auto& modules = out.program.modules;

    modules.push_back( module_name( entry.file ) );
    files.push_back( std::move( entry ) );

    std::set<std::string> visited{ modules.front() };
    std::vector<std::string> stack{ modules.front() };

    std::function<void( std::size_t )> visit = [ & ]( std::size_t index )
    {
        const auto imports = files[ index ].imports;
        const auto file = files[ index ].file;
        for ( const auto& imp : imports )
        {
            const auto on_stack = std::find( stack.begin(), stack.end(), imp.name );
            if ( on_stack != stack.end() )
            {
                std::string cycle;
                for ( auto it = on_stack; it != stack.end(); ++it )
                    cycle += *it + " -> ";
                cycle += imp.name;
                out.diagnostics.push_back( make_diag( file, imp.loc, "CyclicImport", "cyclic import: " + cycle ) );
                continue;
            }
            if ( visited.count( imp.name ) )
                continue;
            visited.insert( imp.name );

            const auto src = loader.load( imp.name, search_paths );
            if ( !src )
            {
                out.diagnostics.push_back( make_diag( file, imp.loc, "MissingImport",
                                                      "cannot find module '" + imp.name + "' (" + imp.name +
                                                              ".seni)" ) );
                continue;
            }

            auto parsed = parse_into( src->text, src->path, out.diagnostics );
            if ( !parsed )
                continue;

            files.push_back( std::move( *parsed ) );
            modules.push_back( imp.name );
            stack.push_back( imp.name );
            visit( files.size() - 1 );
            stack.pop_back();
        }
    };
    visit( 0 );

    return out;
}

// ---- checking --------------------------------------------------------------

namespace
{

enum class scope_kind
{
    constant,
    func,
    action,
    init,
    prop,
    property
};

struct local_var
{
    std::string name;
    std::size_t slot;
    sem_type type;
};

struct scope
{
    scope_kind kind = scope_kind::constant;
    const system_def* sys = nullptr;
    std::string owner;      // name of the declaration being checked
    std::vector<local_var> locals;
    std::size_t next_slot = 0;

    [[nodiscard]] const local_var* find( std::string_view name ) const
    {
        for ( auto it = locals.rbegin(); it != locals.rend(); ++it )
            if ( it->name == name )
                return &*it;
        return nullptr;
    }

    [[nodiscard]] bool reads_state() const
    {
        return kind == scope_kind::action || kind == scope_kind::init || kind == scope_kind::prop;
    }
};

texpr_ptr error_node( source_span span )
{
    auto t = std::make_shared<texpr>();
    t->span = span;
    t->type = sem_type::error();
    return t;
}

std::shared_ptr<texpr> make_node( texpr_kind kind, sem_type type, source_span span )
{
    auto t = std::make_shared<texpr>();
    t->kind = kind;
    t->type = std::move( type );
    t->span = span;
    return t;
}

bool is_int( const sem_type& t ) { return t.k == sem_type::kind::int_t && !t.nullable; }
bool is_bool( const sem_type& t ) { return t.k == sem_type::kind::bool_t && !t.nullable; }

class analyzer
{
    struct own_decls
    {
        const system_ast* ast = nullptr;
        std::vector<std::pair<std::shared_ptr<func_def>, const func_decl*>> funcs;
        std::vector<std::pair<std::shared_ptr<action_def>, const action_decl*>> actions;
        std::shared_ptr<init_def> init;
        std::vector<std::pair<std::shared_ptr<prop_def>, const prop_decl*>> props;
        std::vector<std::pair<std::shared_ptr<property_def>, const property_decl*>> properties;
    };

    std::vector<diagnostic>& _diags;
    std::map<std::string, const system_ast*> _asts;
    std::map<std::string, std::shared_ptr<system_def>> _defs;
    std::map<std::string, std::shared_ptr<const system_def>> _external;
    std::map<std::string, own_decls> _own;
    std::string _file;

public:
    explicit analyzer( std::vector<diagnostic>& diags ) : _diags{ diags } {}

    void add_external( std::shared_ptr<const system_def> def ) { _external[ def->name ] = std::move( def ); }

    // Skeletons first (declarations, types, signatures), then bodies, both in
    // refinement order; returns the successfully built systems in that order.
    std::vector<std::shared_ptr<system_def>> run( const std::vector<const system_ast*>& systems )
    {
        for ( const auto* s : systems )
        {
            if ( _asts.count( s->name ) || _external.count( s->name ) )
            {
                _diags.push_back( make_diag( s->file, s->loc, "DuplicateDeclaration",
                                             "duplicate system '" + s->name + "'" ) );
                continue;
            }
            _asts[ s->name ] = s;
        }

        const auto order = refinement_order( systems );
        std::vector<std::shared_ptr<system_def>> built;
        for ( const auto* s : order )
            if ( auto def = skeleton( *s ) )
            {
                _defs[ s->name ] = def;
                built.push_back( def );
            }

        for ( const auto& def : built )
            bodies( *def );

        return built;
    }

private:
    void error( source_loc loc, std::string code, std::string message )
    {
        _diags.push_back( make_diag( _file, loc, std::move( code ), std::move( message ) ) );
    }

    [[nodiscard]] const system_def* lookup_def( std::string_view name ) const
    {
        if ( const auto it = _defs.find( std::string{ name } ); it != _defs.end() )
            return it->second.get();
        if ( const auto it = _external.find( std::string{ name } ); it != _external.end() )
            return it->second.get();
        return nullptr;
    }

    [[nodiscard]] bool system_exists( const std::string& name ) const
    {
        return _asts.count( name ) || _external.count( name );
    }

    std::vector<const system_ast*> refinement_order( const std::vector<const system_ast*>& systems )
    {
        std::vector<const system_ast*> order;
        std::map<std::string, int> mark;   // 1 = in progress, 2 = done, 3 = failed

        std::function<bool( const system_ast* )> visit = [ & ]( const system_ast* s ) -> bool
        {
            auto& m = mark[ s->name ];
            if ( m == 2 )
                return true;
            if ( m == 3 )
                return false;
            if ( m == 1 )
            {
                _diags.push_back( make_diag( s->file, s->refines_loc, "CyclicRefinement",
                                             "cyclic refinement involving '" + s->name + "'" ) );
                m = 3;
                return false;
            }
            m = 1;
            if ( s->refines && !_external.count( *s->refines ) )
            {
                const auto it = _asts.find( *s->refines );
                if ( it == _asts.end() )
                {
                    _diags.push_back( make_diag( s->file, s->refines_loc, "UnresolvedName",
                                                 "unknown system '" + *s->refines + "' in refines clause" ) );
                    mark[ s->name ] = 3;
                    return false;
                }
                if ( !visit( it->second ) )
                {
                    mark[ s->name ] = 3;
                    return false;
                }
            }
            mark[ s->name ] = 2;
            order.push_back( s );
            return true;
        };

        for ( const auto* s : systems )
            if ( _asts.count( s->name ) && _asts.at( s->name ) == s )
                visit( s );
        return order;
    }

    // ---- types and constants ----

    sem_type resolve_type( const type_expr& t, const system_def& sys )
    {
        switch ( t.k )
        {
        case type_expr::kind::primitive:
            if ( t.name == "int" )
                return sem_type::integer();
            if ( t.name == "bool" )
                return sem_type::boolean();
            return sem_type::string();
        case type_expr::kind::list:
        {
            auto elem = resolve_type( *t.elem, sys );
            if ( elem.is_error() )
                return elem;
            return sem_type::list_of( std::move( elem ) );
        }
        case type_expr::kind::named:
            if ( sys.records.contains( t.name ) )
                return sem_type::record( t.name );
            if ( system_exists( t.name ) )
                return sem_type::instance( t.name );
            error( t.loc, "UnresolvedName", "unknown type '" + t.name + "'" );
            return sem_type::error();
        }
        return sem_type::error();
    }

    // Checks and evaluates a constant initializer against `target`.
    value constant( const expr& e, const sem_type& target, const system_def& sys )
    {
        scope sc;
        sc.kind = scope_kind::constant;
        sc.sys = &sys;
        const auto before = _diags.size();
        auto t = check( e, sc, &target );
        if ( _diags.size() != before || t->type.is_error() )
            return default_value( target, sys.records );
        if ( !assignable( target, t->type ) )
        {
            mismatch( e.span.loc, target, t->type );
            return default_value( target, sys.records );
        }
        try
        {
            env en;
            return eval_expr( *t, en );
        }
        catch ( const eval_fault& f )
        {
            error( e.span.loc, "EvalFault", f.what() );
            return default_value( target, sys.records );
        }
    }

    void mismatch( source_loc loc, const sem_type& expected, const sem_type& found )
    {
        error( loc, "TypeError", "type mismatch: expected " + to_string( expected ) + ", found " + to_string( found ) );
    }

    // ---- phase 1: declarations ----

    std::shared_ptr<system_def> skeleton( const system_ast& ast )
    {
        _file = ast.file;
        auto def = std::make_shared<system_def>();
        const system_def* parent = nullptr;
        if ( ast.refines )
        {
            parent = lookup_def( *ast.refines );
            if ( !parent )
                return nullptr;
            *def = *parent;
            def->parent = *ast.refines;
            def->inherited_actions = parent->actions.names();
            def->new_actions.clear();
        }
        def->name = ast.name;
        def->file = ast.file;
        def->loc = ast.loc;

        auto& own = _own[ ast.name ];
        own.ast = &ast;

        // Own value-level names must be unique across categories.
        std::set<std::string> value_names;
        std::set<std::string> control_names;
        auto claim = [ & ]( std::set<std::string>& names, const std::string& name, source_loc loc ) -> bool
        {
            if ( names.insert( name ).second )
                return true;
            error( loc, "DuplicateDeclaration", "duplicate declaration of '" + name + "'" );
            return false;
        };

        std::set<std::string> record_names;
        for ( const auto& rec : ast.records )
        {
            if ( !claim( record_names, rec.name, rec.loc ) )
                continue;
            auto rd = std::make_shared<record_def>();
            rd->name = rec.name;
            rd->loc = rec.loc;
            std::set<std::string> fields;
            for ( const auto& f : rec.fields )
            {
                if ( !claim( fields, f.name, f.loc ) )
                    continue;
                auto type = resolve_type( *f.type, *def );
                if ( type.k == sem_type::kind::instance )
                {
                    error( f.type->loc, "TypeError", "record fields cannot hold system instances" );
                    type = sem_type::error();
                }
                if ( f.init && f.init->kind == expr_kind::null_lit )
                    type.nullable = true;
                rd->field_names.push_back( f.name );
                rd->field_types.push_back( type );
                rd->defaults.push_back( f.init ? constant( *f.init, type, *def ) : default_value( type, def->records ) );
            }
            if ( const auto* old = def->records.find( rec.name ) )
            {
                if ( old->field_names != rd->field_names || old->field_types != rd->field_types )
                {
                    error( rec.loc, "IncompatibleRedeclaration",
                           "record '" + rec.name + "' redeclared with different fields" );
                    continue;
                }
            }
            def->records.put( rd );
        }

        for ( const auto& sv : ast.state_vars )
        {
            if ( !claim( value_names, sv.name, sv.loc ) )
                continue;
            auto type = resolve_type( *sv.type, *def );
            if ( type.k == sem_type::kind::instance ||
                 ( type.k == sem_type::kind::list && type.elem->k == sem_type::kind::instance ) )
            {
                error( sv.type->loc, "TypeError", "state variables cannot hold system instances" );
                type = sem_type::error();
            }
            if ( sv.init && sv.init->kind == expr_kind::null_lit )
                type.nullable = true;

            state_var_def var;
            var.name = sv.name;
            var.type = type;
            var.loc = sv.loc;
            var.origin = ast.name;
            var.initial = sv.init ? constant( *sv.init, type, *def ) : default_value( type, def->records );

            if ( const auto idx = def->state_index( sv.name ) )
            {
                auto& old = def->state_vars[ *idx ];
                if ( !( old.type == type ) && !type.is_error() )
                {
                    error( sv.loc, "IncompatibleRedeclaration",
                           "state variable '" + sv.name + "' redeclared as " + to_string( type ) + ", inherited as " +
                                   to_string( old.type ) );
                    continue;
                }
                old = std::move( var );
            }
            else
                def->state_vars.push_back( std::move( var ) );
        }

        for ( const auto& iv : ast.instance_vars )
        {
            if ( !claim( value_names, iv.name, iv.loc ) )
                continue;
            const auto& t = *iv.type;
            if ( t.k != type_expr::kind::list || t.elem->k != type_expr::kind::named )
            {
                if ( t.k == type_expr::kind::named && !system_exists( t.name ) && !def->records.contains( t.name ) )
                    error( t.loc, "UnresolvedName", "unknown type '" + t.name + "'" );
                else if ( t.k == type_expr::kind::named && system_exists( t.name ) )
                    error( t.loc, "TypeError", "instance collections must be declared as [" + t.name + "]" );
                else
                    error( iv.loc, "TypeError", "declaration of '" + iv.name + "' needs 'state'" );
                continue;
            }
            if ( !system_exists( t.elem->name ) )
            {
                if ( def->records.contains( t.elem->name ) )
                    error( iv.loc, "TypeError", "declaration of '" + iv.name + "' needs 'state'" );
                else
                    error( t.elem->loc, "UnresolvedName", "unknown system '" + t.elem->name + "'" );
                continue;
            }
            auto ivd = std::make_shared<instance_var_def>();
            ivd->name = iv.name;
            ivd->system = t.elem->name;
            ivd->loc = iv.loc;
            ivd->origin = ast.name;
            def->instance_vars.put( ivd );
        }

        for ( const auto& a : ast.actions )
        {
            if ( !claim( control_names, a.name, a.loc ) )
                continue;
            auto ad = std::make_shared<action_def>();
            ad->name = a.name;
            ad->loc = a.loc;
            ad->origin = ast.name;
            if ( !def->actions.put( ad ) )
                def->new_actions.push_back( a.name );
            else
                std::erase( def->inherited_actions, a.name );
            own.actions.emplace_back( ad, &a );
        }

        if ( ast.init )
        {
            auto in = std::make_shared<init_def>();
            in->loc = ast.init->loc;
            in->origin = ast.name;
            for ( const auto& p : ast.init->params )
                in->params.emplace_back( p.name, resolve_type( *p.type, *def ) );
            const bool ok_params =
                    in->params.empty() ||
                    ( in->params.size() == 1 && ( in->params[ 0 ].second.is_error() ||
                                                  in->params[ 0 ].second == sem_type::list_of( sem_type::string() ) ) );
            if ( !ok_params )
                error( ast.init->loc, "TypeError", "init takes either no parameters or a single [string]" );
            def->init = in;
            own.init = in;
        }

        for ( const auto& s : ast.specs )
        {
            if ( !claim( control_names, s.name, s.loc ) )
                continue;
            auto sd = std::make_shared<spec_def>();
            sd->name = s.name;
            sd->body = s.body;
            sd->loc = s.loc;
            sd->origin = ast.name;
            def->specs.put( sd );
        }

        for ( const auto& p : ast.props )
        {
            if ( !claim( value_names, p.name, p.loc ) )
                continue;
            auto pd = std::make_shared<prop_def>();
            pd->name = p.name;
            pd->loc = p.loc;
            pd->origin = ast.name;
            def->props.put( pd );
            own.props.emplace_back( pd, &p );
        }

        std::set<std::string> property_names;
        for ( const auto& p : ast.properties )
        {
            if ( !claim( property_names, p.name, p.loc ) )
                continue;
            auto pd = std::make_shared<property_def>();
            pd->name = p.name;
            pd->loc = p.loc;
            pd->origin = ast.name;
            def->properties.put( pd );
            own.properties.emplace_back( pd, &p );
        }

        for ( const auto& f : ast.funcs )
        {
            if ( !claim( value_names, f.name, f.loc ) )
                continue;
            auto fd = std::make_shared<func_def>();
            fd->name = f.name;
            fd->loc = f.loc;
            fd->origin = ast.name;
            for ( std::size_t i = 0; i + 1 < f.signature.size(); ++i )
                fd->param_types.push_back( resolve_type( *f.signature[ i ], *def ) );
            fd->result_type = resolve_type( *f.signature.back(), *def );

            const auto arity = fd->param_types.size();
            if ( !f.param_names.empty() )
            {
                if ( f.param_names.size() != arity )
                    error( f.loc, "TypeError",
                           "function '" + f.name + "' names " + std::to_string( f.param_names.size() ) +
                                   " parameters but its signature has " + std::to_string( arity ) );
                fd->param_names = f.param_names;
                fd->param_names.resize( arity );
            }
            else if ( arity <= 3 )
            {
                static const char* implicit[] = { "x", "y", "z" };
                fd->param_names.assign( implicit, implicit + arity );
            }
            else
            {
                error( f.loc, "TypeError", "function '" + f.name + "' has more than three parameters; name them" );
                fd->param_names.resize( arity );
            }
            def->funcs.put( fd );
            own.funcs.emplace_back( fd, &f );
        }

        // Cross-category clashes with inherited names.
        for ( const auto& p : ast.props )
            if ( def->state_index( p.name ) || def->funcs.contains( p.name ) || def->instance_vars.contains( p.name ) )
                if ( value_names.count( p.name ) && std::none_of( ast.state_vars.begin(), ast.state_vars.end(),
                                                                   [ & ]( auto& s ) { return s.name == p.name; } ) &&
                     std::none_of( ast.funcs.begin(), ast.funcs.end(), [ & ]( auto& s ) { return s.name == p.name; } ) &&
                     std::none_of( ast.instance_vars.begin(), ast.instance_vars.end(),
                                   [ & ]( auto& s ) { return s.name == p.name; } ) )
                    error( p.loc, "DuplicateDeclaration", "prop '" + p.name + "' clashes with an inherited name" );

        return def;
    }

    // ---- phase 2: bodies ----

    void bodies( system_def& def )
    {
        auto& own = _own[ def.name ];
        _file = own.ast->file;

        for ( auto& [ fd, decl ] : own.funcs )
            check_func( def, *fd, *decl );

        for ( auto& [ ad, decl ] : own.actions )
        {
            scope sc;
            sc.kind = scope_kind::action;
            sc.sys = &def;
            sc.owner = ad->name;
            ad->body = check_body( decl->body, sc );
        }

        if ( own.init )
        {
            scope sc;
            sc.kind = scope_kind::init;
            sc.sys = &def;
            sc.owner = "init";
            for ( const auto& [ name, type ] : own.init->params )
                sc.locals.push_back( { name, sc.next_slot++, type } );
            own.init->body = check_body( own.ast->init->body, sc );
        }

        for ( auto& [ pd, decl ] : own.props )
        {
            scope sc;
            sc.kind = scope_kind::prop;
            sc.sys = &def;
            sc.owner = pd->name;
            const auto expected = sem_type::boolean();
            auto body = check( *decl->body, sc, &expected );
            if ( !assignable( expected, body->type ) )
                mismatch( decl->body->span.loc, expected, body->type );
            pd->body = std::move( body );
        }

        for ( const auto& s : own.ast->specs )
            check_spec( *s.body, def );

        for ( auto& [ pd, decl ] : own.properties )
            check_property( def, *pd, *decl );

        check_prop_cycles( def, own );
    }

    void check_func( const system_def& def, func_def& fd, const func_decl& decl )
    {
        scope sc;
        sc.kind = scope_kind::func;
        sc.sys = &def;
        sc.owner = fd.name;
        for ( std::size_t i = 0; i < fd.param_types.size(); ++i )
            sc.locals.push_back( { fd.param_names[ i ], sc.next_slot++, fd.param_types[ i ] } );

        const auto before = _diags.size();
        fd.body = check_body( decl.body, sc );
        const bool mutated = std::any_of( _diags.begin() + static_cast<std::ptrdiff_t>( before ), _diags.end(),
                                          []( const diagnostic& d ) { return d.code == "NonPureMutation"; } );

        if ( !decl.result )
        {
            if ( !mutated )
                error( decl.loc, "TypeError", "function '" + fd.name + "' has no result expression" );
            fd.result = error_node( {} );
            return;
        }
        auto result = check( *decl.result, sc, &fd.result_type );
        if ( !assignable( fd.result_type, result->type ) )
            mismatch( decl.result->span.loc, fd.result_type, result->type );
        fd.result = std::move( result );
        fd.body.locals = sc.next_slot;
    }

    body_def check_body( const std::vector<stmt>& stmts, scope& sc )
    {
        body_def body;
        for ( const auto& s : stmts )
        {
            if ( auto t = check_stmt( s, sc ) )
                body.stmts.push_back( std::move( *t ) );
        }
        body.locals = sc.next_slot;
        return body;
    }

    std::optional<tstmt> check_stmt( const stmt& s, scope& sc )
    {
        const auto& sys = *sc.sys;
        tstmt out;
        out.span = s.span;

        if ( s.k == stmt::kind::state_assign )
        {
            std::string shown = "@";
            for ( const auto& p : s.path )
                shown += "." + p;

            if ( sc.kind == scope_kind::func )
            {
                error( s.span.loc, "NonPureMutation",
                       "pure function '" + sc.owner + "' cannot modify state variable '" + shown + "'" );
                return std::nullopt;
            }

            const auto idx = sys.state_index( s.path.front() );
            if ( !idx )
            {
                error( s.span.loc, "UnresolvedName", "unknown state variable '" + s.path.front() + "'" );
                return std::nullopt;
            }
            out.k = tstmt::kind::state_assign;
            out.slot = *idx;
            sem_type target = sys.state_vars[ *idx ].type;
            for ( std::size_t i = 1; i < s.path.size(); ++i )
            {
                if ( target.is_error() )
                    return std::nullopt;
                const auto* rec = target.k == sem_type::kind::record ? sys.records.find( target.name ) : nullptr;
                if ( !rec )
                {
                    error( s.span.loc, "TypeError", "'" + s.path[ i - 1 ] + "' is not a record" );
                    return std::nullopt;
                }
                if ( target.nullable )
                {
                    error( s.span.loc, "TypeError", "cannot assign a field of nullable '" + s.path[ i - 1 ] + "'" );
                    return std::nullopt;
                }
                const auto f = rec->field_index( s.path[ i ] );
                if ( !f )
                {
                    error( s.span.loc, "UnresolvedName", "record '" + rec->name + "' has no field '" + s.path[ i ] + "'" );
                    return std::nullopt;
                }
                out.field_path.push_back( *f );
                target = rec->field_types[ *f ];
            }

            out.value = check( *s.value, sc, &target );
            if ( !assignable( target, out.value->type ) )
            {
                mismatch( s.value->span.loc, target, out.value->type );
                return std::nullopt;
            }
            return out;
        }

        const auto& name = s.path.front();
        if ( const auto* iv = sys.instance_vars.find( name ) )
        {
            if ( sc.kind != scope_kind::init )
            {
                error( s.span.loc, "TypeError", "instance collection '" + name + "' can only be assigned in init" );
                return std::nullopt;
            }
            const auto expected = sem_type::list_of( sem_type::instance( iv->system ) );
            out.k = tstmt::kind::instance_assign;
            out.name = name;
            out.value = check( *s.value, sc, &expected );
            if ( !assignable( expected, out.value->type ) )
            {
                mismatch( s.value->span.loc, expected, out.value->type );
                return std::nullopt;
            }
            return out;
        }
        if ( sys.state_index( name ) && sc.kind != scope_kind::func )
        {
            error( s.span.loc, "TypeError", "state variable '" + name + "' must be assigned through '@." + name + "'" );
            return std::nullopt;
        }

        out.k = tstmt::kind::local_assign;
        if ( const auto* local = sc.find( name ) )
        {
            const auto type = local->type;
            const auto slot = local->slot;
            out.value = check( *s.value, sc, &type );
            if ( !assignable( type, out.value->type ) )
            {
                mismatch( s.value->span.loc, type, out.value->type );
                return std::nullopt;
            }
            out.slot = slot;
            return out;
        }

        out.value = check( *s.value, sc, nullptr );
        if ( out.value->type.k == sem_type::kind::null_t )
        {
            error( s.value->span.loc, "TypeError", "cannot infer the type of '" + name + "' from null" );
            return std::nullopt;
        }
        out.slot = sc.next_slot++;
        sc.locals.push_back( { name, out.slot, out.value->type } );
        return out;
    }

    void check_spec( const spec_expr& s, const system_def& def )
    {
        switch ( s.kind )
        {
        case spec_kind::ref:
            if ( !def.specs.contains( s.name ) && !def.actions.contains( s.name ) &&
                 !def.instance_vars.contains( s.name ) )
                error( s.span.loc, "UnresolvedName",
                       "'" + s.name + "' is not a spec, action or instance collection of '" + def.name + "'" );
            return;
        case spec_kind::fold:
            if ( !def.instance_vars.contains( s.name ) )
                error( s.span.loc, "UnresolvedName", "'" + s.name + "' is not an instance collection" );
            return;
        default:
            for ( const auto& k : s.kids )
                check_spec( *k, def );
        }
    }

    void check_property( const system_def& def, property_def& pd, const property_decl& decl )
    {
        const expr* rest = decl.body.get();
        pd.spec = "Main";
        source_loc spec_loc = decl.loc;

        if ( rest->kind == expr_kind::binary && rest->bop == binary_op::implies &&
             rest->kids[ 0 ]->kind == expr_kind::name && !def.props.contains( rest->kids[ 0 ]->name ) )
        {
            const auto& lhs = *rest->kids[ 0 ];
            if ( !def.specs.contains( lhs.name ) )
            {
                error( lhs.span.loc, "UnresolvedName", "unknown spec or prop '" + lhs.name + "'" );
                pd.formula = error_node( rest->span );
                return;
            }
            pd.spec = lhs.name;
            spec_loc = lhs.span.loc;
            rest = rest->kids[ 1 ].get();
        }

        pd.always = rest->kind == expr_kind::always;
        if ( pd.always )
            rest = rest->kids[ 0 ].get();

        if ( !def.specs.contains( pd.spec ) )
        {
            error( spec_loc, "UnresolvedName", "property '" + pd.name + "' refers to missing spec '" + pd.spec + "'" );
            pd.formula = error_node( rest->span );
            return;
        }

        scope sc;
        sc.kind = scope_kind::property;
        sc.sys = &def;
        sc.owner = pd.name;
        const auto expected = sem_type::boolean();
        auto f = check( *rest, sc, &expected );
        if ( !assignable( expected, f->type ) )
            mismatch( rest->span.loc, expected, f->type );
        pd.formula = std::move( f );
    }

    void check_prop_cycles( const system_def& def, const own_decls& own )
    {
        std::function<void( const texpr&, std::set<std::string>& )> refs =
                [ & ]( const texpr& e, std::set<std::string>& out )
        {
            if ( e.kind == texpr_kind::prop_ref )
                out.insert( e.name );
            for ( const auto& k : e.kids )
                if ( k )
                    refs( *k, out );
        };

        for ( const auto& [ pd, decl ] : own.props )
        {
            std::set<std::string> seen;
            std::vector<std::string> work{ pd->name };
            bool cyclic = false;
            while ( !work.empty() && !cyclic )
            {
                const auto name = work.back();
                work.pop_back();
                const auto* p = def.props.find( name );
                if ( !p || !p->body )
                    continue;
                std::set<std::string> next;
                refs( *p->body, next );
                for ( const auto& n : next )
                {
                    if ( n == pd->name )
                        cyclic = true;
                    else if ( seen.insert( n ).second )
                        work.push_back( n );
                }
            }
            if ( cyclic )
                error( pd->loc, "TypeError", "prop '" + pd->name + "' is defined in terms of itself" );
        }
    }

    // ---- expressions ----

    const func_def* resolve_func( const system_def& sys, const std::string& name, source_loc loc )
    {
        if ( const auto* f = sys.funcs.find( name ) )
            return f;

        std::set<const func_def*> found;
        for ( const auto& [ n, d ] : _defs )
            if ( const auto* f = d->funcs.find( name ) )
                found.insert( f );
        for ( const auto& [ n, d ] : _external )
            if ( const auto* f = d->funcs.find( name ) )
                found.insert( f );

        if ( found.size() == 1 )
            return *found.begin();
        if ( found.empty() )
            error( loc, "UnresolvedName", "unknown function '" + name + "'" );
        else
            error( loc, "UnresolvedName", "ambiguous function '" + name + "' is defined by several systems" );
        return nullptr;
    }

    texpr_ptr check( const expr& e, scope& sc, const sem_type* expected )
    {
        const auto& sys = *sc.sys;
        const bool in_property = sc.kind == scope_kind::property;

        if ( in_property )
        {
            switch ( e.kind )
            {
            case expr_kind::bool_lit:
            case expr_kind::name:
            case expr_kind::unary:
            case expr_kind::binary:
                if ( e.kind == expr_kind::unary && e.uop != unary_op::logical_not )
                    break;
                if ( e.kind == expr_kind::binary && e.bop != binary_op::logical_and &&
                     e.bop != binary_op::logical_or && e.bop != binary_op::implies )
                    break;
                goto allowed;
            case expr_kind::always:
                goto allowed;
            default:
                break;
            }
            error( e.span.loc, "TypeError", "property formulas may only combine props with ! & | =>" );
            return error_node( e.span );
        }
    allowed:

        switch ( e.kind )
        {
        case expr_kind::int_lit:
        {
            auto t = make_node( texpr_kind::literal, sem_type::integer(), e.span );
            t->literal = e.int_value;
            return t;
        }
        case expr_kind::bool_lit:
        {
            auto t = make_node( texpr_kind::literal, sem_type::boolean(), e.span );
            t->literal = e.bool_value;
            return t;
        }
        case expr_kind::string_lit:
        {
            auto t = make_node( texpr_kind::literal, sem_type::string(), e.span );
            t->literal = e.name;
            return t;
        }
        case expr_kind::null_lit:
        {
            auto t = make_node( texpr_kind::literal, sem_type::null(), e.span );
            t->literal = null_value{};
            return t;
        }
        case expr_kind::elided:
            error( e.span.loc, "TypeError", "elided body '...' has no implementation" );
            return error_node( e.span );
        case expr_kind::always:
            error( e.span.loc, "TypeError", "'always' may only appear at the top of a property" );
            return error_node( e.span );
        case expr_kind::instance_ctor:
            error( e.span.loc, "TypeError", "instance constructor '" + e.binder + "::" + e.name +
                                                    "' is only valid as an argument of replicate" );
            return error_node( e.span );
        case expr_kind::state_root:
            error( e.span.loc, "TypeError", "'@' must be followed by '.' and a state variable" );
            return error_node( e.span );
        case expr_kind::name:
            return check_name( e, sc );
        case expr_kind::field:
            return check_field( e, sc );
        case expr_kind::index:
        {
            auto base = check( *e.kids[ 0 ], sc, nullptr );
            auto idx = check( *e.kids[ 1 ], sc, nullptr );
            if ( base->type.is_error() || idx->type.is_error() )
                return error_node( e.span );
            if ( base->type.k != sem_type::kind::list || base->type.nullable )
            {
                error( e.kids[ 0 ]->span.loc, "TypeError", "cannot index a value of type " + to_string( base->type ) );
                return error_node( e.span );
            }
            if ( !is_int( idx->type ) )
            {
                mismatch( e.kids[ 1 ]->span.loc, sem_type::integer(), idx->type );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::index, *base->type.elem, e.span );
            t->kids = { std::move( base ), std::move( idx ) };
            return t;
        }
        case expr_kind::call:
            return check_call( e, sc );
        case expr_kind::cast:
        {
            auto arg = check( *e.kids[ 0 ], sc, nullptr );
            if ( arg->type.is_error() )
                return error_node( e.span );
            const auto target = resolve_type( *e.cast_type, sys );
            const auto& from = arg->type;
            bool ok = !from.nullable;
            if ( target.k == sem_type::kind::int_t )
                ok = ok && ( from.k == sem_type::kind::int_t || from.k == sem_type::kind::str_t );
            else if ( target.k == sem_type::kind::str_t )
                ok = ok && ( from.k == sem_type::kind::int_t || from.k == sem_type::kind::str_t ||
                             from.k == sem_type::kind::bool_t );
            else
                ok = ok && ( from.k == sem_type::kind::bool_t || from.k == sem_type::kind::str_t );
            if ( !ok )
            {
                error( e.span.loc, "TypeError", "cannot cast " + to_string( from ) + " to " + to_string( target ) );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::cast, target, e.span );
            t->kids = { std::move( arg ) };
            return t;
        }
        case expr_kind::unary:
        {
            auto arg = check( *e.kids[ 0 ], sc, nullptr );
            if ( arg->type.is_error() )
                return error_node( e.span );
            const auto want = e.uop == unary_op::logical_not ? sem_type::boolean() : sem_type::integer();
            if ( !( arg->type == want ) )
            {
                mismatch( e.kids[ 0 ]->span.loc, want, arg->type );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::unary, want, e.span );
            t->uop = e.uop;
            t->kids = { std::move( arg ) };
            return t;
        }
        case expr_kind::binary:
            return check_binary( e, sc );
        case expr_kind::conditional:
        {
            const auto b = sem_type::boolean();
            auto c = check( *e.kids[ 0 ], sc, &b );
            auto x = check( *e.kids[ 1 ], sc, expected );
            auto y = check( *e.kids[ 2 ], sc, expected );
            if ( c->type.is_error() || x->type.is_error() || y->type.is_error() )
                return error_node( e.span );
            if ( !is_bool( c->type ) )
            {
                mismatch( e.kids[ 0 ]->span.loc, b, c->type );
                return error_node( e.span );
            }
            sem_type result;
            if ( x->type.k == sem_type::kind::null_t && y->type.k == sem_type::kind::null_t )
                result = sem_type::null();
            else if ( x->type.k == sem_type::kind::null_t )
                result = y->type.with_nullable( true );
            else if ( y->type.k == sem_type::kind::null_t )
                result = x->type.with_nullable( true );
            else if ( same_base( x->type, y->type ) )
                result = x->type.with_nullable( x->type.nullable || y->type.nullable );
            else
            {
                mismatch( e.kids[ 2 ]->span.loc, x->type, y->type );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::conditional, result, e.span );
            t->kids = { std::move( c ), std::move( x ), std::move( y ) };
            return t;
        }
        case expr_kind::record_lit:
            return check_record( e, sc, expected );
        case expr_kind::fold:
            return check_fold( e, sc );
        }
        return error_node( e.span );
    }

    texpr_ptr check_name( const expr& e, scope& sc )
    {
        const auto& sys = *sc.sys;
        if ( sc.kind == scope_kind::property )
        {
            if ( sys.props.contains( e.name ) )
            {
                auto t = make_node( texpr_kind::prop_ref, sem_type::boolean(), e.span );
                t->name = e.name;
                return t;
            }
            error( e.span.loc, "UnresolvedName", "unknown prop '" + e.name + "'" );
            return error_node( e.span );
        }

        if ( const auto* local = sc.find( e.name ) )
        {
            auto t = make_node( texpr_kind::local, local->type, e.span );
            t->slot = local->slot;
            return t;
        }
        if ( const auto idx = sys.state_index( e.name ); idx && sc.kind != scope_kind::constant )
        {
            if ( !sc.reads_state() )
            {
                error( e.span.loc, "TypeError",
                       "pure function '" + sc.owner + "' cannot read state variable '" + e.name + "'" );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::state_var, sys.state_vars[ *idx ].type, e.span );
            t->slot = *idx;
            return t;
        }
        if ( sc.kind == scope_kind::prop && sys.props.contains( e.name ) )
        {
            auto t = make_node( texpr_kind::prop_ref, sem_type::boolean(), e.span );
            t->name = e.name;
            return t;
        }
        if ( sc.kind == scope_kind::constant )
            error( e.span.loc, "TypeError", "initializers must be constant; '" + e.name + "' is not" );
        else
            error( e.span.loc, "UnresolvedName", "unknown name '" + e.name + "'" );
        return error_node( e.span );
    }

    texpr_ptr check_field( const expr& e, scope& sc )
    {
        const auto& sys = *sc.sys;
        const auto& base_expr = *e.kids[ 0 ];

        texpr_ptr base;
        if ( base_expr.kind == expr_kind::state_root )
        {
            if ( !sc.reads_state() )
            {
                error( e.span.loc, "TypeError",
                       sc.kind == scope_kind::func ? "pure function '" + sc.owner + "' cannot read '@'"
                                                   : std::string{ "'@' is not available here" } );
                return error_node( e.span );
            }
            const auto idx = sys.state_index( e.name );
            if ( !idx )
            {
                error( e.span.loc, "UnresolvedName", "unknown state variable '" + e.name + "'" );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::state_var, sys.state_vars[ *idx ].type, e.span );
            t->slot = *idx;
            return t;
        }

        base = check( base_expr, sc, nullptr );
        if ( base->type.is_error() )
            return error_node( e.span );
        if ( base->type.k != sem_type::kind::record )
        {
            error( e.span.loc, "TypeError", "value of type " + to_string( base->type ) + " has no fields" );
            return error_node( e.span );
        }
        if ( base->type.nullable )
        {
            error( e.span.loc, "TypeError", "field access on nullable " + to_string( base->type ) );
            return error_node( e.span );
        }
        const auto* rec = sys.records.find( base->type.name );
        const auto f = rec ? rec->field_index( e.name ) : std::nullopt;
        if ( !f )
        {
            error( e.span.loc, "UnresolvedName", "record '" + base->type.name + "' has no field '" + e.name + "'" );
            return error_node( e.span );
        }
        auto t = make_node( texpr_kind::field, rec->field_types[ *f ], e.span );
        t->field = *f;
        t->name = e.name;
        t->kids = { std::move( base ) };
        return t;
    }

    texpr_ptr check_call( const expr& e, scope& sc )
    {
        const auto& sys = *sc.sys;

        if ( e.name == "replicate" && !sys.funcs.contains( "replicate" ) )
        {
            if ( sc.kind != scope_kind::init )
            {
                error( e.span.loc, "TypeError", "replicate is only available in init" );
                return error_node( e.span );
            }
            if ( e.kids.size() != 2 || e.kids[ 1 ]->kind != expr_kind::instance_ctor )
            {
                error( e.span.loc, "TypeError", "replicate expects (count, binder::System)" );
                return error_node( e.span );
            }
            const auto want = sem_type::integer();
            auto n = check( *e.kids[ 0 ], sc, &want );
            if ( n->type.is_error() )
                return error_node( e.span );
            if ( !is_int( n->type ) )
            {
                mismatch( e.kids[ 0 ]->span.loc, want, n->type );
                return error_node( e.span );
            }
            const auto& system = e.kids[ 1 ]->name;
            if ( !system_exists( system ) )
            {
                error( e.kids[ 1 ]->span.loc, "UnresolvedName", "unknown system '" + system + "'" );
                return error_node( e.span );
            }
            auto t = make_node( texpr_kind::replicate, sem_type::list_of( sem_type::instance( system ) ), e.span );
            t->name = system;
            t->kids = { std::move( n ) };
            return t;
        }

        const auto* fn = resolve_func( sys, e.name, e.span.loc );
        if ( !fn )
            return error_node( e.span );
        if ( e.kids.size() != fn->param_types.size() )
        {
            error( e.span.loc, "TypeError",
                   "function '" + e.name + "' expects " + std::to_string( fn->param_types.size() ) +
                           " arguments, got " + std::to_string( e.kids.size() ) );
            return error_node( e.span );
        }

        auto t = make_node( texpr_kind::call, fn->result_type, e.span );
        t->func = fn;
        t->name = e.name;
        bool bad = false;
        for ( std::size_t i = 0; i < e.kids.size(); ++i )
        {
            auto arg = check( *e.kids[ i ], sc, &fn->param_types[ i ] );
            if ( arg->type.is_error() )
                bad = true;
            else if ( !assignable( fn->param_types[ i ], arg->type ) )
            {
                mismatch( e.kids[ i ]->span.loc, fn->param_types[ i ], arg->type );
                bad = true;
            }
            t->kids.push_back( std::move( arg ) );
        }
        if ( bad || fn->result_type.is_error() )
            return error_node( e.span );
        return t;
    }

    texpr_ptr check_binary( const expr& e, scope& sc )
    {
        auto lhs = check( *e.kids[ 0 ], sc, nullptr );
        auto rhs = check( *e.kids[ 1 ], sc, nullptr );
        if ( lhs->type.is_error() || rhs->type.is_error() )
            return error_node( e.span );

        sem_type result;
        switch ( e.bop )
        {
        case binary_op::add:
        case binary_op::sub:
        case binary_op::mul:
        case binary_op::div:
        case binary_op::mod:
        case binary_op::lt:
        case binary_op::le:
        case binary_op::gt:
        case binary_op::ge:
            for ( const auto* side : { &lhs, &rhs } )
                if ( !is_int( ( *side )->type ) )
                {
                    const auto& where = side == &lhs ? *e.kids[ 0 ] : *e.kids[ 1 ];
                    if ( ( *side )->type.k == sem_type::kind::int_t )
                        error( where.span.loc, "TypeError",
                               "arithmetic on nullable int" );
                    else
                        mismatch( where.span.loc, sem_type::integer(), ( *side )->type );
                    return error_node( e.span );
                }
            result = e.bop <= binary_op::mod ? sem_type::integer() : sem_type::boolean();
            break;
        case binary_op::eq:
        case binary_op::neq:
        {
            const auto& a = lhs->type;
            const auto& b = rhs->type;
            const bool a_null = a.k == sem_type::kind::null_t;
            const bool b_null = b.k == sem_type::kind::null_t;
            if ( a_null || b_null )
            {
                const auto& other = a_null ? b : a;
                const auto& other_expr = a_null ? *e.kids[ 1 ] : *e.kids[ 0 ];
                if ( !( a_null && b_null ) && !other.nullable )
                {
                    error( other_expr.span.loc, "TypeError",
                           "null comparison on non-nullable " + to_string( other ) );
                    return error_node( e.span );
                }
            }
            else if ( !same_base( a, b ) || a.k == sem_type::kind::instance || a.k == sem_type::kind::func )
            {
                mismatch( e.kids[ 1 ]->span.loc, a, b );
                return error_node( e.span );
            }
            result = sem_type::boolean();
            break;
        }
        case binary_op::logical_and:
        case binary_op::logical_or:
        case binary_op::implies:
            for ( const auto* side : { &lhs, &rhs } )
                if ( !is_bool( ( *side )->type ) )
                {
                    const auto& where = side == &lhs ? *e.kids[ 0 ] : *e.kids[ 1 ];
                    mismatch( where.span.loc, sem_type::boolean(), ( *side )->type );
                    return error_node( e.span );
                }
            result = sem_type::boolean();
            break;
        }

        auto t = make_node( texpr_kind::binary, result, e.span );
        t->bop = e.bop;
        t->kids = { std::move( lhs ), std::move( rhs ) };
        return t;
    }

    texpr_ptr check_record( const expr& e, scope& sc, const sem_type* expected )
    {
        const auto& sys = *sc.sys;
        if ( !expected || expected->k != sem_type::kind::record )
        {
            error( e.span.loc, "TypeError", "cannot infer the record type of this literal" );
            return error_node( e.span );
        }
        const auto* rec = sys.records.find( expected->name );
        if ( !rec )
            return error_node( e.span );

        auto t = make_node( texpr_kind::record_lit, sem_type::record( rec->name ), e.span );
        t->literal = record_value{ rec->name, rec->field_names, rec->defaults };
        t->kids.resize( rec->field_names.size() );
        bool bad = false;
        for ( std::size_t i = 0; i < e.field_names.size(); ++i )
        {
            const auto f = rec->field_index( e.field_names[ i ] );
            if ( !f )
            {
                error( e.kids[ i ]->span.loc, "UnresolvedName",
                       "record '" + rec->name + "' has no field '" + e.field_names[ i ] + "'" );
                bad = true;
                continue;
            }
            auto v = check( *e.kids[ i ], sc, &rec->field_types[ *f ] );
            if ( v->type.is_error() )
                bad = true;
            else if ( !assignable( rec->field_types[ *f ], v->type ) )
            {
                mismatch( e.kids[ i ]->span.loc, rec->field_types[ *f ], v->type );
                bad = true;
            }
            t->kids[ *f ] = std::move( v );
        }
        if ( bad )
            return error_node( e.span );
        return t;
    }

    texpr_ptr check_fold( const expr& e, scope& sc )
    {
        const auto& sys = *sc.sys;
        if ( sc.kind != scope_kind::prop )
        {
            error( e.span.loc, "TypeError", "fold over props is only allowed in prop bodies" );
            return error_node( e.span );
        }
        const auto& arg = *e.kids[ 0 ];
        if ( arg.kind != expr_kind::field || arg.kids[ 0 ]->kind != expr_kind::name )
        {
            error( arg.span.loc, "TypeError", "fold expects collection.Prop" );
            return error_node( e.span );
        }
        const auto& collection = arg.kids[ 0 ]->name;
        const auto* iv = sys.instance_vars.find( collection );
        if ( !iv )
        {
            error( arg.kids[ 0 ]->span.loc, "UnresolvedName", "'" + collection + "' is not an instance collection" );
            return error_node( e.span );
        }
        const bool has_prop = [ & ]
        {
            if ( const auto* d = lookup_def( iv->system ) )
                return d->props.contains( arg.name );
            return false;
        }();
        if ( !has_prop )
        {
            error( arg.span.loc, "UnresolvedName", "system '" + iv->system + "' has no prop '" + arg.name + "'" );
            return error_node( e.span );
        }
        auto t = make_node( texpr_kind::fold_prop, sem_type::boolean(), e.span );
        t->name = collection;
        t->name2 = arg.name;
        t->bop = e.bop;
        return t;
    }
};

void sort_diagnostics( std::vector<diagnostic>& diags, const std::vector<std::string>& file_order )
{
    auto rank = [ & ]( const std::string& f )
    {
        const auto it = std::find( file_order.begin(), file_order.end(), f );
        return static_cast<std::size_t>( it - file_order.begin() );
    };
    std::stable_sort( diags.begin(), diags.end(),
                      [ & ]( const diagnostic& a, const diagnostic& b )
                      {
                          const auto ra = rank( a.file );
                          const auto rb = rank( b.file );
                          if ( ra != rb )
                              return ra < rb;
                          if ( a.loc.line != b.loc.line )
                              return a.loc.line < b.loc.line;
                          return a.loc.col < b.loc.col;
                      } );
}

} // namespace

check_result typecheck( const linked_program& program )
{
    check_result out;
    analyzer an{ out.diagnostics };
    auto built = an.run( program.systems() );

    auto prog = std::make_shared<program_def>();
    for ( auto& d : built )
        prog->systems.push_back( std::move( d ) );
    if ( !program.files.empty() )
        for ( const auto& s : program.files.front().systems )
            prog->entry_systems.push_back( s.name );
    out.program = std::move( prog );

    std::vector<std::string> order;
    for ( const auto& f : program.files )
        order.push_back( f.file );
    sort_diagnostics( out.diagnostics, order );
    return out;
}

merge_result merge_refinement( const system_ast& child, std::shared_ptr<const system_def> parent )
{
    merge_result out;
    if ( !child.refines || *child.refines != parent->name )
    {
        out.diagnostics.push_back( make_diag( child.file, child.loc, "TypeError",
                                              "system '" + child.name + "' does not refine '" + parent->name + "'" ) );
        return out;
    }
    analyzer an{ out.diagnostics };
    an.add_external( std::move( parent ) );
    auto built = an.run( { &child } );
    if ( !built.empty() )
        out.def = built.front();
    sort_diagnostics( out.diagnostics, { child.file } );
    return out;
}

namespace
{

analysis finish( program_ast entry, std::vector<std::string> search_paths, const source_loader& loader )
{
    analysis out;
    auto linked = resolve_imports( std::move( entry ), search_paths, loader );
    if ( !linked.diagnostics.empty() )
    {
        out.diagnostics = std::move( linked.diagnostics );
        return out;
    }
    auto checked = typecheck( linked.program );
    out.program = std::move( checked.program );
    out.diagnostics = std::move( checked.diagnostics );
    return out;
}

} // namespace

analysis analyze_source( const std::string& text, const std::string& file, const source_loader& loader,
                         std::vector<std::string> search_paths )
{
    analysis out;
    auto parsed = parse_into( text, file, out.diagnostics );
    if ( !parsed )
        return out;
    return finish( std::move( *parsed ), std::move( search_paths ), loader );
}

analysis analyze_file( const std::string& path, std::vector<std::string> search_paths, const source_loader& loader )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
    {
        analysis out;
        out.io_error = true;
        out.io_message = "cannot read '" + path + "'";
        return out;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return analyze_source( text.str(), path, loader, std::move( search_paths ) );
}

// ---- program_def helpers ---------------------------------------------------

std::optional<std::size_t> record_def::field_index( std::string_view field ) const
{
    for ( std::size_t i = 0; i < field_names.size(); ++i )
        if ( field_names[ i ] == field )
            return i;
    return std::nullopt;
}

std::optional<std::size_t> system_def::state_index( std::string_view var ) const
{
    for ( std::size_t i = 0; i < state_vars.size(); ++i )
        if ( state_vars[ i ].name == var )
            return i;
    return std::nullopt;
}

std::vector<std::string> system_def::live_actions() const
{
    std::vector<std::string> out;
    for ( const auto& a : actions )
        if ( !specs.contains( a->name ) )
            out.push_back( a->name );
    return out;
}

bool same_structure( const system_def& a, const system_def& b, bool ignore_name )
{
    if ( !ignore_name && a.name != b.name )
        return false;
    if ( a.state_vars.size() != b.state_vars.size() )
        return false;
    for ( std::size_t i = 0; i < a.state_vars.size(); ++i )
    {
        const auto& x = a.state_vars[ i ];
        const auto& y = b.state_vars[ i ];
        if ( x.name != y.name || !( x.type == y.type ) || !( x.initial == y.initial ) )
            return false;
    }
    if ( a.records.names() != b.records.names() || a.instance_vars.names() != b.instance_vars.names() ||
         a.actions.names() != b.actions.names() || a.specs.names() != b.specs.names() ||
         a.props.names() != b.props.names() || a.properties.names() != b.properties.names() ||
         a.funcs.names() != b.funcs.names() || static_cast<bool>( a.init ) != static_cast<bool>( b.init ) )
        return false;
    for ( const auto& r : a.records )
    {
        const auto* o = b.records.find( r->name );
        if ( r->field_names != o->field_names || r->field_types != o->field_types )
            return false;
    }
    for ( const auto& s : a.specs )
        if ( !same_spec( *s->body, *b.specs.find( s->name )->body ) )
            return false;
    for ( const auto& f : a.funcs )
    {
        const auto* o = b.funcs.find( f->name );
        if ( f->param_types != o->param_types || !( f->result_type == o->result_type ) )
            return false;
    }
    for ( const auto& act : a.actions )
        if ( act->body.stmts.size() != b.actions.find( act->name )->body.stmts.size() )
            return false;
    return true;
}

const system_def* program_def::find( std::string_view name ) const
{
    for ( const auto& s : systems )
        if ( s->name == name )
            return s.get();
    return nullptr;
}

std::shared_ptr<const system_def> program_def::find_shared( std::string_view name ) const
{
    for ( const auto& s : systems )
        if ( s->name == name )
            return s;
    return nullptr;
}

} // namespace seni
