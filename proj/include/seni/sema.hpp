#pragma once

#include "ast.hpp"
#include "program.hpp"
#include "source.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seni
{

// Locates `<name>.seni` modules.
class source_loader
{
public:
    struct loaded
    {
        std::string path;
        std::string text;
    };

    virtual ~source_loader() = default;
    [[nodiscard]] virtual std::optional<loaded> load( const std::string& module,
                                                      std::span<const std::string> search_paths ) const = 0;
};

class file_loader final : public source_loader
{
public:
    [[nodiscard]] std::optional<loaded> load( const std::string& module,
                                              std::span<const std::string> search_paths ) const override;
};

// In-memory modules keyed by name; search paths are ignored.
class memory_loader final : public source_loader
{
    std::map<std::string, std::string> _modules;

public:
    memory_loader() = default;
    explicit memory_loader( std::map<std::string, std::string> modules ) : _modules{ std::move( modules ) } {}

    void add( std::string name, std::string text ) { _modules[ std::move( name ) ] = std::move( text ); }

    [[nodiscard]] std::optional<loaded> load( const std::string& module,
                                              std::span<const std::string> search_paths ) const override;
};

// Every system reachable from the entry file, entry file first, imports in
// depth-first load order.
struct linked_program
{
    std::vector<program_ast> files;
    std::vector<std::string> modules;   // module name of each file

    [[nodiscard]] std::vector<const system_ast*> systems() const;
};

struct link_result
{
    linked_program program;
    std::vector<diagnostic> diagnostics;
};

// Loads all transitively imported modules. Reports MissingImport,
// CyclicImport (message lists the cycle, e.g. "A -> B -> A") and lex/parse
// errors of imported files.
link_result resolve_imports( program_ast entry, std::span<const std::string> search_paths,
                             const source_loader& loader );

struct check_result
{
    std::shared_ptr<const program_def> program;
    std::vector<diagnostic> diagnostics;

    [[nodiscard]] bool ok() const { return diagnostics.empty(); }
};

// Merges refinement hierarchies and type-checks every linked system.
// Diagnostics are in source order.
check_result typecheck( const linked_program& program );

// Checks `child` (which must refine `parent`) against an already-checked
// parent and returns the merged system.
struct merge_result
{
    std::shared_ptr<const system_def> def;
    std::vector<diagnostic> diagnostics;
};
merge_result merge_refinement( const system_ast& child, std::shared_ptr<const system_def> parent );

// Whole front half of the pipeline for one entry file: read, parse, link,
// check. Lex/parse errors of the entry surface as diagnostics. Returns
// std::nullopt in `program` when the entry file cannot be read.
struct analysis
{
    bool io_error = false;
    std::string io_message;
    std::shared_ptr<const program_def> program;
    std::vector<diagnostic> diagnostics;
};

analysis analyze_file( const std::string& path, std::vector<std::string> search_paths,
                       const source_loader& loader );
analysis analyze_source( const std::string& text, const std::string& file, const source_loader& loader,
                         std::vector<std::string> search_paths = {} );

// Module name of a file path: "dir/Table.seni" -> "Table".
std::string module_name( const std::string& path );

} // namespace seni
