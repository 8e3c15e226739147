#pragma once

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace seni
{

struct source_loc
{
    int line = 1;
    int col = 1;

    friend bool operator==( const source_loc&, const source_loc& ) = default;
};

// Byte range [begin, end) into the originating source text, plus the
// position of its first character.
struct source_span
{
    std::size_t begin = 0;
    std::size_t end = 0;
    source_loc loc;
};

enum class severity
{
    error,
    warning,
    note
};

struct diagnostic
{
    std::string file;
    source_loc loc;
    severity level = severity::error;
    std::string message;
    // Machine-readable class, e.g. "TypeError", "MissingImport". Not rendered.
    std::string code;
};

std::string to_string( const diagnostic& d );
std::ostream& operator<<( std::ostream& out, const diagnostic& d );

// Base of every error that points into a source file.
class located_error : public std::runtime_error
{
    source_loc _loc;

public:
    located_error( source_loc loc, const std::string& message )
            : std::runtime_error( message ), _loc{ loc } {}

    [[nodiscard]] source_loc loc() const { return _loc; }
};

class lex_error : public located_error
{
public:
    using located_error::located_error;
};

class parse_error : public located_error
{
    std::vector<std::string> _expected;

public:
    parse_error( source_loc loc, const std::string& message, std::vector<std::string> expected = {} )
            : located_error( loc, message ), _expected{ std::move( expected ) } {}

    [[nodiscard]] const std::vector<std::string>& expected() const { return _expected; }
};

// Raised by evaluation (division by zero, overflow, bad cast, index out of range).
class eval_fault : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Raised by elaboration (no Main, unbounded spec recursion, faults in init).
class elaboration_error : public std::runtime_error
{
    std::string _code;

public:
    elaboration_error( std::string code, const std::string& message )
            : std::runtime_error( message ), _code{ std::move( code ) } {}

    // "NoMainSpec", "UnboundedRecursion", "UnknownSystem", "EvalFault", ...
    [[nodiscard]] const std::string& code() const { return _code; }
};

} // namespace seni
