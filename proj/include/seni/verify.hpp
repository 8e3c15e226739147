#pragma once

#include "explorer.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seni
{

class unresolved_prop : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Propositional formula over the propositions of an LTS.
struct prop_formula
{
    enum class kind
    {
        constant,
        prop,
        negation,
        conjunction,
        disjunction,
        implication
    };

    kind k = kind::constant;
    bool value = false;
    std::size_t prop = 0;           // index into lts::prop_names()
    std::vector<prop_formula> kids;

    static prop_formula constant_of( bool v ) { return { kind::constant, v, 0, {} }; }
    static prop_formula prop_of( std::size_t p ) { return { kind::prop, false, p, {} }; }
    static prop_formula negate( prop_formula f ) { return { kind::negation, false, 0, { std::move( f ) } }; }
    static prop_formula binary( kind k, prop_formula a, prop_formula b )
    {
        return { k, false, 0, { std::move( a ), std::move( b ) } };
    }
};

bool eval_formula( const prop_formula& f, const std::vector<bool>& labels );

// Text form over `names`, e.g. "!(AllWaiting)".
std::string to_string( const prop_formula& f, const std::vector<std::string>& names );

// Converts a checked property formula (prop refs of the entry system).
prop_formula compile_formula( const texpr& formula, const std::vector<std::string>& prop_names );

// Parses e.g. "AllWaiting & !philosophers[0].Waiting". Throws parse_error or
// unresolved_prop.
prop_formula parse_formula( const std::string& text, const std::vector<std::string>& prop_names );

enum class verdict_status
{
    holds,
    violated,
    inconclusive
};

struct verdict
{
    verdict_status status = verdict_status::holds;
    std::size_t node = 0;                   // violating node
    std::vector<std::uint32_t> trace;       // edge indices from the initial node
    std::size_t bound = 0;                  // for inconclusive
};

// `always f` when `always`, otherwise f at the initial node only.
verdict check_property( const prop_formula& f, bool always, const lts& g );

// Least node index (BFS order) whose labels satisfy f.
std::optional<std::size_t> find_satisfying_state( const prop_formula& f, const lts& g );

struct deadlock_report
{
    std::vector<std::size_t> sinks;     // among fully expanded nodes
    bool truncated = false;
};

deadlock_report detect_deadlock( const lts& g );

// "  PickLeft -> h.leftHand=0, isThinking=false" lines for a trace.
std::vector<std::string> render_trace( const lts& g, const std::vector<std::uint32_t>& trace );

// Steps from `before` to `after` as "path=value" pairs; "(no change)" if equal.
std::string render_diff( const state_vector& before, const state_vector& after );

} // namespace seni
