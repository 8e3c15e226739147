#include "fixtures.hpp"

#include "seni/core.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

using namespace seni;
using namespace seni::testing;

namespace
{

struct small_arena
{
    process_arena a;
    proc_id x, y, z;

    small_arena()
    {
        x = a.act( a.add_occurrence( { 0, {} } ) );
        y = a.act( a.add_occurrence( { 1, {} } ) );
        z = a.act( a.add_occurrence( { 2, {} } ) );
    }

    std::vector<std::uint32_t> labels_of( proc_id p )
    {
        std::vector<std::uint32_t> out;
        for ( const auto& s : a.steps( p ) )
            out.push_back( static_cast<std::uint32_t>( a.occ( s.occ ).action ) );
        return out;
    }
};

const std::vector<std::string> xyz{ "X", "Y", "Z" };

std::string elaboration_code( const std::string& source )
{
    try
    {
        (void)elaborate( load_source( source ), "E" );
    }
    catch ( const elaboration_error& e )
    {
        return e.code();
    }
    return "";
}

} // namespace

TEST_CASE( "arena: normal forms", "[core]" )
{
    small_arena s;
    auto& a = s.a;
    CHECK( a.seq( a.done(), s.x ) == s.x );
    CHECK( a.seq( s.x, a.done() ) == s.x );
    CHECK( a.par( { a.done(), a.done() } ) == a.done() );
    CHECK( a.par( { s.x } ) == s.x );
    CHECK( a.par( { a.par( { s.x, s.y } ), s.z } ) == a.par( { s.x, s.y, s.z } ) );
    CHECK( a.node( a.par( { a.par( { s.x, s.y } ), s.z } ) ).kids.size() == 3 );
}

TEST_CASE( "arena: hash consing", "[core]" )
{
    small_arena s;
    auto& a = s.a;
    const auto before = a.size();
    const auto p = a.seq( s.x, a.choice( s.y, s.z ) );
    const auto grown = a.size();
    CHECK( a.seq( s.x, a.choice( s.y, s.z ) ) == p );
    CHECK( a.size() == grown );
    CHECK( grown == before + 2 );
    CHECK( a.choice( s.y, s.z ) != a.choice( s.z, s.y ) );
}

TEST_CASE( "arena: steps", "[core]" )
{
    small_arena s;
    auto& a = s.a;
    CHECK( a.steps( a.done() ).empty() );

    const auto& act = a.steps( s.x );
    REQUIRE( act.size() == 1 );
    CHECK( act[ 0 ].next == a.done() );

    const auto sq = a.seq( s.x, s.y );
    REQUIRE( a.steps( sq ).size() == 1 );
    CHECK( a.steps( sq )[ 0 ].next == s.y );

    CHECK( s.labels_of( a.choice( s.x, a.choice( s.y, s.z ) ) ) == std::vector<std::uint32_t>{ 0, 1, 2 } );

    const auto loop = a.always( a.seq( s.x, s.y ) );
    REQUIRE( a.steps( loop ).size() == 1 );
    const auto after_x = a.steps( loop )[ 0 ].next;
    CHECK( after_x == a.seq( s.y, loop ) );
    REQUIRE( a.steps( after_x ).size() == 1 );
    CHECK( a.steps( after_x )[ 0 ].next == loop );
}

TEST_CASE( "arena: interleaving", "[core]" )
{
    small_arena s;
    auto& a = s.a;
    const auto p = a.par( { a.seq( s.x, s.y ), s.z } );
    CHECK( s.labels_of( p ) == std::vector<std::uint32_t>{ 0, 2 } );
    const auto& st = a.steps( p );
    CHECK( st[ 0 ].next == a.par( { s.y, s.z } ) );
    CHECK( st[ 1 ].next == a.par( { a.seq( s.x, s.y ), a.done() } ) );

    // every interleaving of x.y with z ends in Done after three steps
    std::set<proc_id> frontier{ p };
    for ( int i = 0; i < 3; ++i )
    {
        std::set<proc_id> next;
        for ( const auto q : frontier )
            for ( const auto& t : a.steps( q ) )
                next.insert( t.next );
        frontier = next;
    }
    CHECK( frontier == std::set<proc_id>{ a.done() } );
}

TEST_CASE( "arena: rendering", "[core]" )
{
    small_arena s;
    auto& a = s.a;
    CHECK( a.render( a.done(), xyz ) == "Done" );
    CHECK( a.render( a.seq( s.x, s.y ), xyz ) == "Seq(Act(X), Act(Y))" );
    CHECK( a.render( a.always( a.choice( s.x, s.z ) ), xyz ) == "Always(Choice(Act(X), Act(Z)))" );
}

TEST_CASE( "elaborate: single philosopher", "[core]" )
{
    const auto sys = elaborate( load_corpus( "PhilosopherAbstract.seni" ), "PhilosopherAbstract" );
    CHECK( sys.nodes().size() == 1 );
    CHECK( sys.action_labels() == std::vector<std::string>{ "PickFork", "ReturnFork" } );
    CHECK( sys.render_process( sys.main_process() ) == "Always(Seq(Act(PickFork), Act(ReturnFork)))" );
    CHECK( leaf( sys.initial_state(), "id" ) == value{ 0 } );
    CHECK( leaf( sys.initial_state(), "isThinking" ) == value{ true } );
    CHECK( leaf( sys.initial_state(), "h.leftHand" ) == value{ null_value{} } );

    const auto post = sys.apply_action( sys.initial_state(), *sys.find_action( "PickFork" ) );
    CHECK( leaf( post, "h.leftHand" ) == value{ 0 } );
    CHECK( leaf( post, "h.rightHand" ) == value{ 1 } );
    CHECK( leaf( post, "isThinking" ) == value{ false } );
    CHECK( leaf( sys.initial_state(), "isThinking" ) == value{ true } );
}

TEST_CASE( "elaborate: init arguments", "[core]" )
{
    const auto sys = elaborate( load_corpus( "PhilosopherAbstract.seni" ), "PhilosopherAbstract", { "2" } );
    CHECK( leaf( sys.initial_state(), "id" ) == value{ 2 } );
    const auto post = sys.apply_action( sys.initial_state(), *sys.find_action( "PickFork" ) );
    CHECK( leaf( post, "h.leftHand" ) == value{ 2 } );
    CHECK( leaf( post, "h.rightHand" ) == value{ 0 } );
}

TEST_CASE( "elaborate: decomposing specs tag their occurrences", "[core]" )
{
    const auto sys = elaborate( load_corpus( "Philosopher.seni" ), "Philosopher" );
    const auto& arena = sys.processes();
    std::set<std::string> seen;
    for ( std::uint32_t i = 0; i < arena.occurrence_count(); ++i )
    {
        const auto& o = arena.occ( i );
        const auto& label = sys.action_labels()[ o.action ];
        REQUIRE( o.scopes.size() == 1 );
        const auto& tag = o.scopes.front();
        CHECK( tag.spec == ( label.starts_with( "Pick" ) ? "PickFork" : "ReturnFork" ) );
        seen.insert( label + ( tag.completes ? "!" : "" ) );
    }
    // each action occurs once as an opener and once as a closer
    CHECK( seen == std::set<std::string>{ "PickLeft", "PickLeft!", "PickRight", "PickRight!", "ReturnLeft", "ReturnLeft!",
                                          "ReturnRight", "ReturnRight!" } );
}

TEST_CASE( "elaborate: table instance tree", "[core]" )
{
    const auto sys = elaborate( load_corpus( "Table.seni" ), "Table" );
    CHECK( sys.nodes().size() == 7 );
    CHECK( sys.actions().size() == 3 * 4 + 3 * 3 );
    CHECK( sys.find_action( "philosophers[2].PickRight" ) );
    CHECK( sys.find_action( "forks[0].Returned" ) );
    CHECK_FALSE( sys.find_action( "PickRight" ) );
    const auto& props = sys.prop_names();
    CHECK( props.front() == "AllWaiting" );
    CHECK( std::find( props.begin(), props.end(), "philosophers[1].Waiting" ) != props.end() );
    CHECK( sys.processes().node( sys.main_process() ).kind == proc_kind::par );
    CHECK( sys.processes().node( sys.main_process() ).kids.size() == 6 );
}

TEST_CASE( "elaborate: writes stay inside the owning instance", "[core]" )
{
    const auto sys = elaborate( load_corpus( "Table.seni" ), "Table" );
    const auto post = sys.apply_action( sys.initial_state(), *sys.find_action( "philosophers[1].PickLeft" ) );
    for ( std::size_t slot = 0; slot < post.size(); ++slot )
    {
        const auto& path = sys.layout().paths[ slot ];
        if ( !path.starts_with( "philosophers[1]." ) )
            CHECK( post[ slot ] == sys.initial_state()[ slot ] );
    }
    CHECK( leaf( post, "philosophers[1].h.leftHand" ) == value{ 1 } );
}

TEST_CASE( "elaborate: self reference through always", "[core]" )
{
    const auto loop = R"(system E {
    action A { }
    spec Loop { always (A.Loop) }
    spec Main { Loop }
})";
    const auto sys = elaborate( load_source( loop ), "E" );
    const auto g = build_lts( sys, 100 );
    CHECK( g.stats().nodes == 1 );
    CHECK( g.stats().edges == 1 );

    CHECK( elaboration_code( R"(system E {
    action A { }
    spec Main { A.Main }
})" ) == "UnboundedRecursion" );
    CHECK( elaboration_code( R"(system E {
    action A { }
    spec Main { always (Main | A) }
})" ) == "UnboundedRecursion" );
}

TEST_CASE( "elaborate: missing main spec", "[core]" )
{
    CHECK( elaboration_code( R"(system E {
    action A { }
    spec Other { A }
})" ) == "NoMainSpec" );
}
