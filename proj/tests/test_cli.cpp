#include "support.hpp"

#include "disjinv/cli.hpp"
#include "disjinv/frontend.hpp"
#include "disjinv/harness.hpp"
#include "disjinv/report.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <regex>

using namespace disjinv;
using namespace disjinv::test;

namespace
{

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run cli( std::vector< std::string > args, bool with_solver = true )
{
    if ( with_solver )
    {
        args.push_back( "--solver" );
        args.push_back( solver_config().command );
    }
    std::ostringstream out, err;
    const int code = run_cli( args, out, err );
    return { code, out.str(), err.str() };
}

std::filesystem::path temp_file( const std::string& name, const std::string& text )
{
    const auto p = std::filesystem::temp_directory_path() / ( "disjinv_cli_" + name );
    std::ofstream( p ) << text;
    return p;
}

std::size_t count( const std::string& s, const std::regex& re )
{
    return static_cast< std::size_t >( std::distance( std::sregex_iterator( s.begin(), s.end(), re ), std::sregex_iterator() ) );
}

const std::string no_solution = R"(
system nosol
state i : int;
init: true;
guard: false;
trans: i' = i;
post: false;
predicate: i = 0;
)";

} // namespace

TEST( Cli, InferLoopExample )
{
    const auto r = cli( { "infer", model_path( "loop.ts" ), "--n", "2", "--minimize", "--emit", "json" } );
    ASSERT_EQ( r.code, ExitOk ) << r.err;
    const auto doc = Json::parse( r.out );
    EXPECT_EQ( doc[ "schema" ], 1 );
    EXPECT_EQ( doc[ "outcome" ], "invariant" );
    EXPECT_EQ( doc[ "invariant" ][ "disjuncts" ].size(), 2u );

    const auto ts = load_system( model_path( "loop.ts" ) );
    const auto inv = invariant_from_json( doc, ts.state_preds.size() );
    const auto i = int_var( "i" ), a = int_var( "a" );
    const Formula expected =
            mk_or( { mk_and( { cmp( i, CmpOp::Eq, 0 ), cmp( i, CmpOp::Lt, a ) } ), cmp( i, CmpOp::Gt, 0 ) } );
    EXPECT_TRUE( semantically_equal( inv.to_formula( ts.state_preds ), expected, solver_config() ) );
}

TEST( Cli, JsonRoundTripAndCanonicalForm )
{
    const auto r = cli( { "infer", model_path( "counter.ts" ), "--n", "2", "--minimize", "--emit", "json" } );
    ASSERT_EQ( r.code, ExitOk );
    EXPECT_EQ( r.out.back(), '\n' );
    const auto doc = Json::parse( r.out );
    EXPECT_EQ( emit_json( doc ), r.out );
    EXPECT_TRUE( doc[ "stats" ].contains( "non_canonical" ) );
    EXPECT_FALSE( canonical( doc ).contains( "stats" ) );

    // Canonical parts do not depend on timing.
    const auto again = cli( { "infer", model_path( "counter.ts" ), "--n", "2", "--minimize", "--emit", "json" } );
    EXPECT_EQ( canonical( Json::parse( again.out ) ), canonical( doc ) );

    // Indices survive a report -> invariant -> report trip.
    const auto ts = load_system( model_path( "counter.ts" ) );
    const auto inv = invariant_from_json( doc, ts.state_preds.size() );
    ReportInput ri;
    ri.preds = ts.state_preds;
    ri.invariant = inv;
    EXPECT_EQ( build_report( ri )[ "invariant" ], doc[ "invariant" ] );
}

TEST( Cli, ClickerDot )
{
    const std::vector< std::string > args{ "abstract", model_path( "clicker.node" ), "--disjoint", "--n", "3", "--emit", "dot" };
    const auto r = cli( args );
    ASSERT_EQ( r.code, ExitOk ) << r.err;
    EXPECT_EQ( count( r.out, std::regex( R"(\n  q\d \[label=)" ) ), 3u );
    EXPECT_EQ( count( r.out, std::regex( R"(__start -> q\d;)" ) ), 1u );
    std::smatch zero, pos;
    ASSERT_TRUE( std::regex_search( r.out, zero, std::regex( R"(q(\d) \[label="q\d\\npre_out = 0"\])" ) ) );
    ASSERT_TRUE( std::regex_search( r.out, pos, std::regex( R"(q(\d) \[label="q\d\\npre_out >= 1"\])" ) ) );
    EXPECT_NE( r.out.find( "__start -> q" + zero[ 1 ].str() + ";" ), std::string::npos );
    EXPECT_NE( r.out.find( "q" + zero[ 1 ].str() + " -> q" + pos[ 1 ].str() + " [label=\"dir > 0\"]" ), std::string::npos );
    EXPECT_EQ( cli( args ).out, r.out );
}

TEST( Cli, SingleStateAutomaton )
{
    const auto p = temp_file( "hold.ts", R"(
system hold
state x : int;
input d : int;
init: x = 0;
trans: x' = x;
predicate: x = 0;
iopredicate: d > 0;
)" );
    const auto r = cli( { "abstract", p.string(), "--n", "1", "--emit", "dot" } );
    ASSERT_EQ( r.code, ExitOk ) << r.err;
    EXPECT_EQ( count( r.out, std::regex( R"(\n  q\d \[label=)" ) ), 1u );
    EXPECT_NE( r.out.find( "q0 -> q0 [label=\"true\"]" ), std::string::npos );
}

TEST( Cli, ExitCodes )
{
    const auto none = temp_file( "nopreds.ts", "system p\nstate x : int;\ninit: x = 0;\ntrans: x' = x;\n" );
    const auto r3 = cli( { "infer", none.string() } );
    EXPECT_EQ( r3.code, ExitUsage );
    EXPECT_NE( r3.err.find( "no predicates" ), std::string::npos );

    const auto nosol = temp_file( "nosol.ts", no_solution );
    const auto r1 = cli( { "infer", nosol.string(), "--n", "1", "--emit", "json" } );
    EXPECT_EQ( r1.code, ExitNegative );
    const auto doc = Json::parse( r1.out );
    EXPECT_EQ( doc[ "outcome" ], "no-solution" );
    EXPECT_FALSE( doc.contains( "invariant" ) );

    EXPECT_EQ( cli( { "infer", model_path( "loop.ts" ), "--max-iters", "1" } ).code, ExitInconclusive );

    EXPECT_EQ( cli( { "infer", "/nonexistent.ts" } ).code, ExitUsage );
    EXPECT_EQ( cli( { "bogus", model_path( "loop.ts" ) } ).code, ExitUsage );
    EXPECT_EQ( cli( { "infer", model_path( "loop.ts" ), "--subsumption", "some" } ).code, ExitUsage );
    EXPECT_EQ( cli( { "infer", model_path( "loop.ts" ), "--emit", "dot" } ).code, ExitUsage );
    EXPECT_EQ( cli( { "abstract", model_path( "clicker.node" ), "--edge-cover", "dnf:0" } ).code, ExitUsage );
    EXPECT_EQ( cli( { "check", model_path( "loop.ts" ) } ).code, ExitUsage );
    EXPECT_EQ( cli( { "--help" } ).code, ExitOk );
}

TEST( Cli, CheckInvariantFiles )
{
    const auto ok = temp_file( "good.json", R"({"invariant":{"disjuncts":[{"predicates":[0,4]},{"predicates":[2]}]}})" );
    const auto r0 = cli( { "check", model_path( "loop.ts" ), "--invariant", ok.string(), "--emit", "json" } );
    EXPECT_EQ( r0.code, ExitOk ) << r0.err;
    EXPECT_EQ( Json::parse( r0.out )[ "check" ][ "status" ], "verified" );

    const auto bad = temp_file( "bad.json", R"({"invariant":{"disjuncts":[{"predicates":[0]}]}})" );
    const auto r1 = cli( { "check", model_path( "loop.ts" ), "--invariant", bad.string(), "--emit", "json" } );
    EXPECT_EQ( r1.code, ExitNegative );
    const auto doc = Json::parse( r1.out );
    EXPECT_EQ( doc[ "check" ][ "condition" ], "consecution" );
    EXPECT_TRUE( doc[ "check" ].contains( "countermodel" ) );

    const auto range = temp_file( "range.json", R"({"invariant":{"disjuncts":[{"predicates":[9]}]}})" );
    EXPECT_EQ( cli( { "check", model_path( "loop.ts" ), "--invariant", range.string() } ).code, ExitUsage );
}

TEST( Cli, AbstractFromInvariantFile )
{
    const auto inv = temp_file( "clicker.json", R"({"invariant":{"disjuncts":[{"predicates":[0]},{"predicates":[1]},{"predicates":[2]}]}})" );
    const auto r = cli( { "abstract", model_path( "clicker.node" ), "--invariant", inv.string(), "--emit", "json" } );
    ASSERT_EQ( r.code, ExitOk ) << r.err;
    const auto doc = Json::parse( r.out );
    EXPECT_FALSE( doc.contains( "outcome" ) );
    EXPECT_EQ( doc[ "automaton" ][ "edges" ].size(), 9u );
}

TEST( Cli, SimulateWithContainment )
{
    const auto inv = temp_file( "sim.json", R"({"invariant":{"disjuncts":[{"predicates":[0,4]},{"predicates":[2]}]}})" );
    const auto r = cli( { "simulate", model_path( "loop.ts" ), "--steps", "30", "--seed", "5", "--invariant",
                          inv.string(), "--emit", "json" } );
    ASSERT_EQ( r.code, ExitOk ) << r.err;
    const auto doc = Json::parse( r.out );
    EXPECT_TRUE( doc[ "containment" ].get< bool >() );
    EXPECT_GE( doc[ "trace" ][ "states" ].size(), 1u );

    const auto narrow = temp_file( "narrow.json", R"({"invariant":{"disjuncts":[{"predicates":[0]}]}})" );
    const auto r1 = cli( { "simulate", model_path( "counter.ts" ), "--steps", "5", "--invariant", narrow.string() } );
    EXPECT_EQ( r1.code, ExitNegative );
}

TEST( Cli, SeveralFormatsToFiles )
{
    const auto base = std::filesystem::temp_directory_path() / "disjinv_cli_multi.out";
    const auto r = cli( { "abstract", model_path( "clicker.node" ), "--disjoint", "--n", "3", "--emit", "dot,json,text",
                          "--out", base.string() } );
    ASSERT_EQ( r.code, ExitOk ) << r.err;
    EXPECT_TRUE( r.out.empty() );
    for ( const char* ext : { ".dot", ".json", ".txt" } )
    {
        auto p = base;
        p.replace_extension( ext );
        EXPECT_TRUE( std::filesystem::exists( p ) ) << p;
    }
}

TEST( Cli, SolverFromEnvironmentAndFlag )
{
    ::setenv( "DISJINV_SOLVER", "/nonexistent/solver", 1 );
    const auto env = cli( { "infer", model_path( "loop.ts" ) }, false );
    const auto flag = cli( { "infer", model_path( "loop.ts" ), "--solver", DISJINV_TEST_SOLVER }, false );
    ::unsetenv( "DISJINV_SOLVER" );
    EXPECT_EQ( env.code, ExitUsage );
    EXPECT_EQ( flag.code, ExitOk ) << flag.err;
}
