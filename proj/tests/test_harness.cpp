#include "support.hpp"

#include "disjinv/frontend.hpp"
#include "disjinv/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace disjinv;
using namespace disjinv::test;

namespace
{

TransitionSystem loop_system() { return load_system( model_path( "loop.ts" ) ); }

const Variable i_var = int_var( "i" );
const Variable a_var = int_var( "a" );

Formula loop_invariant()
{
    return mk_or( { mk_and( { cmp( i_var, CmpOp::Eq, 0 ), cmp( i_var, CmpOp::Lt, a_var ) } ),
                    cmp( i_var, CmpOp::Gt, 0 ) } );
}

} // namespace

// --------------------------------------------------------------------------- oracle

TEST( Oracle, LoopExampleRegionsAndMinima )
{
    const auto ts = loop_system();
    const auto r = brute_force_minimal( ts, ts.state_preds, 2, {}, solver_config() );
    // 3 positions of i against 0, times 3 against a, times the value of b.
    EXPECT_EQ( r.regions, 18u );
    ASSERT_FALSE( r.minimal.empty() );
    const bool has = std::any_of( r.minimal.begin(), r.minimal.end(), [ & ]( const TemplateAssignment& b ) {
        return semantically_equal( instantiate_template( ts.state_preds, b ), loop_invariant(), solver_config() );
    } );
    EXPECT_TRUE( has );
    for ( const auto& b : r.verified )
        EXPECT_TRUE( check_hoare( ts, instantiate_template( ts.state_preds, b ), solver_config() ).verified() )
                << b.to_string();
}

TEST( Oracle, SymmetryOnlyDropsPermutations )
{
    const auto ts = load_system( model_path( "counter.ts" ) );
    StructuralOptions all;
    all.symmetry = false;
    const auto full = brute_force_minimal( ts, ts.state_preds, 2, all, solver_config() );
    const auto sym = brute_force_minimal( ts, ts.state_preds, 2, {}, solver_config() );
    EXPECT_LT( sym.examined, full.examined );
    EXPECT_EQ( sym.minimal.size(), full.minimal.size() );
    EXPECT_LT( sym.verified.size(), full.verified.size() );
}

TEST( Oracle, EmptyWhenNothingIsInductive )
{
    const auto ts = parse_transition_system( R"(
system bad
state x : int;
init: x = 0;
guard: x < 3;
trans: x' = x + 1;
post: x = 5;
predicate: x >= 0;
predicate: x <= 3;
)" );
    const auto r = brute_force_minimal( ts, ts.state_preds, 2, {}, solver_config() );
    EXPECT_TRUE( r.minimal.empty() );
    EXPECT_TRUE( r.verified.empty() );
}

TEST( Oracle, CapAndPredicateErrors )
{
    const auto ts = loop_system();
    EXPECT_THROW( (void)brute_force_minimal( ts, ts.state_preds, 3, {}, solver_config() ), CapExceeded );
    EXPECT_THROW( (void)brute_force_minimal( ts, {}, 2, {}, solver_config() ), NoPredicates );
}

// --------------------------------------------------------------------------- Hoare checks

TEST( Hoare, LoopInvariantVerified )
{
    EXPECT_TRUE( check_hoare( loop_system(), loop_invariant(), solver_config() ).verified() );
    EXPECT_TRUE( check_hoare( loop_system(), mk_true(), solver_config() ).verified() );
}

TEST( Hoare, FailuresNameTheCondition )
{
    const auto ts = loop_system();
    const auto cons = check_hoare( ts, cmp( i_var, CmpOp::Lt, a_var ), solver_config() );
    EXPECT_EQ( cons.status, HoareVerdict::Status::Failed );
    EXPECT_EQ( cons.condition, "consecution" );
    // The countermodel takes a guarded step out of i < a.
    EXPECT_TRUE( evaluate( mk_and( { ts.guard, ts.trans } ), cons.countermodel ) );
    EXPECT_FALSE( evaluate( prime( cmp( i_var, CmpOp::Lt, a_var ), ts.state ), cons.countermodel ) );

    const auto ini = check_hoare( ts, cmp( i_var, CmpOp::Eq, a_var ), solver_config() );
    EXPECT_EQ( ini.condition, "initiation" );

    auto with_post = ts;
    with_post.post = cmp( i_var, CmpOp::Eq, a_var );
    const auto post = check_hoare( with_post, loop_invariant(), solver_config() );
    EXPECT_EQ( post.condition, "postcondition" );
}

TEST( Hoare, DnfOverload )
{
    const auto ts = loop_system();
    // Predicates: 0 i = 0, 2 i > 0, 4 i < a.
    const DnfInvariant inv{ { { 0, 4 }, { 2 } } };
    EXPECT_TRUE( check_hoare( ts, ts.state_preds, inv, solver_config() ).verified() );
    EXPECT_FALSE( check_hoare( ts, ts.state_preds, DnfInvariant{ { { 0 } } }, solver_config() ).verified() );
}

TEST( Semantic, InclusionAndEquality )
{
    const auto x = int_var( "x" );
    const Formula a = cmp( x, CmpOp::Gt, 0 ), b = cmp( x, CmpOp::Ge, 1 ), c = cmp( x, CmpOp::Ge, 0 );
    EXPECT_TRUE( semantically_equal( a, b, solver_config() ) );
    EXPECT_TRUE( semantically_included( a, c, solver_config() ) );
    EXPECT_FALSE( semantically_included( c, a, solver_config() ) );
}

// --------------------------------------------------------------------------- simulation

TEST( Simulate, ZeroStepsGivesTheInitialState )
{
    const auto ts = loop_system();
    SimulationOptions so;
    so.steps = 0;
    const auto t = simulate( ts, so, solver_config() );
    ASSERT_EQ( t.states.size(), 1u );
    EXPECT_EQ( t.steps(), 0u );
    EXPECT_EQ( t.end, Trace::End::Complete );
    EXPECT_TRUE( evaluate( ts.init, t.states[ 0 ] ) );
}

TEST( Simulate, LoopRunsExitAtTheBound )
{
    const auto ts = loop_system();
    for ( std::uint64_t seed = 1; seed <= 5; ++seed )
    {
        SimulationOptions so;
        so.steps = 500;
        so.seed = seed;
        so.bound = 20;
        const auto t = simulate( ts, so, solver_config() );
        ASSERT_EQ( t.end, Trace::End::Exited ) << seed;
        const auto& last = t.states.back();
        EXPECT_EQ( last.at( "i" ), last.at( "a" ) );
        for ( const auto& s : t.states )
            EXPECT_TRUE( evaluate( loop_invariant(), s ) );
    }
}

TEST( Simulate, StepsSatisfyTheTransitionRelation )
{
    const auto ts = load_system( model_path( "sawtooth.ts" ) );
    SimulationOptions so;
    so.steps = 50;
    so.seed = 4;
    const auto t = simulate( ts, so, solver_config() );
    ASSERT_EQ( t.steps(), 50u );
    for ( std::size_t k = 0; k < t.steps(); ++k )
    {
        Model m = t.io[ k ];
        for ( const auto& [ name, v ] : t.states[ k ] )
            m[ name ] = v;
        for ( const auto& [ name, v ] : t.states[ k + 1 ] )
            m[ name + "'" ] = v;
        EXPECT_TRUE( evaluate( mk_and( { ts.guard, ts.trans } ), m ) ) << k;
    }
}

TEST( Simulate, SameSeedSameTrace )
{
    const auto ts = load_system( model_path( "clicker.node" ) );
    SimulationOptions so;
    so.steps = 40;
    so.seed = 9;
    const auto a = simulate( ts, so, solver_config() );
    const auto b = simulate( ts, so, solver_config() );
    EXPECT_EQ( a.states, b.states );
    EXPECT_EQ( a.io, b.io );
}

TEST( Simulate, StuckWhenNoSuccessor )
{
    const auto ts = parse_transition_system( R"(
system stop
state x : int;
init: x = 0;
trans: x' = x + 1 && x > 0;
)" );
    const auto t = simulate( ts, {}, solver_config() );
    EXPECT_EQ( t.end, Trace::End::Stuck );
    EXPECT_EQ( t.steps(), 0u );
}

TEST( Acceptance, EmptyTraceIsRejected )
{
    AbstractAutomaton aut;
    EXPECT_FALSE( check_acceptance( aut, Trace{} ) );
}
