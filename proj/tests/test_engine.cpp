#include "support.hpp"

#include "disjinv/engine.hpp"
#include "disjinv/frontend.hpp"
#include "disjinv/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace disjinv;
using namespace disjinv::test;

namespace
{

EngineOptions options( std::size_t n, bool minimize = true )
{
    EngineOptions o;
    o.n = n;
    o.minimize = minimize;
    o.solver = solver_config();
    return o;
}

TransitionSystem loop_system() { return load_system( model_path( "loop.ts" ) ); }
TransitionSystem counter() { return load_system( model_path( "counter.ts" ) ); }

// The counter loop over the reals.
TransitionSystem real_counter()
{
    return parse_transition_system( R"(
system counter_real
state i : real;
init: i = 0;
trans: (i + 1 <= 2 && i' = i + 1) || (i + 1 > 2 && i' = 0);
predicate: i <= 0;
predicate: i >= 0;
predicate: i >= 1;
predicate: i <= 1;
predicate: i <= 2;
predicate: i >= 2;
)" );
}

Formula inv_formula( const InferenceOutcome& out, const TransitionSystem& ts )
{
    return out.invariant->to_formula( ts.state_preds );
}

Formula loop_expected()
{
    const auto i = int_var( "i" ), a = int_var( "a" );
    return mk_or( { mk_and( { cmp( i, CmpOp::Eq, 0 ), cmp( i, CmpOp::Lt, a ) } ), cmp( i, CmpOp::Gt, 0 ) } );
}

// Semantic classes of the oracle's minimal set.
std::vector< Formula > minimal_formulas( const OracleReport& r, const PredicateSet& preds )
{
    std::vector< Formula > out;
    for ( const auto& b : r.minimal )
        out.push_back( instantiate_template( preds, b ) );
    return out;
}

bool equals_some( const Formula& f, const std::vector< Formula >& set )
{
    return std::any_of( set.begin(), set.end(),
                        [ & ]( const Formula& g ) { return semantically_equal( f, g, solver_config() ); } );
}

} // namespace

// --------------------------------------------------------------------------- build_vc

TEST( BuildVc, LoopExampleHasTwoConjunctsOverTemplateAndStep )
{
    const auto ts = loop_system();
    const auto vc = build_vc( ts, ts.state_preds, { 2, 8 } );
    EXPECT_EQ( vc.conjuncts.size(), 2u );
    const auto vars = free_variables( vc.formula() );
    std::size_t bools = 0;
    std::set< std::string > rest;
    for ( const auto& v : vars )
        if ( v.kind == VarKind::TemplateBool )
            ++bools;
        else
            rest.insert( v.name );
    EXPECT_EQ( bools, 16u );
    EXPECT_EQ( rest, ( std::set< std::string >{ "i", "a", "b", "i'", "a'", "b'" } ) );
}

TEST( BuildVc, PostconditionAddsThirdConjunct )
{
    auto ts = loop_system();
    ts.post = cmp( int_var( "i" ), CmpOp::Eq, int_var( "a" ) );
    EXPECT_EQ( build_vc( ts, ts.state_preds, { 2, 8 } ).conjuncts.size(), 3u );
}

TEST( BuildVc, NodeConsecutionIgnoresGuard )
{
    const auto ts = load_system( model_path( "clicker.node" ) );
    const auto vc = build_vc( ts, ts.state_preds, { 3, 3 } );
    ASSERT_EQ( vc.conjuncts.size(), 2u );
    const Formula tmpl = symbolic_template( ts.state_preds, { 3, 3 } );
    const Formula expected = mk_implies( mk_and( { tmpl, ts.trans } ), prime( tmpl, ts.state ) );
    EXPECT_TRUE( equivalent( solver_config(), vc.conjuncts[ 1 ], expected ) );
}

TEST( BuildVc, Errors )
{
    const auto ts = loop_system();
    EXPECT_THROW( (void)build_vc( ts, {}, { 2, 0 } ), NoPredicates );
    EXPECT_THROW( (void)build_vc( ts, ts.state_preds, { 2, 7 } ), DimensionError );
}

// --------------------------------------------------------------------------- initial store

TEST( InitialStore, BlockingSubsetsOfLoopPredicates )
{
    const auto ts = loop_system();
    const auto bs = blocking_subsets( ts.state_preds, 3, 10000, solver_config() );
    const std::set< std::vector< std::size_t > > got( bs.subsets.begin(), bs.subsets.end() );
    // i=0, i<0, i>0 | i=a, i<a, i>a | b, !b are pairwise exclusive; nothing else is.
    const std::set< std::vector< std::size_t > > expected{ { 0, 1 }, { 0, 2 }, { 1, 2 }, { 3, 4 },
                                                           { 3, 5 }, { 4, 5 }, { 6, 7 } };
    EXPECT_EQ( got, expected );
    EXPECT_FALSE( bs.budget_exceeded );
}

TEST( InitialStore, ForbidsCoselectingExclusivePredicates )
{
    const auto ts = loop_system();
    const auto store = initial_store( ts.state_preds, { 2, 8 }, options( 2 ), ts.state );
    EXPECT_EQ( store.blocking_clauses, 14u );
    // i=0 and i>0 in row 1
    const Formula both = mk_and( { mk_bool( template_var( 0, 0 ) ), mk_bool( template_var( 0, 2 ) ) } );
    EXPECT_TRUE( check_entailment( prop_config(), store.formula(), mk_not( both ) ).holds() );
    // Rows strictly increasing.
    EXPECT_TRUE( check_entailment( prop_config(), store.formula(), lex_order_constraints( { 2, 8 } ) ).holds() );
}

TEST( InitialStore, NaiveStartIsTrue )
{
    const auto ts = loop_system();
    auto o = options( 2 );
    o.symmetry = false;
    o.subsumption = Subsumption::Off;
    const auto store = initial_store( ts.state_preds, { 2, 8 }, o, ts.state );
    EXPECT_TRUE( store.constraints.empty() );
    EXPECT_TRUE( store.formula().is_true() );
}

TEST( InitialStore, BudgetExceededDegrades )
{
    const auto ts = loop_system();
    auto o = options( 2 );
    o.blocking_budget = 5;
    const auto prop = initial_store( ts.state_preds, { 2, 8 }, o, ts.state );
    ASSERT_EQ( prop.warnings.size(), 1u );
    o.store_backend = Backend::ExternalSmt;
    const auto smt = initial_store( ts.state_preds, { 2, 8 }, o, ts.state );
    EXPECT_EQ( smt.aux.size(), 2 * ts.state.size() );
}

TEST( InitialStore, FullSubsumptionUsesOneWitnessPerDisjunct )
{
    const auto ts = loop_system();
    auto o = options( 2 );
    o.subsumption = Subsumption::Full;
    const auto store = initial_store( ts.state_preds, { 2, 8 }, o, ts.state );
    EXPECT_EQ( store.aux.size(), 2 * ts.state.size() );
    EXPECT_EQ( store.constraints.size(), 3u ); // lex + two witnesses
}

TEST( Options, InconsistentStoreBackend )
{
    auto o = options( 2 );
    o.subsumption = Subsumption::Full;
    o.store_backend = Backend::InternalProp;
    EXPECT_THROW( (void)store_backend( o ), InvalidOptions );
    o.subsumption = Subsumption::BlockingClauses;
    o.descent = Descent::SemanticWitness;
    EXPECT_THROW( (void)infer( loop_system(), loop_system().state_preds, o ), InvalidOptions );
}

// --------------------------------------------------------------------------- infer

TEST( Infer, LoopExampleMinimal )
{
    const auto ts = loop_system();
    const auto out = infer( ts, ts.state_preds, options( 2 ) );
    ASSERT_TRUE( out.found() ) << out.reason;
    const Formula inv = inv_formula( out, ts );
    EXPECT_TRUE( semantically_equal( inv, loop_expected(), solver_config() ) ) << to_string( inv );
    // Exit states: i > 0 && i >= a. States with i > a lie in the invariant but are unreachable.
    const auto i = int_var( "i" ), a = int_var( "a" );
    const Formula exit = mk_and( { inv, mk_not( ts.guard ) } );
    EXPECT_TRUE( semantically_equal( exit, mk_and( { cmp( i, CmpOp::Gt, 0 ), cmp( i, CmpOp::Ge, a ) } ),
                                     solver_config() ) );
    EXPECT_FALSE( semantically_included( exit, cmp( i, CmpOp::Eq, a ), solver_config() ) );
    EXPECT_EQ( out.stats.minimality, Minimality::Minimal );
    EXPECT_LE( out.stats.iterations, 64u );
    EXPECT_EQ( out.shape, ( TemplateShape{ 2, 8 } ) );
}

TEST( Infer, WithoutMinimizationReturnsSomeInvariant )
{
    const auto ts = loop_system();
    const auto out = infer( ts, ts.state_preds, options( 2, false ) );
    ASSERT_TRUE( out.found() );
    EXPECT_TRUE( check_hoare( ts, inv_formula( out, ts ), solver_config() ).verified() );
    EXPECT_EQ( out.stats.minimality, Minimality::NotMinimized );
}

TEST( Infer, VacuousPrecondition )
{
    auto ts = loop_system();
    ts.init = mk_false();
    auto o = options( 2, false );
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() );
    EXPECT_LE( out.stats.iterations, std::size_t{ 1 } << 16 );
}

TEST( Infer, NoSolutionForFalsePostcondition )
{
    const auto ts = parse_transition_system( R"(
system nosol
state i : int;
init: true;
guard: false;
trans: i' = i;
post: false;
predicate: i = 0;
)" );
    const auto out = infer( ts, ts.state_preds, options( 1 ) );
    EXPECT_EQ( out.kind, InferenceOutcome::Kind::NoSolution );
    EXPECT_FALSE( out.invariant );
    EXPECT_NE( out.reason.find( "restricted" ), std::string::npos );
    EXPECT_TRUE( brute_force_minimal( ts, ts.state_preds, 1, {}, solver_config() ).minimal.empty() );
}

TEST( Infer, IterationLimitIsInconclusive )
{
    const auto ts = loop_system();
    auto o = options( 2, false );
    o.max_iterations = 1;
    const auto out = infer( ts, ts.state_preds, o );
    EXPECT_EQ( out.kind, InferenceOutcome::Kind::Inconclusive );
}

TEST( Infer, CandidatesNeverRepeatAndRespectTheBound )
{
    const auto ts = loop_system();
    auto o = options( 2, false );
    std::vector< TemplateAssignment > seen;
    o.on_candidate = [ & ]( const TemplateAssignment& b ) { seen.push_back( b ); };
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() );
    EXPECT_EQ( seen.size(), out.stats.iterations );
    EXPECT_EQ( std::set< TemplateAssignment >( seen.begin(), seen.end() ).size(), seen.size() );
    EXPECT_LE( out.stats.iterations, std::size_t{ 1 } << 16 );
}

// Every assignment that satisfies the VC also satisfies the final store.
TEST( Infer, StoreKeepsEveryValidAssignment )
{
    const auto ts = loop_system();
    const auto o = options( 2, false );
    const TemplateShape shape{ 2, 8 };
    RefinementLoop loop{ build_vc( ts, ts.state_preds, shape ), initial_store( ts.state_preds, shape, o, ts.state ), o,
                         []( const DnfInvariant& ) { return std::string{}; } };
    ASSERT_EQ( loop.run().kind, InferenceOutcome::Kind::Invariant );
    ASSERT_GT( loop.store().counterexamples.size(), 0u );
    const auto oracle = brute_force_minimal( ts, ts.state_preds, 2, {}, solver_config() );
    ASSERT_FALSE( oracle.verified.empty() );
    const Formula h = loop.store().formula();
    for ( const auto& b : oracle.verified )
        ASSERT_TRUE( evaluate( h, template_model( b ) ) ) << b.to_string();
}

TEST( Infer, SemanticDescentAndFullSubsumptionAgreeWithOracle )
{
    const auto ts = loop_system();
    for ( auto [ sub, descent ] : { std::pair{ Subsumption::Full, Descent::Propositional },
                                    std::pair{ Subsumption::BlockingClauses, Descent::SemanticWitness },
                                    std::pair{ Subsumption::Full, Descent::SemanticWitness } } )
    {
        auto o = options( 2 );
        o.subsumption = sub;
        o.descent = descent;
        const auto out = infer( ts, ts.state_preds, o );
        ASSERT_TRUE( out.found() ) << out.reason;
        const auto oracle = brute_force_minimal( ts, ts.state_preds, 2, StructuralOptions::from( o ), solver_config() );
        EXPECT_TRUE( equals_some( inv_formula( out, ts ), minimal_formulas( oracle, ts.state_preds ) ) )
                << to_string( sub ) << " " << to_string( descent );
    }
}

// --------------------------------------------------------------------------- counter and minimize

TEST( Minimize, CounterReachesTheOracleMinimum )
{
    const auto ts = counter();
    const auto oracle = brute_force_minimal( ts, ts.state_preds, 2, {}, solver_config() );
    const auto minima = minimal_formulas( oracle, ts.state_preds );
    // Over the integers [0,1] u {2} and {0} u [1,2] are the same set {0,1,2}.
    ASSERT_EQ( minima.size(), 1u );
    const auto i = int_var( "i" );
    EXPECT_TRUE( semantically_equal( minima[ 0 ], mk_and( { cmp( i, CmpOp::Ge, 0 ), cmp( i, CmpOp::Le, 2 ) } ),
                                     solver_config() ) );

    const auto out = infer( ts, ts.state_preds, options( 2 ) );
    ASSERT_TRUE( out.found() );
    EXPECT_TRUE( equals_some( inv_formula( out, ts ), minima ) );

    const auto from_true = minimize( ts, ts.state_preds, options( 2 ), DnfInvariant{ { {} } } );
    ASSERT_TRUE( from_true.found() );
    EXPECT_TRUE( equals_some( inv_formula( from_true, ts ), minima ) );
    EXPECT_GT( from_true.stats.descent_rounds, 0u );
}

TEST( Minimize, RealCounterHasASingleMinimum )
{
    const auto ts = real_counter();
    const auto oracle = brute_force_minimal( ts, ts.state_preds, 2, {}, solver_config() );
    const auto minima = minimal_formulas( oracle, ts.state_preds );
    const auto i = real_var( "i" );
    const Formula zero_then_interval =
            mk_or( { cmp( i, CmpOp::Eq, 0 ), mk_and( { cmp( i, CmpOp::Ge, 1 ), cmp( i, CmpOp::Le, 2 ) } ) } );
    const Formula interval_then_two =
            mk_or( { mk_and( { cmp( i, CmpOp::Ge, 0 ), cmp( i, CmpOp::Le, 1 ) } ), cmp( i, CmpOp::Eq, 2 ) } );
    ASSERT_EQ( minima.size(), 1u );
    EXPECT_TRUE( semantically_equal( minima[ 0 ], zero_then_interval, solver_config() ) );
    // 0.5 -> 1.5 leaves [0,1] u {2}
    EXPECT_FALSE( check_hoare( ts, interval_then_two, solver_config() ).verified() );

    const auto out = infer( ts, ts.state_preds, options( 2 ) );
    ASSERT_TRUE( out.found() );
    EXPECT_TRUE( semantically_equal( inv_formula( out, ts ), zero_then_interval, solver_config() ) );
}

TEST( Minimize, AlreadyMinimalIsAFixpoint )
{
    const auto ts = loop_system();
    const auto first = infer( ts, ts.state_preds, options( 2 ) );
    ASSERT_TRUE( first.found() );
    const auto again = minimize( ts, ts.state_preds, options( 2 ), *first.invariant );
    ASSERT_TRUE( again.found() );
    EXPECT_EQ( again.stats.descent_rounds, 0u );
    EXPECT_EQ( *again.invariant, *first.invariant );
    EXPECT_EQ( again.stats.minimality, Minimality::Minimal );
}

TEST( Minimize, DescentNeverRepeatsMatrices )
{
    const auto ts = loop_system();
    auto o = options( 2 );
    o.symmetry = false;
    std::vector< TemplateAssignment > seen;
    o.on_candidate = [ & ]( const TemplateAssignment& b ) { seen.push_back( b ); };
    const auto out = minimize( ts, ts.state_preds, o, DnfInvariant{ { {} } } );
    ASSERT_TRUE( out.found() );
    EXPECT_GT( out.stats.descent_rounds, 0u );
    EXPECT_EQ( std::set< TemplateAssignment >( seen.begin(), seen.end() ).size(), seen.size() );
    const auto oracle = brute_force_minimal( ts, ts.state_preds, 2, StructuralOptions::from( o ), solver_config() );
    EXPECT_TRUE( equals_some( inv_formula( out, ts ), minimal_formulas( oracle, ts.state_preds ) ) );
}

// --------------------------------------------------------------------------- grow

TEST( Grow, RealCounterGrowsToThreeSingletons )
{
    const auto ts = real_counter();
    std::vector< Formula > per_n;
    for ( std::size_t n = 1; n <= 3; ++n )
    {
        const auto minima = minimal_formulas( brute_force_minimal( ts, ts.state_preds, n, {}, solver_config() ),
                                              ts.state_preds );
        ASSERT_EQ( minima.size(), 1u ) << n;
        per_n.push_back( minima[ 0 ] );
    }
    const auto i = real_var( "i" );
    EXPECT_TRUE( semantically_equal( per_n[ 0 ], mk_and( { cmp( i, CmpOp::Ge, 0 ), cmp( i, CmpOp::Le, 2 ) } ),
                                     solver_config() ) );
    EXPECT_TRUE( semantically_equal(
            per_n[ 2 ], mk_or( { cmp( i, CmpOp::Eq, 0 ), cmp( i, CmpOp::Eq, 1 ), cmp( i, CmpOp::Eq, 2 ) } ),
            solver_config() ) );

    auto o = options( 1 );
    o.grow = true;
    o.max_n = 5;
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() ) << out.reason;
    EXPECT_EQ( out.stats.final_n, 3u );
    EXPECT_TRUE( semantically_equal( inv_formula( out, ts ), per_n[ 2 ], solver_config() ) );

    o.descent = Descent::SemanticWitness;
    const auto sem = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( sem.found() ) << sem.reason;
    EXPECT_EQ( sem.stats.final_n, 3u );
    EXPECT_TRUE( semantically_equal( inv_formula( sem, ts ), per_n[ 2 ], solver_config() ) );
}

TEST( Grow, IntegerCounterStopsAtOne )
{
    const auto ts = counter();
    auto o = options( 1 );
    o.grow = true;
    o.max_n = 3;
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() );
    EXPECT_EQ( out.stats.final_n, 1u );
}

TEST( Grow, ExactConjunctionStopsImmediately )
{
    const auto ts = parse_transition_system( R"(
system hold
state i : int;
init: i = 0;
trans: i' = i;
predicate: i = 0;
)" );
    const auto oracle = brute_force_minimal( ts, ts.state_preds, 1, {}, solver_config() );
    ASSERT_EQ( oracle.minimal.size(), 1u );
    auto o = options( 1 );
    o.grow = true;
    o.max_n = 3;
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() );
    EXPECT_EQ( out.stats.final_n, 1u );
    EXPECT_TRUE( semantically_equal( inv_formula( out, ts ), cmp( int_var( "i" ), CmpOp::Eq, 0 ), solver_config() ) );
}

TEST( Grow, MaxNEqualToStartIsPlainMinimize )
{
    const auto ts = loop_system();
    auto o = options( 2 );
    o.grow = true;
    o.max_n = 2;
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() );
    EXPECT_EQ( out.stats.final_n, 2u );
    EXPECT_TRUE( semantically_equal( inv_formula( out, ts ), loop_expected(), solver_config() ) );
}

// --------------------------------------------------------------------------- disjointness

TEST( Disjoint, ClickerPartition )
{
    const auto ts = load_system( model_path( "clicker.node" ) );
    auto o = options( 3 );
    o.disjoint = true;
    const auto out = infer( ts, ts.state_preds, o );
    ASSERT_TRUE( out.found() ) << out.reason;
    ASSERT_EQ( out.invariant->size(), 3u );
    std::set< std::vector< std::size_t > > rows( out.invariant->disjuncts.begin(), out.invariant->disjuncts.end() );
    EXPECT_EQ( rows, ( std::set< std::vector< std::size_t > >{ { 0 }, { 1 }, { 2 } } ) );
}

TEST( Disjoint, NoConstraintsForOneDisjunct )
{
    EXPECT_TRUE( disjointness_constraints( counter().state_preds, { 1, 6 } ).empty() );
    EXPECT_EQ( disjointness_constraints( counter().state_preds, { 3, 6 } ).size(), 3u );
}

TEST( Disjoint, OverlapRefutedAtZero )
{
    const auto i = int_var( "i" );
    const PredicateSet preds{ cmp( i, CmpOp::Ge, 0 ), cmp( i, CmpOp::Le, 0 ) };
    const TemplateShape shape{ 2, 2 };
    const TemplateAssignment b{ shape, { { true, false }, { false, true } } };
    const Formula c = substitute( disjointness_constraints( preds, shape )[ 0 ], template_binding( b ) );
    EXPECT_FALSE( evaluate( c, Model{ { "i", Value{ 0 } } } ) );
    EXPECT_TRUE( evaluate( c, Model{ { "i", Value{ 3 } } } ) );
}

// --------------------------------------------------------------------------- soundness gate

TEST( Gate, SkippedConjunctIsCaught )
{
    const auto ts = loop_system();
    for ( auto part : { VcPart::Consecution, VcPart::Init } )
    {
        auto o = options( 2 );
        o.skip_conjunct = part;
        EXPECT_THROW( (void)infer( ts, ts.state_preds, o ), SoundnessGateFailure );
    }
}

TEST( Gate, EveryOutcomeOnTheCorpusPassesHoare )
{
    for ( const char* file : { "loop.ts", "counter.ts", "updown.ts", "sawtooth.ts", "clicker.node", "latch.node",
                               "thermostat.node" } )
    {
        const auto ts = load_system( model_path( file ) );
        const auto out = infer( ts, ts.state_preds, options( 2 ) );
        ASSERT_TRUE( out.found() ) << file << ": " << out.reason;
        EXPECT_TRUE( check_hoare( ts, inv_formula( out, ts ), solver_config() ).verified() ) << file;
    }
}
