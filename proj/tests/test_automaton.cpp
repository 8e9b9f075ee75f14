#include "support.hpp"

#include "disjinv/automaton.hpp"
#include "disjinv/frontend.hpp"
#include "disjinv/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace disjinv;
using namespace disjinv::test;

namespace
{

TransitionSystem clicker() { return load_system( model_path( "clicker.node" ) ); }

CoverConfig cover( EdgeCoverMode mode = EdgeCoverMode::conjunction() )
{
    CoverConfig c;
    c.solver = solver_config();
    c.mode = mode;
    c.engine.solver = c.solver;
    return c;
}

DnfInvariant clicker_invariant( const TransitionSystem& ts )
{
    EngineOptions o;
    o.n = 3;
    o.minimize = true;
    o.disjoint = true;
    o.solver = solver_config();
    const auto out = infer( ts, ts.state_preds, o );
    EXPECT_TRUE( out.found() ) << out.reason;
    return *out.invariant;
}

const Variable dir{ "dir", Sort::Int, VarKind::Input };

// Automaton state index whose formula is equivalent to `f`.
std::size_t state_of( const AbstractAutomaton& aut, const Formula& f )
{
    for ( std::size_t i = 0; i < aut.size(); ++i )
        if ( equivalent( solver_config(), aut.states[ i ], f ) )
            return i;
    ADD_FAILURE() << "no state equivalent to " << to_string( f );
    return 0;
}

struct ClickerFixture : ::testing::Test
{
    static void SetUpTestSuite()
    {
        ts = new TransitionSystem( clicker() );
        aut = new AbstractAutomaton( build_automaton( *ts, ts->state_preds, clicker_invariant( *ts ), ts->io_preds, cover() ) );
    }
    static void TearDownTestSuite()
    {
        delete aut;
        delete ts;
    }

    // Predicates in the model file: last <= -1, last = 0, last >= 1.
    std::size_t neg() const { return state_of( *aut, ts->state_preds[ 0 ] ); }
    std::size_t zero() const { return state_of( *aut, ts->state_preds[ 1 ] ); }
    std::size_t pos() const { return state_of( *aut, ts->state_preds[ 2 ] ); }

    void expect_guard( std::size_t from, std::size_t to, const Formula& expected ) const
    {
        const auto* e = aut->edge( from, to );
        ASSERT_NE( e, nullptr ) << from << " -> " << to;
        EXPECT_TRUE( equivalent( solver_config(), e->guard.formula, expected ) )
                << from << " -> " << to << ": " << to_string( e->guard.formula );
    }

    static inline TransitionSystem* ts = nullptr;
    static inline AbstractAutomaton* aut = nullptr;
};

} // namespace

// --------------------------------------------------------------------------- clicker automaton

TEST_F( ClickerFixture, ThreeStatesStartingAtZero )
{
    ASSERT_EQ( aut->size(), 3u );
    EXPECT_TRUE( aut->initial[ zero() ] );
    EXPECT_FALSE( aut->initial[ pos() ] );
    EXPECT_FALSE( aut->initial[ neg() ] );
    EXPECT_TRUE( aut->warnings.empty() );
}

TEST_F( ClickerFixture, EdgesAndGuards )
{
    EXPECT_EQ( aut->edges.size(), 9u );
    expect_guard( zero(), pos(), cmp( dir, CmpOp::Gt, 0 ) );
    expect_guard( zero(), neg(), cmp( dir, CmpOp::Lt, 0 ) );
    expect_guard( zero(), zero(), cmp( dir, CmpOp::Eq, 0 ) );
    expect_guard( pos(), pos(), cmp( dir, CmpOp::Ge, 0 ) );
    expect_guard( neg(), neg(), cmp( dir, CmpOp::Le, 0 ) );
    expect_guard( pos(), zero(), cmp( dir, CmpOp::Eq, 0 ) );
    expect_guard( neg(), zero(), cmp( dir, CmpOp::Eq, 0 ) );
    expect_guard( pos(), neg(), cmp( dir, CmpOp::Lt, 0 ) );
    expect_guard( neg(), pos(), cmp( dir, CmpOp::Gt, 0 ) );
}

TEST_F( ClickerFixture, DecayIsNondeterministic )
{
    const Model io{ { "dir", Value{ Rational{ 0 } } } };
    std::size_t enabled = 0;
    for ( const auto& e : aut->edges )
        if ( e.from == pos() && evaluate( e.guard.formula, io ) )
            ++enabled;
    EXPECT_EQ( enabled, 2u );
}

TEST_F( ClickerFixture, GuardsAreSoundAndStrongest )
{
    for ( std::size_t i = 0; i < aut->size(); ++i )
        for ( std::size_t j = 0; j < aut->size(); ++j )
        {
            const Formula body = edge_body( *ts, ts->state_preds, clicker_invariant( *ts ), i, j );
            const auto* e = aut->edge( i, j );
            if ( !e )
            {
                EXPECT_TRUE( check_entailment( solver_config(), body, mk_false() ).holds() );
                continue;
            }
            EXPECT_TRUE( check_entailment( solver_config(), body, e->guard.formula ).holds() );
            for ( const auto& p : aut->io_preds )
                if ( check_entailment( solver_config(), body, p ).holds() )
                    EXPECT_TRUE( check_entailment( solver_config(), e->guard.formula, p ).holds() )
                            << to_string( p ) << " missing from " << i << " -> " << j;
        }
}

TEST_F( ClickerFixture, SimulatedRunsAreAccepted )
{
    SimulationOptions so;
    so.steps = 1500;
    so.seed = 11;
    const auto trace = simulate( *ts, so, solver_config() );
    EXPECT_EQ( trace.end, Trace::End::Complete );
    EXPECT_EQ( trace.steps(), 1500u );
    EXPECT_TRUE( check_acceptance( *aut, trace ) );
}

TEST_F( ClickerFixture, ViolatingRunIsRejected )
{
    // 0 -> 5 needs dir = 5, but the run claims dir = 0.
    Trace t;
    const auto& s = ts->state[ 0 ].name;
    t.states = { Model{ { s, Value{ Rational{ 0 } } } }, Model{ { s, Value{ Rational{ 5 } } } } };
    t.io = { Model{ { "dir", Value{ Rational{ 0 } } }, { "out", Value{ Rational{ 5 } } } } };
    EXPECT_FALSE( check_acceptance( *aut, t ) );
    t.io[ 0 ][ "dir" ] = Value{ Rational{ 5 } };
    EXPECT_TRUE( check_acceptance( *aut, t ) );
}

TEST_F( ClickerFixture, DnfGuardsAreIncludedInConjunctionGuards )
{
    const auto dnf = build_automaton( *ts, ts->state_preds, clicker_invariant( *ts ), ts->io_preds,
                                      cover( EdgeCoverMode::dnf( 2 ) ) );
    ASSERT_EQ( dnf.edges.size(), aut->edges.size() );
    for ( const auto& e : dnf.edges )
    {
        const auto* c = aut->edge( e.from, e.to );
        ASSERT_NE( c, nullptr );
        EXPECT_TRUE( check_entailment( solver_config(), e.guard.formula, c->guard.formula ).holds() );
    }
}

// --------------------------------------------------------------------------- covers

TEST( Cover, DnfSeparatesWhatTheConjunctionMerges )
{
    const Variable d{ "d", Sort::Int, VarKind::Input }, y{ "y", Sort::Int, VarKind::Output };
    const Formula body = mk_and( { mk_or( { cmp( d, CmpOp::Lt, 0 ), cmp( d, CmpOp::Gt, 0 ) } ), cmp( y, CmpOp::Eq, d ) } );
    const std::vector< Formula > io{ cmp( d, CmpOp::Lt, 0 ), cmp( d, CmpOp::Gt, 0 ), cmp( d, CmpOp::Eq, 0 ) };

    const auto conj = cover_conjunction( body, io, solver_config() );
    ASSERT_TRUE( conj );
    EXPECT_TRUE( conj->formula.is_true() );

    std::vector< std::string > warnings;
    const auto dnf = cover_dnf( body, io, 2, cover(), &warnings );
    ASSERT_TRUE( dnf );
    EXPECT_TRUE( warnings.empty() );
    EXPECT_TRUE( equivalent( solver_config(), dnf->formula, mk_or( { io[ 0 ], io[ 1 ] } ) ) )
            << to_string( dnf->formula );

    // k = 1 degenerates to the conjunction cover.
    const auto one = cover_dnf( body, io, 1, cover() );
    ASSERT_TRUE( one );
    EXPECT_TRUE( one->formula.is_true() );
}

TEST( Cover, UnsatisfiableBodyHasNoEdge )
{
    const Variable d{ "d", Sort::Int, VarKind::Input };
    const Formula body = mk_and( { cmp( d, CmpOp::Lt, 0 ), cmp( d, CmpOp::Gt, 0 ) } );
    EXPECT_FALSE( cover_conjunction( body, { cmp( d, CmpOp::Eq, 0 ) }, solver_config() ) );
    EXPECT_FALSE( cover_dnf( body, { cmp( d, CmpOp::Eq, 0 ) }, 2, cover() ) );
}

TEST( Cover, EntailedConjunctsArePruned )
{
    const Variable d{ "d", Sort::Int, VarKind::Input };
    const std::vector< Formula > io{ cmp( d, CmpOp::Ge, 0 ), cmp( d, CmpOp::Gt, 0 ), cmp( d, CmpOp::Ge, 3 ) };
    const auto g = cover_conjunction( cmp( d, CmpOp::Eq, 5 ), io, solver_config() );
    ASSERT_TRUE( g );
    ASSERT_EQ( g->rows.size(), 1u );
    EXPECT_EQ( g->rows[ 0 ], ( std::vector< std::size_t >{ 2 } ) );
}

TEST( Cover, NoIoPredicatesGivesTrue )
{
    const Variable d{ "d", Sort::Int, VarKind::Input };
    const auto g = cover_dnf( cmp( d, CmpOp::Eq, 1 ), {}, 3, cover() );
    ASSERT_TRUE( g );
    EXPECT_TRUE( g->formula.is_true() );
}

// --------------------------------------------------------------------------- degenerate systems

TEST( Automaton, IdentityTransitionOnlyHasSelfLoops )
{
    const auto ts = parse_transition_system( R"(
system hold
state x : int;
input d : int;
init: x = 0 || x = 1;
trans: x' = x;
predicate: x = 0;
predicate: x = 1;
iopredicate: d > 0;
)" );
    const DnfInvariant inv{ { { 0 }, { 1 } } };
    const auto aut = build_automaton( ts, ts.state_preds, inv, ts.io_preds, cover() );
    ASSERT_EQ( aut.edges.size(), 2u );
    for ( const auto& e : aut.edges )
    {
        EXPECT_EQ( e.from, e.to );
        EXPECT_TRUE( e.guard.formula.is_true() );
    }
    EXPECT_EQ( aut.initial, ( std::vector< bool >{ true, true } ) );
}

TEST( Automaton, FalseTransitionHasNoEdges )
{
    const auto ts = parse_transition_system( R"(
system stop
state x : int;
input d : int;
init: x = 0;
trans: false;
predicate: x = 0;
iopredicate: d > 0;
)" );
    const auto aut = build_automaton( ts, ts.state_preds, DnfInvariant{ { { 0 } } }, ts.io_preds, cover() );
    EXPECT_TRUE( aut.edges.empty() );
    EXPECT_EQ( aut.initial, ( std::vector< bool >{ true } ) );
}

TEST( Automaton, HarvestsIoPredicatesWhenNoneGiven )
{
    const auto ts = clicker();
    const auto aut = build_automaton( ts, ts.state_preds, DnfInvariant{ { { 1 } } }, {}, cover() );
    EXPECT_FALSE( aut.io_preds.empty() );
}

TEST( Automaton, EdgeBodyRejectsOutOfRangeStates )
{
    const auto ts = clicker();
    EXPECT_THROW( (void)edge_body( ts, ts.state_preds, DnfInvariant{ { { 1 } } }, 0, 1 ), DimensionError );
}

TEST( EdgeCoverModeText, Rendering )
{
    EXPECT_EQ( to_string( EdgeCoverMode::conjunction() ), "conj" );
    EXPECT_EQ( to_string( EdgeCoverMode::dnf( 3 ) ), "dnf:3" );
}
