#include "disjinv/automaton.hpp"

#include "disjinv/frontend.hpp"

#include <algorithm>

namespace disjinv
{

std::string to_string( const EdgeCoverMode& mode )
{
    return mode.kind == EdgeCoverMode::Kind::Conjunction ? "conj" : "dnf:" + std::to_string( mode.k );
}

const AutomatonEdge* AbstractAutomaton::edge( std::size_t from, std::size_t to ) const
{
    for ( const auto& e : edges )
        if ( e.from == from && e.to == to )
            return &e;
    return nullptr;
}

Formula edge_body( const TransitionSystem& ts, const PredicateSet& preds, const DnfInvariant& inv, std::size_t i,
                   std::size_t j )
{
    if ( i >= inv.size() || j >= inv.size() )
        throw DimensionError( "edge (" + std::to_string( i ) + ", " + std::to_string( j ) + ") outside " +
                              std::to_string( inv.size() ) + " states" );
    return mk_and( { inv.disjunct( preds, i ), prime( inv.disjunct( preds, j ), ts.state ), ts.guard, ts.trans } );
}

namespace
{

Formula row_formula( const std::vector< Formula >& io_preds, const std::vector< std::size_t >& row )
{
    std::vector< Formula > conj;
    for ( auto j : row )
        conj.push_back( io_preds[ j ] );
    return mk_and( conj );
}

Formula guard_formula( const std::vector< Formula >& io_preds, const std::vector< std::vector< std::size_t > >& rows )
{
    std::vector< Formula > disj;
    for ( const auto& r : rows )
        disj.push_back( row_formula( io_preds, r ) );
    return mk_or( disj );
}

std::vector< Variable > vars_of( const Formula& body, const std::vector< Formula >& io_preds )
{
    auto fs = io_preds;
    fs.push_back( body );
    return free_variables( fs );
}

bool entails( const SolverConfig& cfg, const Formula& a, const Formula& b )
{
    return check_entailment( cfg, a, b ).holds();
}

} // namespace

Guard simplify_guard( const Guard& g, const std::vector< Formula >& io_preds, const SolverConfig& cfg )
{
    Guard out = g;
    for ( auto& row : out.rows )
    {
        for ( std::size_t k = 0; k < row.size(); )
        {
            std::vector< std::size_t > rest = row;
            rest.erase( rest.begin() + static_cast< std::ptrdiff_t >( k ) );
            if ( entails( cfg, row_formula( io_preds, rest ), io_preds[ row[ k ] ] ) )
                row = rest;
            else
                ++k;
        }
    }
    // Rows implied by another kept row add nothing.
    for ( std::size_t a = 0; a < out.rows.size(); )
    {
        bool redundant = false;
        for ( std::size_t b = 0; b < out.rows.size() && !redundant; ++b )
            redundant = b != a && entails( cfg, row_formula( io_preds, out.rows[ a ] ),
                                           row_formula( io_preds, out.rows[ b ] ) );
        if ( redundant )
            out.rows.erase( out.rows.begin() + static_cast< std::ptrdiff_t >( a ) );
        else
            ++a;
    }
    out.formula = guard_formula( io_preds, out.rows );
    return out;
}

std::optional< Guard > cover_conjunction( const Formula& body, const std::vector< Formula >& io_preds,
                                          const SolverConfig& cfg )
{
    auto session = Session::open( cfg, vars_of( body, io_preds ) );
    session->assert_formula( body );
    Guard g;
    const auto sat = session->check();
    if ( sat.is_unsat() )
        return std::nullopt;
    if ( sat.is_unknown() )
    {
        g.inconclusive = true;
        g.rows = { {} };
        return g;
    }
    std::vector< std::size_t > row;
    for ( std::size_t j = 0; j < io_preds.size(); ++j )
    {
        session->push();
        session->assert_formula( mk_not( io_preds[ j ] ) );
        const auto r = session->check();
        session->pop();
        if ( r.is_unsat() )
            row.push_back( j );
        else if ( r.is_unknown() )
            g.inconclusive = true; // leaving it out stays sound
    }
    g.rows = { row };
    return simplify_guard( g, io_preds, cfg );
}

std::optional< Guard > cover_dnf( const Formula& body, const std::vector< Formula >& io_preds, std::size_t k,
                                  const CoverConfig& cfg, std::vector< std::string >* warnings )
{
    auto conj = cover_conjunction( body, io_preds, cfg.solver );
    if ( !conj || k <= 1 || io_preds.empty() )
        return conj;

    EngineOptions opts = cfg.engine;
    opts.n = k;
    opts.solver = cfg.solver;
    opts.descent = Descent::Propositional;
    opts.store_backend.reset();
    if ( opts.subsumption == Subsumption::Full )
        opts.subsumption = Subsumption::BlockingClauses;

    const TemplateShape shape{ k, io_preds.size() };
    const auto io_vars = free_variables( io_preds );
    VerificationCondition vc;
    vc.preds = io_preds;
    vc.shape = shape;
    vc.quantified = vars_of( body, io_preds );
    vc.state = io_vars;
    vc.conjuncts.push_back( mk_implies( body, symbolic_template( io_preds, shape ) ) );
    auto gate = [ &body, &io_preds, &cfg ]( const DnfInvariant& inv ) -> std::string {
        const auto e = check_entailment( cfg.solver, body, inv.to_formula( io_preds ) );
        if ( e.status == Entailment::Status::Unknown )
            return "?" + e.reason;
        return e.holds() ? "" : "body => guard";
    };
    RefinementLoop loop{ std::move( vc ), initial_store( io_preds, shape, opts, io_vars ), opts, gate };
    const auto first = loop.run();
    InferenceOutcome res;
    if ( first.kind == InferenceOutcome::Kind::Invariant )
        res = descend( loop, first.b, opts );
    else
        res.kind = first.kind;

    if ( res.kind != InferenceOutcome::Kind::Invariant || !res.invariant )
    {
        if ( warnings )
            warnings->push_back( "dnf cover " + to_string( res.kind ) + "; using the conjunction cover" );
        return conj;
    }
    Guard g;
    g.rows = res.invariant->disjuncts;
    return simplify_guard( g, io_preds, cfg.solver );
}

AbstractAutomaton build_automaton( const TransitionSystem& ts, const PredicateSet& preds, const DnfInvariant& inv,
                                   std::vector< Formula > io_preds, const CoverConfig& cfg )
{
    AbstractAutomaton aut;
    if ( io_preds.empty() )
        io_preds = harvest_io_predicates( ts );
    aut.io_preds = io_preds;
    for ( std::size_t i = 0; i < inv.size(); ++i )
    {
        aut.states.push_back( inv.disjunct( preds, i ) );
        auto s = Session::open( cfg.solver, free_variables( std::vector< Formula >{ ts.init, aut.states.back() } ) );
        s->assert_formula( ts.init );
        s->assert_formula( aut.states.back() );
        const auto r = s->check();
        if ( r.is_unknown() )
            aut.warnings.push_back( "initial-state query for q" + std::to_string( i ) + " inconclusive" );
        aut.initial.push_back( !r.is_unsat() );
    }
    for ( std::size_t i = 0; i < inv.size(); ++i )
        for ( std::size_t j = 0; j < inv.size(); ++j )
        {
            const Formula body = edge_body( ts, preds, inv, i, j );
            const auto g = cfg.mode.kind == EdgeCoverMode::Kind::Dnf
                                   ? cover_dnf( body, io_preds, cfg.mode.k, cfg, &aut.warnings )
                                   : cover_conjunction( body, io_preds, cfg.solver );
            if ( !g )
                continue;
            if ( g->inconclusive )
                aut.warnings.push_back( "edge q" + std::to_string( i ) + " -> q" + std::to_string( j ) +
                                        ": inconclusive cover query" );
            aut.edges.push_back( AutomatonEdge{ i, j, *g } );
        }
    return aut;
}

} // namespace disjinv
