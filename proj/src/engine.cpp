#include "disjinv/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

namespace disjinv
{

std::string to_string( Subsumption s )
{
    switch ( s )
    {
    case Subsumption::Off: return "off";
    case Subsumption::BlockingClauses: return "blocking";
    case Subsumption::Full: return "full";
    }
    return "?";
}

std::string to_string( Descent d ) { return d == Descent::Propositional ? "prop" : "semantic"; }

std::string to_string( Minimality m )
{
    switch ( m )
    {
    case Minimality::NotMinimized: return "not-minimized";
    case Minimality::Minimal: return "minimal";
    case Minimality::Unknown: return "unknown";
    }
    return "?";
}

std::string to_string( InferenceOutcome::Kind k )
{
    switch ( k )
    {
    case InferenceOutcome::Kind::Invariant: return "invariant";
    case InferenceOutcome::Kind::NoSolution: return "no-solution";
    case InferenceOutcome::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// VC and initial store

VerificationCondition build_vc( const TransitionSystem& ts, const PredicateSet& preds, TemplateShape shape,
                                std::optional< VcPart > skip )
{
    if ( preds.empty() )
        throw NoPredicates();
    if ( shape.m != preds.size() )
        throw DimensionError( "template has " + std::to_string( shape.m ) + " columns for " +
                              std::to_string( preds.size() ) + " predicates" );
    VerificationCondition vc;
    vc.preds = preds;
    vc.shape = shape;
    vc.quantified = ts.step_variables();
    vc.state = ts.state;

    const Formula tmpl = symbolic_template( preds, shape );
    if ( skip != VcPart::Init )
        vc.conjuncts.push_back( mk_implies( ts.init, tmpl ) );
    if ( skip != VcPart::Consecution )
        vc.conjuncts.push_back( mk_implies( mk_and( { tmpl, ts.guard, ts.trans } ), prime( tmpl, ts.state ) ) );
    if ( skip != VcPart::Post && !ts.post.is_true() )
        vc.conjuncts.push_back( mk_implies( mk_and( { tmpl, mk_not( ts.guard ) } ), ts.post ) );
    return vc;
}

std::vector< Formula > disjointness_constraints( const PredicateSet& preds, TemplateShape shape )
{
    std::vector< Formula > out;
    for ( std::size_t i = 0; i < shape.n; ++i )
        for ( std::size_t j = i + 1; j < shape.n; ++j )
            out.push_back(
                    mk_or( { mk_not( symbolic_disjunct( preds, i ) ), mk_not( symbolic_disjunct( preds, j ) ) } ) );
    return out;
}

BlockingSubsets blocking_subsets( const PredicateSet& preds, std::size_t cap, std::size_t budget,
                                  const SolverConfig& cfg )
{
    BlockingSubsets out;
    if ( preds.empty() || cap == 0 )
        return out;
    auto session = Session::open( cfg, free_variables( preds ) );

    auto contains_known = [ & ]( const std::vector< std::size_t >& s ) {
        return std::any_of( out.subsets.begin(), out.subsets.end(), [ & ]( const auto& u ) {
            return std::includes( s.begin(), s.end(), u.begin(), u.end() );
        } );
    };

    std::vector< std::size_t > subset;
    std::function< bool( std::size_t, std::size_t ) > visit = [ & ]( std::size_t from, std::size_t size ) {
        if ( subset.size() == size )
        {
            if ( contains_known( subset ) )
                return true;
            if ( out.queries >= budget )
            {
                out.budget_exceeded = true;
                return false;
            }
            ++out.queries;
            std::vector< Formula > conj;
            for ( auto j : subset )
                conj.push_back( preds[ j ] );
            session->push();
            session->assert_formula( mk_and( conj ) );
            const auto res = session->check();
            session->pop();
            if ( res.is_unsat() )
                out.subsets.push_back( subset );
            else if ( res.is_unknown() )
                out.unknown = true;
            return true;
        }
        for ( std::size_t j = from; j < preds.size(); ++j )
        {
            subset.push_back( j );
            const bool go_on = visit( j + 1, size );
            subset.pop_back();
            if ( !go_on )
                return false;
        }
        return true;
    };
    for ( std::size_t size = 1; size <= std::min( cap, preds.size() ); ++size )
        if ( !visit( 0, size ) )
            break;
    return out;
}

Backend store_backend( const EngineOptions& opts )
{
    const bool needs_theory = opts.subsumption == Subsumption::Full || opts.descent == Descent::SemanticWitness;
    if ( !opts.store_backend )
        return needs_theory ? Backend::ExternalSmt : Backend::InternalProp;
    if ( needs_theory && *opts.store_backend == Backend::InternalProp )
        throw InvalidOptions( "full subsumption and semantic descent need an SMT-backed constraint store" );
    return *opts.store_backend;
}

namespace
{

// C_i with the state renamed to the auxiliary copy `tag`.
Formula disjunct_copy( const PredicateSet& preds, std::size_t i, const std::vector< Variable >& state,
                       const std::string& tag )
{
    return copy_state( symbolic_disjunct( preds, i ), state, tag );
}

std::vector< Variable > copies( const std::vector< Variable >& state, const std::string& tag )
{
    std::vector< Variable > out;
    for ( const auto& v : state )
        out.push_back( state_copy( v, tag ) );
    return out;
}

} // namespace

ConstraintStore initial_store( const PredicateSet& preds, TemplateShape shape, const EngineOptions& opts,
                               const std::vector< Variable >& state )
{
    ConstraintStore store;
    store.shape = shape;
    if ( opts.symmetry && shape.n > 1 )
        store.constraints.push_back( lex_order_constraints( shape ) );

    const bool theory_store = store_backend( opts ) == Backend::ExternalSmt;
    if ( opts.subsumption == Subsumption::BlockingClauses )
    {
        const auto bs = blocking_subsets( preds, opts.blocking_cap, opts.blocking_budget, opts.solver );
        for ( const auto& subset : bs.subsets )
            for ( std::size_t i = 0; i < shape.n; ++i )
            {
                std::vector< Formula > lits;
                for ( auto j : subset )
                    lits.push_back( mk_not( mk_bool( template_var( i, j ) ) ) );
                store.constraints.push_back( mk_or( lits ) );
                ++store.blocking_clauses;
            }
        if ( bs.unknown )
            store.warnings.push_back( "some blocking-clause queries were inconclusive and skipped" );
        if ( bs.budget_exceeded )
        {
            if ( theory_store )
            {
                store.warnings.push_back( "blocking-clause budget exceeded; using per-disjunct satisfiability" );
                for ( std::size_t i = 0; i < shape.n; ++i )
                {
                    const std::string tag = "sat" + std::to_string( i + 1 );
                    store.constraints.push_back( disjunct_copy( preds, i, state, tag ) );
                    for ( auto& v : copies( state, tag ) )
                        store.aux.push_back( v );
                }
            }
            else
                store.warnings.push_back(
                        "blocking-clause budget exceeded; empty disjuncts are only partially excluded" );
        }
    }
    else if ( opts.subsumption == Subsumption::Full )
    {
        // One witness per disjunct: a state in C_i0 outside every other disjunct.
        for ( std::size_t i0 = 0; i0 < shape.n; ++i0 )
        {
            const std::string tag = "nsub" + std::to_string( i0 + 1 );
            std::vector< Formula > conj{ disjunct_copy( preds, i0, state, tag ) };
            for ( std::size_t i = 0; i < shape.n; ++i )
                if ( i != i0 )
                    conj.push_back( mk_not( disjunct_copy( preds, i, state, tag ) ) );
            store.constraints.push_back( mk_and( conj ) );
            for ( auto& v : copies( state, tag ) )
                store.aux.push_back( v );
        }
    }
    return store;
}

// ---------------------------------------------------------------------------
// Refinement loop

namespace
{

SolverConfig theory_config( const EngineOptions& opts )
{
    SolverConfig cfg = opts.solver;
    cfg.backend = Backend::ExternalSmt;
    if ( opts.seed )
        cfg.seed = opts.seed;
    return cfg;
}

} // namespace

RefinementLoop::RefinementLoop( VerificationCondition vc, ConstraintStore store, const EngineOptions& opts,
                                Gate gate )
        : _vc{ std::move( vc ) }, _store{ std::move( store ) }, _opts{ opts }, _gate{ std::move( gate ) }
{
    SolverConfig hcfg = theory_config( opts );
    hcfg.backend = store_backend( opts );
    hcfg.phase = opts.store_phase;
    if ( hcfg.backend == Backend::ExternalSmt )
    {
        // Fix the logic now: witness copies declared later must fit it.
        auto sorts = _vc.state;
        sorts.insert( sorts.end(), _vc.quantified.begin(), _vc.quantified.end() );
        hcfg.logic = resolve_logic( hcfg.logic, sorts );
    }
    auto vars = template_vars( _vc.shape );
    vars.insert( vars.end(), _store.aux.begin(), _store.aux.end() );
    _h = Session::open( hcfg, vars );
    for ( const auto& c : _store.constraints )
        _h->assert_formula( c );
    _theory = Session::open( theory_config( opts ), _vc.quantified );
}

RefinementLoop::~RefinementLoop() = default;

std::size_t RefinementLoop::iteration_bound() const
{
    const std::size_t bits = _vc.shape.size();
    return bits >= 20 ? std::size_t{ 1 } << 20 : std::size_t{ 1 } << bits;
}

void RefinementLoop::add_vc_conjunct( const Formula& f ) { _vc.conjuncts.push_back( f ); }

void RefinementLoop::add_store_constraint( const Formula& f, const std::vector< Variable >& aux )
{
    for ( const auto& v : aux )
    {
        _h->declare( v );
        _store.aux.push_back( v );
    }
    _h->assert_formula( f );
    _store.constraints.push_back( f );
}

void RefinementLoop::require_below( const Formula& prev_formula, bool strict_witness )
{
    const Formula tmpl = symbolic_template( _vc.preds, _vc.shape );
    add_vc_conjunct( mk_implies( tmpl, prev_formula ) );
    if ( strict_witness )
    {
        const std::string tag = "wit" + std::to_string( ++_witnesses );
        add_store_constraint( mk_and( { copy_state( prev_formula, _vc.state, tag ),
                                        mk_not( copy_state( tmpl, _vc.state, tag ) ) } ),
                              copies( _vc.state, tag ) );
    }
}

void RefinementLoop::require_strictly_below( const TemplateAssignment& prev, const Formula& prev_formula )
{
    const bool semantic = _opts.descent == Descent::SemanticWitness;
    require_below( prev_formula, semantic );
    if ( !semantic )
    {
        // Some b_ij raised above B_prev.
        std::vector< Formula > raised;
        for ( std::size_t i = 0; i < _vc.shape.n; ++i )
            for ( std::size_t j = 0; j < _vc.shape.m; ++j )
                if ( !prev.get( i, j ) )
                    raised.push_back( mk_bool( template_var( i, j ) ) );
        add_store_constraint( mk_or( raised ) );
    }
}

RefinementLoop::Result RefinementLoop::run()
{
    const std::size_t bound = iteration_bound();
    const std::size_t limit = _opts.max_iterations ? _opts.max_iterations : bound;
    std::size_t local = 0;
    while ( true )
    {
        if ( local >= limit )
            return { InferenceOutcome::Kind::Inconclusive, {}, "iteration limit reached" };
        const auto h = _h->check();
        if ( h.is_unknown() )
            return { InferenceOutcome::Kind::Inconclusive, {}, "constraint store: " + h.reason };
        if ( h.is_unsat() )
            return { InferenceOutcome::Kind::NoSolution, {}, "no solution in the restricted search space" };

        const TemplateAssignment b = assignment_from_model( _vc.shape, h.model );
        ++local;
        ++_store.iterations;
        if ( _store.iterations > bound )
            throw std::logic_error( "refinement exceeded the 2^(n*m) iteration bound" );
        if ( _opts.on_candidate )
            _opts.on_candidate( b );

        const Formula f = _vc.formula();
        _theory->push();
        _theory->assert_formula( mk_not( substitute( f, template_binding( b ) ) ) );
        const auto cex = _theory->check();
        _theory->pop();
        if ( cex.is_unknown() )
            return { InferenceOutcome::Kind::Inconclusive, b, "counterexample query: " + cex.reason };
        if ( cex.is_unsat() )
        {
            const std::string verdict = _gate( DnfInvariant::from_assignment( b ) );
            if ( verdict.empty() )
                return { InferenceOutcome::Kind::Invariant, b, {} };
            if ( verdict.front() == '?' )
                return { InferenceOutcome::Kind::Inconclusive, b, "soundness gate: " + verdict.substr( 1 ) };
            throw SoundnessGateFailure( "accepted candidate " + b.to_string() + " fails " + verdict );
        }

        Model sigma;
        for ( const auto& v : _vc.quantified )
            sigma.emplace( v.name, cex.model.at( v.name ) );
        const Formula learned = simplify( substitute( f, sigma ) );
        if ( evaluate( learned, template_model( b ) ) )
            throw std::logic_error( "counterexample does not refute the candidate" );
        _store.counterexamples.push_back( std::move( sigma ) );
        _h->assert_formula( learned );
        _store.constraints.push_back( learned );
    }
}

void RefinementLoop::collect( EngineStats& stats ) const
{
    stats.iterations = _store.iterations;
    stats.counterexamples = _store.counterexamples.size();
    stats.blocking_clauses = _store.blocking_clauses;
    stats.store_queries = _h->queries();
    stats.theory_queries = _theory->queries();
    stats.solver_seconds = _h->solver_seconds() + _theory->solver_seconds();
}

// ---------------------------------------------------------------------------
// Drivers

std::string hoare_gate( const TransitionSystem& ts, const Formula& inv, const SolverConfig& cfg )
{
    struct Check
    {
        const char* what;
        Formula hyp, concl;
    };
    const Check checks[] = {
        { "initiation", ts.init, inv },
        { "consecution", mk_and( { inv, ts.guard, ts.trans } ), prime( inv, ts.state ) },
        { "postcondition", mk_and( { inv, mk_not( ts.guard ) } ), ts.post },
    };
    SolverConfig fresh = cfg;
    fresh.backend = Backend::ExternalSmt;
    for ( const auto& c : checks )
    {
        const auto e = check_entailment( fresh, c.hyp, c.concl );
        if ( e.status == Entailment::Status::Unknown )
            return "?" + std::string{ c.what } + ": " + e.reason;
        if ( e.fails() )
            return c.what;
    }
    return {};
}

namespace
{

using Clock = std::chrono::steady_clock;

double since( Clock::time_point t0 ) { return std::chrono::duration< double >( Clock::now() - t0 ).count(); }

RefinementLoop make_loop( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts,
                          std::size_t n )
{
    const TemplateShape shape{ n, preds.size() };
    auto vc = build_vc( ts, preds, shape, opts.skip_conjunct );
    if ( opts.disjoint )
        for ( auto& d : disjointness_constraints( preds, shape ) )
            vc.conjuncts.push_back( d );
    auto store = initial_store( preds, shape, opts, ts.state );
    auto gate = [ &ts, preds, cfg = opts.solver ]( const DnfInvariant& inv ) {
        return hoare_gate( ts, inv.to_formula( preds ), cfg );
    };
    return RefinementLoop{ std::move( vc ), std::move( store ), opts, gate };
}

void check_options( const EngineOptions& opts )
{
    if ( opts.n == 0 )
        throw InvalidOptions( "n must be at least 1" );
    if ( opts.grow && opts.max_n < opts.n )
        throw InvalidOptions( "max n is below n" );
    (void)store_backend( opts );
}

InferenceOutcome finish( RefinementLoop& loop, InferenceOutcome out, Clock::time_point t0 )
{
    loop.collect( out.stats );
    out.stats.wall_seconds = since( t0 );
    out.shape = loop.vc().shape;
    out.stats.final_n = out.shape.n;
    for ( const auto& w : loop.store().warnings )
        if ( std::find( out.warnings.begin(), out.warnings.end(), w ) == out.warnings.end() )
            out.warnings.push_back( w );
    return out;
}

} // namespace

InferenceOutcome descend( RefinementLoop& loop, const TemplateAssignment& start, const EngineOptions& )
{
    InferenceOutcome out;
    out.kind = InferenceOutcome::Kind::Invariant;
    out.invariant = DnfInvariant::from_assignment( start );
    std::set< TemplateAssignment > seen{ start };
    TemplateAssignment prev = start;
    const auto& preds = loop.vc().preds;
    while ( true )
    {
        loop.require_strictly_below( prev, instantiate_template( preds, prev ) );
        const auto r = loop.run();
        if ( r.kind == InferenceOutcome::Kind::NoSolution )
        {
            out.stats.minimality = Minimality::Minimal;
            return out;
        }
        if ( r.kind == InferenceOutcome::Kind::Inconclusive )
        {
            out.kind = InferenceOutcome::Kind::Inconclusive;
            out.reason = r.reason;
            out.stats.minimality = Minimality::Unknown;
            return out;
        }
        if ( !seen.insert( r.b ).second )
            throw std::logic_error( "descent revisited " + r.b.to_string() );
        ++out.stats.descent_rounds;
        prev = r.b;
        out.invariant = DnfInvariant::from_assignment( prev );
    }
}

namespace
{

InferenceOutcome run_fixed( RefinementLoop& loop, const EngineOptions& opts )
{
    InferenceOutcome out;
    const auto r = loop.run();
    out.kind = r.kind;
    out.reason = r.reason;
    if ( r.kind != InferenceOutcome::Kind::Invariant )
        return out;
    out.invariant = DnfInvariant::from_assignment( r.b );
    if ( !opts.minimize )
        return out;
    return descend( loop, r.b, opts );
}

} // namespace

InferenceOutcome infer( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts )
{
    check_options( opts );
    if ( opts.grow )
        return grow_n( ts, preds, opts );
    const auto t0 = Clock::now();
    auto loop = make_loop( ts, preds, opts, opts.n );
    return finish( loop, run_fixed( loop, opts ), t0 );
}

InferenceOutcome minimize( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts,
                           const DnfInvariant& start )
{
    check_options( opts );
    const auto t0 = Clock::now();
    const std::size_t n = std::max( opts.n, start.size() );
    auto loop = make_loop( ts, preds, opts, n );
    const auto b = start.to_assignment( loop.vc().shape );
    return finish( loop, descend( loop, b, opts ), t0 );
}

InferenceOutcome grow_n( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts )
{
    check_options( opts );
    const auto t0 = Clock::now();
    EngineOptions o = opts;
    o.minimize = true;
    o.grow = false;

    InferenceOutcome best;
    best.kind = InferenceOutcome::Kind::NoSolution;
    EngineStats total;
    auto accumulate = [ & ]( const InferenceOutcome& r ) {
        total.iterations += r.stats.iterations;
        total.counterexamples += r.stats.counterexamples;
        total.descent_rounds += r.stats.descent_rounds;
        total.theory_queries += r.stats.theory_queries;
        total.store_queries += r.stats.store_queries;
        total.solver_seconds += r.stats.solver_seconds;
        total.blocking_clauses = std::max( total.blocking_clauses, r.stats.blocking_clauses );
    };
    auto done = [ & ]( InferenceOutcome out ) {
        const auto minimality = out.stats.minimality;
        const auto final_n = out.stats.final_n;
        out.stats = total;
        out.stats.minimality = minimality;
        out.stats.final_n = final_n;
        out.stats.wall_seconds = since( t0 );
        return out;
    };
    auto timed_out = [ & ] { return opts.grow_timeout > 0 && since( t0 ) >= opts.grow_timeout; };

    for ( std::size_t n = opts.n; n <= opts.max_n; ++n )
    {
        if ( timed_out() )
        {
            best.warnings.push_back( "grow timeout reached at n=" + std::to_string( n ) );
            return done( best );
        }
        const auto t1 = Clock::now();
        auto loop = make_loop( ts, preds, o, n );
        const bool have_prev = best.found();
        if ( have_prev )
            loop.require_below( best.invariant->to_formula( preds ), o.descent == Descent::SemanticWitness );
        auto r = finish( loop, run_fixed( loop, o ), t1 );
        accumulate( r );
        for ( const auto& w : r.warnings )
            if ( std::find( best.warnings.begin(), best.warnings.end(), w ) == best.warnings.end() )
                best.warnings.push_back( w );

        if ( r.kind == InferenceOutcome::Kind::Inconclusive )
        {
            if ( have_prev )
            {
                best.kind = InferenceOutcome::Kind::Inconclusive;
                best.reason = "n=" + std::to_string( n ) + ": " + r.reason;
                return done( best );
            }
            r.warnings = best.warnings;
            return done( r );
        }
        if ( r.kind == InferenceOutcome::Kind::NoSolution )
        {
            if ( have_prev )
                return done( best ); // nothing strictly below I_{n-1}
            continue;                // no invariant yet; try a wider template
        }
        if ( have_prev && o.descent == Descent::Propositional )
        {
            // Inclusion holds by construction; equal sets mean no strict improvement.
            const auto back = check_entailment( o.solver, best.invariant->to_formula( preds ),
                                                r.invariant->to_formula( preds ) );
            if ( back.holds() )
                return done( best );
        }
        const auto warnings = best.warnings;
        best = r;
        best.warnings = warnings;
    }
    return done( best );
}

} // namespace disjinv
