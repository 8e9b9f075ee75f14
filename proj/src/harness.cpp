#include "disjinv/harness.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace disjinv
{

namespace
{

using Bits = boost::dynamic_bitset<>;

Formula region_formula( const PredicateSet& preds, std::uint32_t mask )
{
    std::vector< Formula > conj;
    for ( std::size_t j = 0; j < preds.size(); ++j )
        conj.push_back( ( mask >> j ) & 1u ? preds[ j ] : mk_not( preds[ j ] ) );
    return mk_and( conj );
}

SatResult checked( Session& s )
{
    auto r = s.check();
    if ( r.is_unknown() )
        throw SolverError( "oracle query inconclusive: " + r.reason );
    return r;
}

// Region-level abstraction of the system: feasible truth vectors, which of them meet S or
// violate the postcondition on exit, and the successor relation under C && T.
struct RegionGraph
{
    std::vector< std::uint32_t > masks;
    Bits init;
    Bits bad;
    std::vector< Bits > succ;
    std::size_t queries = 0;
};

RegionGraph region_graph( const TransitionSystem& ts, const PredicateSet& preds, const SolverConfig& cfg )
{
    RegionGraph g;
    const std::size_t m = preds.size();
    {
        auto s = Session::open( cfg, ts.state );
        std::uint32_t mask = 0;
        std::function< void( std::size_t ) > dfs = [ & ]( std::size_t j ) {
            if ( j == m )
            {
                g.masks.push_back( mask );
                return;
            }
            for ( bool v : { false, true } )
            {
                s->push();
                s->assert_formula( v ? preds[ j ] : mk_not( preds[ j ] ) );
                ++g.queries;
                if ( checked( *s ).is_sat() )
                {
                    if ( v )
                        mask |= 1u << j;
                    dfs( j + 1 );
                    mask &= ~( 1u << j );
                }
                s->pop();
            }
        };
        dfs( 0 );
    }
    const std::size_t r = g.masks.size();
    std::unordered_map< std::uint32_t, std::size_t > index;
    for ( std::size_t k = 0; k < r; ++k )
        index.emplace( g.masks[ k ], k );

    g.init.resize( r );
    g.bad.resize( r );
    {
        auto s = Session::open( cfg, ts.step_variables() );
        for ( std::size_t k = 0; k < r; ++k )
        {
            const Formula rf = region_formula( preds, g.masks[ k ] );
            s->push();
            s->assert_formula( mk_and( { ts.init, rf } ) );
            ++g.queries;
            g.init[ k ] = checked( *s ).is_sat();
            s->pop();
            if ( !ts.post.is_true() )
            {
                s->push();
                s->assert_formula( mk_and( { rf, mk_not( ts.guard ), mk_not( ts.post ) } ) );
                ++g.queries;
                g.bad[ k ] = checked( *s ).is_sat();
                s->pop();
            }
        }

        std::vector< Formula > primed_preds;
        for ( const auto& p : preds )
            primed_preds.push_back( prime( p, ts.state ) );
        g.succ.assign( r, Bits( r ) );
        for ( std::size_t k = 0; k < r; ++k )
        {
            s->push();
            s->assert_formula( mk_and( { region_formula( preds, g.masks[ k ] ), ts.guard, ts.trans } ) );
            while ( true )
            {
                ++g.queries;
                const auto res = checked( *s );
                if ( res.is_unsat() )
                    break;
                std::uint32_t next = 0;
                for ( std::size_t j = 0; j < m; ++j )
                    if ( evaluate( primed_preds[ j ], res.model ) )
                        next |= 1u << j;
                g.succ[ k ][ index.at( next ) ] = true;
                s->assert_formula( mk_not( prime( region_formula( preds, next ), ts.state ) ) );
            }
            s->pop();
        }
    }
    return g;
}

} // namespace

OracleReport brute_force_minimal( const TransitionSystem& ts, const PredicateSet& preds, std::size_t n,
                                  const StructuralOptions& structure, const SolverConfig& cfg )
{
    const std::size_t m = preds.size();
    if ( m == 0 )
        throw NoPredicates();
    if ( n == 0 || n * m > 20 )
        throw CapExceeded( "brute force is limited to n*m <= 20 (got " + std::to_string( n * m ) + ")" );

    OracleReport report;
    const RegionGraph g = region_graph( ts, preds, cfg );
    report.regions = g.masks.size();
    report.queries = g.queries;
    const std::size_t r = g.masks.size();
    const std::uint32_t row_mask = ( 1u << m ) - 1;

    std::vector< Bits > row_sets( std::size_t{ 1 } << m );
    for ( std::uint32_t row = 0; row <= row_mask; ++row )
    {
        row_sets[ row ].resize( r );
        for ( std::size_t k = 0; k < r; ++k )
            row_sets[ row ][ k ] = ( g.masks[ k ] & row ) == row;
    }
    // Numeric order of this key is the lexicographic order with predicate 0 first.
    auto key = [ m ]( std::uint32_t row ) {
        std::uint32_t k = 0;
        for ( std::size_t j = 0; j < m; ++j )
            if ( ( row >> j ) & 1u )
                k |= 1u << ( m - 1 - j );
        return k;
    };

    std::map< Bits, TemplateAssignment > classes;
    std::vector< std::uint32_t > rows( n );
    const std::uint64_t total = std::uint64_t{ 1 } << ( n * m );
    for ( std::uint64_t code = 0; code < total; ++code )
    {
        for ( std::size_t i = 0; i < n; ++i )
            rows[ i ] = static_cast< std::uint32_t >( code >> ( i * m ) ) & row_mask;
        if ( structure.symmetry )
        {
            bool sorted = true;
            for ( std::size_t i = 0; i + 1 < n && sorted; ++i )
                sorted = key( rows[ i ] ) < key( rows[ i + 1 ] );
            if ( !sorted )
                continue;
        }
        ++report.examined;

        Bits inv( r );
        bool ok = true;
        for ( std::size_t i = 0; i < n && ok; ++i )
        {
            const Bits& ci = row_sets[ rows[ i ] ];
            if ( structure.subsumption == Subsumption::BlockingClauses && ci.none() )
                ok = false;
            if ( structure.disjoint )
                for ( std::size_t k = 0; k < i && ok; ++k )
                    ok = !ci.intersects( row_sets[ rows[ k ] ] );
            inv |= ci;
        }
        if ( ok && structure.subsumption == Subsumption::Full )
            for ( std::size_t i = 0; i < n && ok; ++i )
            {
                Bits others( r );
                for ( std::size_t k = 0; k < n; ++k )
                    if ( k != i )
                        others |= row_sets[ rows[ k ] ];
                ok = !row_sets[ rows[ i ] ].is_subset_of( others );
            }
        if ( !ok || !g.init.is_subset_of( inv ) || inv.intersects( g.bad ) )
            continue;
        for ( auto k = inv.find_first(); k != Bits::npos && ok; k = inv.find_next( k ) )
            ok = g.succ[ k ].is_subset_of( inv );
        if ( !ok )
            continue;

        TemplateAssignment b{ TemplateShape{ n, m } };
        for ( std::size_t i = 0; i < n; ++i )
            for ( std::size_t j = 0; j < m; ++j )
                b.set( i, j, ( rows[ i ] >> j ) & 1u );
        report.verified.push_back( b );
        classes.emplace( inv, b );
    }

    for ( const auto& [ set, b ] : classes )
    {
        const bool minimal = std::none_of( classes.begin(), classes.end(), [ &set ]( const auto& other ) {
            return other.first.is_proper_subset_of( set );
        } );
        if ( !minimal )
            continue;
        const auto v = check_hoare( ts, instantiate_template( preds, b ), cfg );
        if ( !v.verified() )
            throw std::logic_error( "oracle survivor " + b.to_string() + " fails " + v.condition );
        report.minimal.push_back( b );
    }
    return report;
}

HoareVerdict check_hoare( const TransitionSystem& ts, const Formula& inv, const SolverConfig& cfg )
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
    HoareVerdict v;
    for ( const auto& c : checks )
    {
        auto e = check_entailment( cfg, c.hyp, c.concl );
        if ( e.holds() )
            continue;
        v.condition = c.what;
        if ( e.fails() )
        {
            v.status = HoareVerdict::Status::Failed;
            v.countermodel = std::move( e.countermodel );
        }
        else
        {
            v.status = HoareVerdict::Status::Inconclusive;
            v.reason = e.reason;
        }
        return v;
    }
    v.status = HoareVerdict::Status::Verified;
    return v;
}

HoareVerdict check_hoare( const TransitionSystem& ts, const PredicateSet& preds, const DnfInvariant& inv,
                          const SolverConfig& cfg )
{
    return check_hoare( ts, inv.to_formula( preds ), cfg );
}

bool semantically_included( const Formula& a, const Formula& b, const SolverConfig& cfg )
{
    return check_entailment( cfg, a, b ).holds();
}

bool semantically_equal( const Formula& a, const Formula& b, const SolverConfig& cfg )
{
    return semantically_included( a, b, cfg ) && semantically_included( b, a, cfg );
}

// ---------------------------------------------------------------------------
// Simulation

std::string to_string( Trace::End end )
{
    switch ( end )
    {
    case Trace::End::Complete: return "complete";
    case Trace::End::Exited: return "exited";
    case Trace::End::Stuck: return "stuck";
    }
    return "?";
}

namespace
{

class Hints
{
public:
    Hints( std::uint64_t seed, std::int64_t bound ) : _rng{ seed }, _bound{ bound } {}

    Value random_value( Sort sort )
    {
        if ( sort == Sort::Bool )
            return Value{ coin() };
        // Zero often, mostly small values, occasionally anywhere in the bound.
        std::int64_t v = 0;
        const int roll = std::uniform_int_distribution< int >( 0, 19 )( _rng );
        if ( roll >= 16 )
            v = std::uniform_int_distribution< std::int64_t >( -_bound, _bound )( _rng );
        else if ( roll >= 5 )
            v = std::uniform_int_distribution< std::int64_t >( -10, 10 )( _rng );
        if ( sort == Sort::Real && coin() )
            return Value{ Rational{ v } / 2 };
        return Value{ Rational{ v } };
    }

    Formula hint( const Variable& v )
    {
        const Value val = random_value( v.sort );
        if ( v.sort == Sort::Bool )
            return val.as_bool() ? mk_bool( v ) : mk_not( mk_bool( v ) );
        return mk_cmp( LinearExpr::of( v ), CmpOp::Eq, LinearExpr::of( val.as_rational() ) );
    }

    bool coin() { return ( _rng() & 1u ) != 0; }

    // Solves under as many hints as stay consistent: all, then `fallback`, then random halves.
    SatResult solve( Session& s, std::vector< Formula > hints, std::vector< Formula > fallback )
    {
        auto attempt = [ &s ]( const std::vector< Formula >& hs ) {
            s.push();
            for ( const auto& h : hs )
                s.assert_formula( h );
            auto r = s.check();
            s.pop();
            return r;
        };
        auto r = attempt( hints );
        if ( !r.is_unsat() )
            return r;
        if ( fallback.size() < hints.size() )
        {
            hints = std::move( fallback );
            r = attempt( hints );
            if ( !r.is_unsat() )
                return r;
        }
        while ( !hints.empty() )
        {
            std::shuffle( hints.begin(), hints.end(), _rng );
            hints.resize( hints.size() / 2 );
            r = attempt( hints );
            if ( !r.is_unsat() )
                return r;
        }
        return r;
    }

private:
    std::mt19937_64 _rng;
    std::int64_t _bound;
};

Formula within( const Variable& v, std::int64_t bound )
{
    const auto x = LinearExpr::of( v );
    return mk_and( { mk_cmp( x, CmpOp::Ge, LinearExpr::of( Rational{ -bound } ) ),
                     mk_cmp( x, CmpOp::Le, LinearExpr::of( Rational{ bound } ) ) } );
}

Formula pin( const Variable& v, const Value& val )
{
    if ( v.sort == Sort::Bool )
        return val.as_bool() ? mk_bool( v ) : mk_not( mk_bool( v ) );
    return mk_cmp( LinearExpr::of( v ), CmpOp::Eq, LinearExpr::of( val.as_rational() ) );
}

} // namespace

Trace simulate( const TransitionSystem& ts, const SimulationOptions& opts, const SolverConfig& cfg )
{
    Hints hints{ opts.seed, opts.bound };
    Trace trace;

    {
        auto s = Session::open( cfg, ts.state );
        s->assert_formula( ts.init );
        std::vector< Formula > hs;
        for ( const auto& v : ts.state )
        {
            if ( is_arithmetic( v.sort ) )
                s->assert_formula( within( v, opts.bound ) );
            hs.push_back( hints.hint( v ) );
        }
        const auto r = hints.solve( *s, hs, {} );
        if ( !r.is_sat() )
            throw SolverError( "simulation: no initial state (" + ( r.is_unsat() ? "S unsatisfiable" : r.reason ) +
                               ")" );
        Model sigma;
        for ( const auto& v : ts.state )
            sigma.emplace( v.name, r.model.at( v.name ) );
        trace.states.push_back( std::move( sigma ) );
    }

    auto s = Session::open( cfg, ts.step_variables() );
    for ( const auto& v : ts.inputs )
        if ( is_arithmetic( v.sort ) )
            s->assert_formula( within( v, opts.bound ) );
    s->assert_formula( ts.guard );
    s->assert_formula( ts.trans );

    const auto next_state = ts.primed_state();
    for ( std::size_t t = 0; t < opts.steps; ++t )
    {
        const Model& sigma = trace.states.back();
        s->push();
        for ( const auto& v : ts.state )
            s->assert_formula( pin( v, sigma.at( v.name ) ) );

        std::vector< Formula > all, soft;
        for ( const auto& v : ts.inputs )
        {
            all.push_back( hints.hint( v ) );
            soft.push_back( all.back() );
        }
        for ( const auto& v : next_state )
        {
            all.push_back( hints.hint( v ) );
            if ( v.sort == Sort::Bool )
                soft.push_back( all.back() );
        }
        const auto r = hints.solve( *s, all, soft );
        s->pop();
        if ( r.is_unknown() )
            throw SolverError( "simulation step inconclusive: " + r.reason );
        if ( r.is_unsat() )
        {
            // Distinguish a finished loop from a transition relation with no successor.
            auto g = Session::open( cfg, ts.step_variables() );
            g->assert_formula( ts.guard );
            for ( const auto& v : ts.state )
                g->assert_formula( pin( v, sigma.at( v.name ) ) );
            trace.end = g->check().is_unsat() ? Trace::End::Exited : Trace::End::Stuck;
            return trace;
        }
        Model io, next;
        for ( const auto& v : ts.inputs )
            io.emplace( v.name, r.model.at( v.name ) );
        for ( const auto& v : ts.outputs )
            io.emplace( v.name, r.model.at( v.name ) );
        for ( const auto& v : ts.state )
            next.emplace( v.name, r.model.at( primed( v ).name ) );
        trace.io.push_back( std::move( io ) );
        trace.states.push_back( std::move( next ) );
    }
    trace.end = Trace::End::Complete;
    return trace;
}

bool check_acceptance( const AbstractAutomaton& aut, const Trace& trace )
{
    if ( trace.states.empty() )
        return false;
    std::vector< bool > current( aut.size(), false );
    bool any = false;
    for ( std::size_t i = 0; i < aut.size(); ++i )
    {
        current[ i ] = aut.initial[ i ] && evaluate( aut.states[ i ], trace.states[ 0 ] );
        any = any || current[ i ];
    }
    for ( std::size_t t = 0; any && t < trace.io.size(); ++t )
    {
        std::vector< bool > next( aut.size(), false );
        any = false;
        for ( const auto& e : aut.edges )
            if ( current[ e.from ] && !next[ e.to ] && evaluate( e.guard.formula, trace.io[ t ] ) &&
                 evaluate( aut.states[ e.to ], trace.states[ t + 1 ] ) )
            {
                next[ e.to ] = true;
                any = true;
            }
        current = std::move( next );
    }
    return any;
}

} // namespace disjinv
