#include "disjinv/sat.hpp"

#include <algorithm>
#include <cassert>

namespace disjinv::sat
{

std::uint32_t Solver::new_var()
{
    const auto v = static_cast< std::uint32_t >( _assigns.size() );
    _assigns.push_back( kUndef );
    _level.push_back( 0 );
    _reason.push_back( kNoReason );
    const bool phase = _initial_phase == Phase::Random ? ( next_random() & 1u ) != 0 : _initial_phase == Phase::True;
    _phase.push_back( static_cast< char >( phase ) );
    _activity.push_back( 0.0 );
    _seen.push_back( 0 );
    _watches.emplace_back();
    _watches.emplace_back();
    return v;
}

std::uint64_t Solver::next_random()
{
    // xorshift64
    _rng ^= _rng << 13;
    _rng ^= _rng >> 7;
    _rng ^= _rng << 17;
    return _rng;
}

bool Solver::add_clause( std::vector< Lit > lits )
{
    if ( !_ok )
        return false;
    assert( decision_level() == 0 );

    std::sort( lits.begin(), lits.end() );
    std::vector< Lit > kept;
    for ( std::size_t k = 0; k < lits.size(); ++k )
    {
        const Lit p = lits[ k ];
        if ( value( p ) == 1 || ( k + 1 < lits.size() && lits[ k + 1 ] == ~p ) )
            return true; // satisfied or tautology
        if ( value( p ) == 0 || ( !kept.empty() && kept.back() == p ) )
            continue;
        kept.push_back( p );
    }

    if ( kept.empty() )
        return _ok = false;
    if ( kept.size() == 1 )
    {
        enqueue( kept[ 0 ], kNoReason );
        return _ok = ( propagate() == kNoReason );
    }
    _clauses.push_back( Clause{ std::move( kept ), false } );
    attach( static_cast< int >( _clauses.size() - 1 ) );
    return true;
}

void Solver::attach( int ci )
{
    const auto& c = _clauses[ ci ].lits;
    _watches[ c[ 0 ].x ].push_back( ci );
    _watches[ c[ 1 ].x ].push_back( ci );
}

void Solver::enqueue( Lit p, int reason )
{
    _assigns[ p.var() ] = p.negative() ? 0 : 1;
    _level[ p.var() ] = decision_level();
    _reason[ p.var() ] = reason;
    _trail.push_back( p );
}

// Returns the index of a conflicting clause, or kNoReason.
int Solver::propagate()
{
    while ( _qhead < _trail.size() )
    {
        const Lit false_lit = ~_trail[ _qhead++ ];
        auto& ws = _watches[ false_lit.x ];
        std::size_t keep = 0;
        for ( std::size_t k = 0; k < ws.size(); ++k )
        {
            const int ci = ws[ k ];
            auto& c = _clauses[ ci ].lits;
            if ( c[ 0 ] == false_lit )
                std::swap( c[ 0 ], c[ 1 ] );

            if ( value( c[ 0 ] ) == 1 )
            {
                ws[ keep++ ] = ci;
                continue;
            }

            bool moved = false;
            for ( std::size_t t = 2; t < c.size(); ++t )
                if ( value( c[ t ] ) != 0 )
                {
                    std::swap( c[ 1 ], c[ t ] );
                    _watches[ c[ 1 ].x ].push_back( ci );
                    moved = true;
                    break;
                }
            if ( moved )
                continue;

            ws[ keep++ ] = ci;
            if ( value( c[ 0 ] ) == 0 )
            {
                for ( std::size_t r = k + 1; r < ws.size(); ++r )
                    ws[ keep++ ] = ws[ r ];
                ws.resize( keep );
                _qhead = _trail.size();
                return ci;
            }
            enqueue( c[ 0 ], ci );
        }
        ws.resize( keep );
    }
    return kNoReason;
}

void Solver::bump( std::uint32_t v )
{
    _activity[ v ] += _var_inc;
    if ( _activity[ v ] > 1e100 )
    {
        for ( auto& a : _activity )
            a *= 1e-100;
        _var_inc *= 1e-100;
    }
}

void Solver::analyze( int conflict, std::vector< Lit >& learnt, std::size_t& backtrack_level )
{
    learnt.clear();
    learnt.push_back( Lit{} ); // placeholder for the asserting literal
    int pending = 0;
    Lit p{};
    bool have_p = false;
    std::size_t index = _trail.size();

    do
    {
        const auto& c = _clauses[ conflict ].lits;
        for ( std::size_t k = have_p ? 1 : 0; k < c.size(); ++k )
        {
            const Lit q = c[ k ];
            const auto v = q.var();
            if ( _seen[ v ] || _level[ v ] == 0 )
                continue;
            _seen[ v ] = 1;
            bump( v );
            if ( _level[ v ] >= decision_level() )
                ++pending;
            else
                learnt.push_back( q );
        }
        while ( !_seen[ _trail[ --index ].var() ] )
            ;
        p = _trail[ index ];
        have_p = true;
        conflict = _reason[ p.var() ];
        _seen[ p.var() ] = 0;
        --pending;
        // Reason clauses keep their implied literal at position 0.
    } while ( pending > 0 );
    learnt[ 0 ] = ~p;

    backtrack_level = 0;
    std::size_t max_k = 1;
    for ( std::size_t k = 1; k < learnt.size(); ++k )
        if ( _level[ learnt[ k ].var() ] > backtrack_level )
        {
            backtrack_level = _level[ learnt[ k ].var() ];
            max_k = k;
        }
    if ( learnt.size() > 1 )
        std::swap( learnt[ 1 ], learnt[ max_k ] );
    for ( std::size_t k = 1; k < learnt.size(); ++k )
        _seen[ learnt[ k ].var() ] = 0;
}

void Solver::cancel_until( std::size_t level )
{
    if ( decision_level() <= level )
        return;
    for ( std::size_t k = _trail.size(); k-- > _trail_lim[ level ]; )
    {
        const auto v = _trail[ k ].var();
        _phase[ v ] = static_cast< char >( _assigns[ v ] );
        _assigns[ v ] = kUndef;
        _reason[ v ] = kNoReason;
    }
    _trail.resize( _trail_lim[ level ] );
    _trail_lim.resize( level );
    _qhead = _trail.size();
}

int Solver::pick_branch_var()
{
    int best = -1;
    for ( std::size_t v = 0; v < _assigns.size(); ++v )
        if ( _assigns[ v ] == kUndef && ( best < 0 || _activity[ v ] > _activity[ best ] ) )
            best = static_cast< int >( v );
    return best;
}

Result Solver::solve( std::span< const Lit > assumptions )
{
    if ( !_ok )
        return Result::Unsat;
    if ( propagate() != kNoReason )
    {
        _ok = false;
        return Result::Unsat;
    }

    std::vector< Lit > learnt;
    while ( true )
    {
        const int conflict = propagate();
        if ( conflict != kNoReason )
        {
            ++_conflicts;
            if ( decision_level() == 0 )
            {
                _ok = false;
                return Result::Unsat;
            }
            std::size_t backtrack_level = 0;
            analyze( conflict, learnt, backtrack_level );
            cancel_until( backtrack_level );
            if ( learnt.size() == 1 )
                enqueue( learnt[ 0 ], kNoReason );
            else
            {
                _clauses.push_back( Clause{ learnt, true } );
                const int ci = static_cast< int >( _clauses.size() - 1 );
                attach( ci );
                enqueue( learnt[ 0 ], ci );
            }
            _var_inc /= 0.95;
            continue;
        }

        Lit next{};
        bool have_next = false;
        while ( decision_level() < assumptions.size() )
        {
            const Lit a = assumptions[ decision_level() ];
            if ( value( a ) == 1 )
                _trail_lim.push_back( _trail.size() );
            else if ( value( a ) == 0 )
            {
                cancel_until( 0 );
                return Result::Unsat;
            }
            else
            {
                next = a;
                have_next = true;
                break;
            }
        }

        if ( !have_next )
        {
            const int v = pick_branch_var();
            if ( v < 0 )
            {
                _model.assign( _assigns.size(), false );
                for ( std::size_t k = 0; k < _assigns.size(); ++k )
                    _model[ k ] = _assigns[ k ] == 1;
                cancel_until( 0 );
                return Result::Sat;
            }
            next = _phase[ v ] ? Lit::pos( static_cast< std::uint32_t >( v ) )
                               : Lit::neg( static_cast< std::uint32_t >( v ) );
        }
        _trail_lim.push_back( _trail.size() );
        enqueue( next, kNoReason );
    }
}

} // namespace disjinv::sat
