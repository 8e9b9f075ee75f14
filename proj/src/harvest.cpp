#include "disjinv/frontend.hpp"

#include <algorithm>
#include <functional>

namespace disjinv
{

namespace
{

void atoms_of( const Formula& f, std::vector< Formula >& out )
{
    switch ( f.kind() )
    {
    case Formula::Kind::Var:
    case Formula::Kind::Atom: out.push_back( f ); break;
    case Formula::Kind::True:
    case Formula::Kind::False: break;
    default:
        for ( const auto& k : f.children() )
            atoms_of( k, out );
    }
}

void add_unique( std::vector< Formula >& set, const Formula& f )
{
    if ( std::find( set.begin(), set.end(), f ) == set.end() )
        set.push_back( f );
}

// e op c for the five canonical comparisons.
void add_family( std::vector< Formula >& set, const Atom& a )
{
    for ( CmpOp op : { CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ge, CmpOp::Gt } )
        add_unique( set, mk_atom( Atom{ a.terms, op, a.rhs } ) );
}

// Keeps atoms whose variables all satisfy `keep` (after `rename`), closing under families.
std::vector< Formula > harvest( const std::vector< Formula >& sources, HarvestOptions opts,
                                const std::function< bool( const Variable& ) >& keep, const Binding& rename )
{
    std::vector< Formula > out;
    for ( const auto& src : sources )
    {
        std::vector< Formula > atoms;
        atoms_of( src, atoms );
        for ( const auto& raw : atoms )
        {
            const auto vars = free_variables( raw );
            if ( vars.empty() || !std::all_of( vars.begin(), vars.end(), keep ) )
                continue;
            const Formula atom = rename.empty() ? raw : substitute( raw, rename );
            if ( atom.kind() == Formula::Kind::Var )
            {
                add_unique( out, atom );
                if ( opts.closure )
                    add_unique( out, mk_not( atom ) );
                continue;
            }
            if ( atom.kind() != Formula::Kind::Atom || atom.atom().is_ground() )
                continue; // x' = x + 1 collapses once primes are stripped
            if ( opts.closure )
                add_family( out, atom.atom() );
            else
                add_unique( out, atom );
        }
    }
    return out;
}

} // namespace

PredicateSet harvest_predicates( const TransitionSystem& ts, HarvestOptions opts )
{
    Binding unprime;
    for ( const auto& v : ts.state )
        unprime.emplace( primed( v ).name, v );
    auto keep = [ & ]( const Variable& v ) { return v.kind == VarKind::State || v.kind == VarKind::Primed; };
    return harvest( { ts.init, ts.guard, ts.trans, ts.post }, opts, keep, unprime );
}

std::vector< Formula > harvest_io_predicates( const TransitionSystem& ts, HarvestOptions opts )
{
    auto keep = [ & ]( const Variable& v ) { return v.kind == VarKind::Input || v.kind == VarKind::Output; };
    return harvest( { ts.guard, ts.trans }, opts, keep, {} );
}

} // namespace disjinv
