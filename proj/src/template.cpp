#include "disjinv/template.hpp"

#include <algorithm>
#include <sstream>

namespace disjinv
{

TemplateAssignment::TemplateAssignment( TemplateShape shape, const std::vector< std::vector< bool > >& rows )
        : TemplateAssignment( shape )
{
    if ( rows.size() != shape.n )
        throw DimensionError( "assignment has " + std::to_string( rows.size() ) + " rows, expected " +
                              std::to_string( shape.n ) );
    for ( std::size_t i = 0; i < shape.n; ++i )
    {
        if ( rows[ i ].size() != shape.m )
            throw DimensionError( "assignment row has wrong width" );
        for ( std::size_t j = 0; j < shape.m; ++j )
            set( i, j, rows[ i ][ j ] );
    }
}

std::uint64_t TemplateAssignment::row_key( std::size_t i ) const
{
    std::uint64_t key = 0;
    for ( std::size_t j = 0; j < _shape.m; ++j )
        key = ( key << 1 ) | ( get( i, j ) ? 1u : 0u );
    return key;
}

std::string TemplateAssignment::to_string() const
{
    std::ostringstream os;
    for ( std::size_t i = 0; i < _shape.n; ++i )
    {
        if ( i )
            os << "|";
        for ( std::size_t j = 0; j < _shape.m; ++j )
            os << ( get( i, j ) ? '1' : '0' );
    }
    return os.str();
}

DnfInvariant DnfInvariant::from_assignment( const TemplateAssignment& b )
{
    DnfInvariant inv;
    for ( std::size_t i = 0; i < b.shape().n; ++i )
    {
        auto& row = inv.disjuncts.emplace_back();
        for ( std::size_t j = 0; j < b.shape().m; ++j )
            if ( b.get( i, j ) )
                row.push_back( j );
    }
    return inv;
}

TemplateAssignment DnfInvariant::to_assignment( TemplateShape shape ) const
{
    if ( disjuncts.empty() || disjuncts.size() > shape.n )
        throw DimensionError( "invariant with " + std::to_string( disjuncts.size() ) + " disjuncts does not fit n=" +
                              std::to_string( shape.n ) );
    TemplateAssignment b{ shape };
    for ( std::size_t i = 0; i < shape.n; ++i )
        for ( auto j : disjuncts[ std::min( i, disjuncts.size() - 1 ) ] )
        {
            if ( j >= shape.m )
                throw DimensionError( "predicate index out of range" );
            b.set( i, j, true );
        }
    return b;
}

Formula DnfInvariant::disjunct( const PredicateSet& preds, std::size_t i ) const
{
    std::vector< Formula > conj;
    for ( auto j : disjuncts.at( i ) )
    {
        if ( j >= preds.size() )
            throw DimensionError( "predicate index out of range" );
        conj.push_back( preds[ j ] );
    }
    return mk_and( std::move( conj ) );
}

Formula DnfInvariant::to_formula( const PredicateSet& preds ) const
{
    std::vector< Formula > disj;
    for ( std::size_t i = 0; i < disjuncts.size(); ++i )
        disj.push_back( disjunct( preds, i ) );
    return mk_or( std::move( disj ) );
}

Variable template_var( std::size_t i, std::size_t j )
{
    return Variable{ "b!" + std::to_string( i + 1 ) + "!" + std::to_string( j + 1 ), Sort::Bool, VarKind::TemplateBool };
}

std::vector< Variable > template_vars( TemplateShape shape )
{
    std::vector< Variable > out;
    out.reserve( shape.size() );
    for ( std::size_t i = 0; i < shape.n; ++i )
        for ( std::size_t j = 0; j < shape.m; ++j )
            out.push_back( template_var( i, j ) );
    return out;
}

Binding template_binding( const TemplateAssignment& b )
{
    Binding out;
    for ( std::size_t i = 0; i < b.shape().n; ++i )
        for ( std::size_t j = 0; j < b.shape().m; ++j )
            out.emplace( template_var( i, j ).name, Value{ b.get( i, j ) } );
    return out;
}

Model template_model( const TemplateAssignment& b )
{
    Model out;
    for ( std::size_t i = 0; i < b.shape().n; ++i )
        for ( std::size_t j = 0; j < b.shape().m; ++j )
            out.emplace( template_var( i, j ).name, Value{ b.get( i, j ) } );
    return out;
}

TemplateAssignment assignment_from_model( TemplateShape shape, const Model& model )
{
    TemplateAssignment b{ shape };
    for ( std::size_t i = 0; i < shape.n; ++i )
        for ( std::size_t j = 0; j < shape.m; ++j )
        {
            auto it = model.find( template_var( i, j ).name );
            b.set( i, j, it != model.end() && it->second.as_bool() );
        }
    return b;
}

Formula instantiate_template( const PredicateSet& preds, const TemplateAssignment& b )
{
    if ( b.shape().m != preds.size() )
        throw DimensionError( "template has m=" + std::to_string( b.shape().m ) + " but there are " +
                              std::to_string( preds.size() ) + " predicates" );
    return DnfInvariant::from_assignment( b ).to_formula( preds );
}

Formula symbolic_disjunct( const PredicateSet& preds, std::size_t i )
{
    std::vector< Formula > conj;
    for ( std::size_t j = 0; j < preds.size(); ++j )
        conj.push_back( mk_implies( mk_bool( template_var( i, j ) ), preds[ j ] ) );
    return mk_and( std::move( conj ) );
}

Formula symbolic_template( const PredicateSet& preds, TemplateShape shape )
{
    if ( shape.m != preds.size() )
        throw DimensionError( "template shape does not match the predicate count" );
    std::vector< Formula > disj;
    for ( std::size_t i = 0; i < shape.n; ++i )
        disj.push_back( symbolic_disjunct( preds, i ) );
    return mk_or( std::move( disj ) );
}

Formula lex_order_constraints( TemplateShape shape )
{
    std::vector< Formula > rows;
    for ( std::size_t i = 0; i + 1 < shape.n; ++i )
    {
        // L_{i,m+1} = false; L_{i,j} = (!b_ij && b_i+1,j) || ((b_ij => b_i+1,j) && L_{i,j+1})
        Formula l = mk_false();
        for ( std::size_t j = shape.m; j-- > 0; )
        {
            Formula lo = mk_bool( template_var( i, j ) );
            Formula hi = mk_bool( template_var( i + 1, j ) );
            l = mk_or( { mk_and( { mk_not( lo ), hi } ), mk_and( { mk_implies( lo, hi ), l } ) } );
        }
        rows.push_back( std::move( l ) );
    }
    return mk_and( std::move( rows ) );
}

} // namespace disjinv
