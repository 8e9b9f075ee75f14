#pragma once

#include "disjinv/formula.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace disjinv
{

// Ordered predicates over state variables; indices are stable for a run.
using PredicateSet = std::vector< Formula >;

struct TemplateShape
{
    std::size_t n = 1; // disjuncts
    std::size_t m = 0; // predicates

    [[nodiscard]] std::size_t size() const { return n * m; }

    friend bool operator==( const TemplateShape&, const TemplateShape& ) = default;
    friend auto operator<=>( const TemplateShape&, const TemplateShape& ) = default;
};

// The n x m Boolean matrix B; row i selects the predicates of disjunct i.
class TemplateAssignment
{
public:
    TemplateAssignment() = default;
    explicit TemplateAssignment( TemplateShape shape ) : _shape{ shape }, _bits( shape.size(), 0 ) {}
    TemplateAssignment( TemplateShape shape, const std::vector< std::vector< bool > >& rows );

    [[nodiscard]] const TemplateShape& shape() const { return _shape; }
    [[nodiscard]] bool get( std::size_t i, std::size_t j ) const { return _bits[ i * _shape.m + j ] != 0; }
    void set( std::size_t i, std::size_t j, bool v ) { _bits[ i * _shape.m + j ] = v ? 1 : 0; }

    // Row i as an m-bit number with predicate 0 as the most significant bit, so that numeric
    // order coincides with the lexicographic order induced by false < true.
    [[nodiscard]] std::uint64_t row_key( std::size_t i ) const;

    [[nodiscard]] std::string to_string() const;

    friend bool operator==( const TemplateAssignment&, const TemplateAssignment& ) = default;
    friend auto operator<=>( const TemplateAssignment&, const TemplateAssignment& ) = default;

private:
    TemplateShape _shape;
    std::vector< char > _bits;
};

// Each disjunct is the (sorted) list of selected predicate indices; an empty list means `true`.
struct DnfInvariant
{
    std::vector< std::vector< std::size_t > > disjuncts;

    static DnfInvariant from_assignment( const TemplateAssignment& b );
    // Pads by repeating the last disjunct when the invariant has fewer than n disjuncts.
    [[nodiscard]] TemplateAssignment to_assignment( TemplateShape shape ) const;
    [[nodiscard]] Formula disjunct( const PredicateSet& preds, std::size_t i ) const;
    [[nodiscard]] Formula to_formula( const PredicateSet& preds ) const;
    [[nodiscard]] std::size_t size() const { return disjuncts.size(); }

    friend bool operator==( const DnfInvariant&, const DnfInvariant& ) = default;
};

// b_{i,j} for 0-based i, j (rendered 1-based).
[[nodiscard]] Variable template_var( std::size_t i, std::size_t j );
[[nodiscard]] std::vector< Variable > template_vars( TemplateShape shape );
// Binding b_{i,j} -> B_{i,j}.
[[nodiscard]] Binding template_binding( const TemplateAssignment& b );
[[nodiscard]] Model template_model( const TemplateAssignment& b );
[[nodiscard]] TemplateAssignment assignment_from_model( TemplateShape shape, const Model& model );

// Or_i And_{j : B_ij} pi_j.
[[nodiscard]] Formula instantiate_template( const PredicateSet& preds, const TemplateAssignment& b );
// Symbolic disjunct C_i = And_j (b_ij => pi_j).
[[nodiscard]] Formula symbolic_disjunct( const PredicateSet& preds, std::size_t i );
// Or_i And_j (b_ij => pi_j) with free template Booleans.
[[nodiscard]] Formula symbolic_template( const PredicateSet& preds, TemplateShape shape );
// And_{i < n-1} L_{i,1}: rows strictly increasing lexicographically.
[[nodiscard]] Formula lex_order_constraints( TemplateShape shape );

} // namespace disjinv
