#pragma once

#include "disjinv/system.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace disjinv
{

// Surface expression shared by both input languages. Elaboration turns it into formulas.
struct Expr
{
    enum class Kind
    {
        Number,
        BoolLit,
        Ident,
        Pre,   // pre ID
        Arrow, // CONST -> EXPR
        Neg,
        Not,
        Add,
        Sub,
        Mul,
        Div,
        Cmp,
        And,
        Or,
        Implies,
        Iff,
        Ite
    };

    Kind kind = Kind::Number;
    Rational number{ 0 };
    bool boolean = false;
    std::string name;   // Ident, Pre
    bool primed = false; // Ident
    CmpOp op = CmpOp::Eq;
    std::vector< std::shared_ptr< const Expr > > kids;
    std::size_t line = 0;
    std::size_t column = 0;
};

using ExprPtr = std::shared_ptr< const Expr >;

struct NodeEquation
{
    std::string lhs;
    ExprPtr rhs;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct NodeProgram
{
    std::string name;
    std::vector< Variable > inputs;  // kind Input
    std::vector< Variable > outputs; // kind Output
    std::vector< Variable > locals;  // kind Auxiliary, inlined by the translation
    std::vector< NodeEquation > equations;
    // Optional annotations after `tel`.
    std::vector< ExprPtr > predicates;
    std::vector< ExprPtr > io_predicates;

    [[nodiscard]] const NodeEquation* equation( const std::string& flow ) const;
    [[nodiscard]] const Variable* flow( const std::string& name ) const;
};

// Missing guard, post and init default to true. State variables whose primed copy never occurs
// in `trans` keep their value (x' = x is conjoined).
[[nodiscard]] TransitionSystem parse_transition_system( std::string_view text );
[[nodiscard]] std::string print_transition_system( const TransitionSystem& ts );

[[nodiscard]] NodeProgram parse_node( std::string_view text );
[[nodiscard]] TransitionSystem node_to_transition_system( const NodeProgram& np );

// `.node`/`.lus` files are nodes, anything else a transition system. Throws Error on IO failure.
[[nodiscard]] TransitionSystem load_system( const std::filesystem::path& path );

struct HarvestOptions
{
    bool closure = true; // add the comparison family of every atom
};

// Atoms over state variables of S, C, T (primes stripped) and P, in source order.
[[nodiscard]] PredicateSet harvest_predicates( const TransitionSystem& ts, HarvestOptions opts = {} );
// Atoms over inputs/outputs only, from C and T.
[[nodiscard]] std::vector< Formula > harvest_io_predicates( const TransitionSystem& ts, HarvestOptions opts = {} );

} // namespace disjinv
