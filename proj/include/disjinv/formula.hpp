#pragma once

#include "disjinv/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace disjinv
{

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

enum class Sort
{
    Int,
    Real,
    Bool
};

enum class VarKind
{
    State,
    Primed,
    Input,
    Output,
    TemplateBool,
    Auxiliary
};

std::string to_string( Sort sort );
std::string to_string( VarKind kind );

struct Variable
{
    std::string name;
    Sort sort = Sort::Int;
    VarKind kind = VarKind::State;

    friend bool operator==( const Variable&, const Variable& ) = default;
    friend auto operator<=>( const Variable&, const Variable& ) = default;
};

[[nodiscard]] inline bool is_arithmetic( Sort sort ) { return sort != Sort::Bool; }

// A concrete value: Booleans or exact rationals (integers are rationals with denominator 1).
class Value
{
public:
    Value() = default;
    Value( bool b ) : _v{ b } {}
    Value( Rational r ) : _v{ std::move( r ) } {}
    Value( int i ) : _v{ Rational{ i } } {}

    [[nodiscard]] bool is_bool() const { return std::holds_alternative< bool >( _v ); }
    [[nodiscard]] bool as_bool() const { return std::get< bool >( _v ); }
    [[nodiscard]] const Rational& as_rational() const { return std::get< Rational >( _v ); }

    friend bool operator==( const Value&, const Value& ) = default;

private:
    std::variant< bool, Rational > _v{ false };
};

std::string to_string( const Rational& r );
std::string to_string( const Value& v );

// Total or partial assignment of values to variable names.
using Model = std::map< std::string, Value >;

enum class CmpOp
{
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt
};

std::string to_string( CmpOp op );
[[nodiscard]] CmpOp flip( CmpOp op );   // a op b  <=>  b flip(op) a
[[nodiscard]] CmpOp negate( CmpOp op ); // !(a op b)  <=>  a negate(op) b
[[nodiscard]] bool compare( const Rational& lhs, CmpOp op, const Rational& rhs );

struct Term
{
    Variable var;
    Rational coef;

    friend bool operator==( const Term&, const Term& ) = default;
};

// Sum of terms plus a constant. Terms keep first-occurrence order and nonzero coefficients.
struct LinearExpr
{
    std::vector< Term > terms;
    Rational constant{ 0 };

    static LinearExpr of( Variable v );
    static LinearExpr of( Rational c );

    [[nodiscard]] bool is_constant() const { return terms.empty(); }
    void add_term( const Variable& v, const Rational& c );
    LinearExpr& operator+=( const LinearExpr& other );
    LinearExpr& operator-=( const LinearExpr& other );
    LinearExpr& operator*=( const Rational& c );

    friend bool operator==( const LinearExpr&, const LinearExpr& ) = default;
};

LinearExpr operator+( LinearExpr a, const LinearExpr& b );
LinearExpr operator-( LinearExpr a, const LinearExpr& b );
LinearExpr operator*( LinearExpr a, const Rational& c );

// Linear atom: sum(terms) op rhs.
struct Atom
{
    std::vector< Term > terms;
    CmpOp op = CmpOp::Eq;
    Rational rhs{ 0 };

    [[nodiscard]] bool is_ground() const { return terms.empty(); }

    friend bool operator==( const Atom&, const Atom& ) = default;
};

class Formula
{
public:
    enum class Kind
    {
        True,
        False,
        Var,
        Atom,
        Not,
        And,
        Or,
        Implies,
        Iff
    };

    Formula(); // true

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] const Variable& var() const;
    [[nodiscard]] const Atom& atom() const;
    [[nodiscard]] const std::vector< Formula >& children() const;

    [[nodiscard]] bool is_true() const { return kind() == Kind::True; }
    [[nodiscard]] bool is_false() const { return kind() == Kind::False; }

    // Node identity, usable as a cache key while the formula is alive.
    [[nodiscard]] const void* id() const { return _node.get(); }

    // Structural equality.
    friend bool operator==( const Formula& a, const Formula& b );

    struct Node; // opaque

private:
    explicit Formula( std::shared_ptr< const Node > node );
    std::shared_ptr< const Node > _node;

    friend Formula mk_true();
    friend Formula mk_false();
    friend Formula mk_bool( Variable v );
    friend Formula mk_atom( Atom a );
    friend Formula mk_not( Formula f );
    friend Formula mk_and( std::vector< Formula > fs );
    friend Formula mk_or( std::vector< Formula > fs );
    friend Formula mk_implies( Formula a, Formula b );
    friend Formula mk_iff( Formula a, Formula b );
};

Formula mk_true();
Formula mk_false();
Formula mk_const( bool b );
Formula mk_bool( Variable v );
Formula mk_atom( Atom a );
// lhs op rhs, moving everything into the canonical `terms op constant` shape.
Formula mk_cmp( const LinearExpr& lhs, CmpOp op, const LinearExpr& rhs );
Formula mk_not( Formula f );
// Empty conjunction is true, empty disjunction is false, singletons collapse.
Formula mk_and( std::vector< Formula > fs );
Formula mk_or( std::vector< Formula > fs );
Formula mk_and( std::initializer_list< Formula > fs );
Formula mk_or( std::initializer_list< Formula > fs );
Formula mk_implies( Formula a, Formula b );
Formula mk_iff( Formula a, Formula b );

// Replacement for a variable: a constant, another variable (renaming), or a formula (Bool only).
using Replacement = std::variant< Value, Variable, Formula >;
using Binding = std::map< std::string, Replacement >;

// Simultaneous substitution; throws SubstitutionError on sort mismatch.
[[nodiscard]] Formula substitute( const Formula& f, const Binding& binding );
[[nodiscard]] Formula substitute( const Formula& f, const Model& values );

[[nodiscard]] Variable primed( const Variable& v );
[[nodiscard]] Variable unprimed( const Variable& v );
[[nodiscard]] Formula prime( const Formula& f, const std::vector< Variable >& state );
// Rename every state variable x to a fresh auxiliary copy `x@tag`.
[[nodiscard]] Variable state_copy( const Variable& v, const std::string& tag );
[[nodiscard]] Formula copy_state( const Formula& f, const std::vector< Variable >& state, const std::string& tag );

// Throws Error if a free variable has no value in the model.
[[nodiscard]] bool evaluate( const Formula& f, const Model& model );

// Constant folding and flattening; never required for correctness.
[[nodiscard]] Formula simplify( const Formula& f );

[[nodiscard]] std::vector< Variable > free_variables( const Formula& f );
[[nodiscard]] std::vector< Variable > free_variables( const std::vector< Formula >& fs );
[[nodiscard]] bool is_propositional( const Formula& f );

[[nodiscard]] std::string to_string( const Atom& a );
[[nodiscard]] std::string to_string( const Formula& f );
std::ostream& operator<<( std::ostream& os, const Formula& f );

} // namespace disjinv
