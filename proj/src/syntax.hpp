#pragma once

#include "disjinv/frontend.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace disjinv::detail
{

struct Token
{
    enum class Kind
    {
        Ident,
        Number,
        Punct,
        End
    };

    Kind kind = Kind::End;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

// `#` and `//` start comments running to the end of the line.
std::vector< Token > tokenize( std::string_view text );

// Recursive-descent cursor over a token list; expression grammar shared by both languages.
class TokenStream
{
public:
    explicit TokenStream( std::vector< Token > tokens ) : _tokens{ std::move( tokens ) } {}

    [[nodiscard]] const Token& peek( std::size_t ahead = 0 ) const;
    const Token& next();
    [[nodiscard]] bool at_end() const { return peek().kind == Token::Kind::End; }
    [[nodiscard]] bool is( std::string_view text ) const;
    bool accept( std::string_view text );
    const Token& expect( std::string_view text );
    std::string expect_ident();

    [[noreturn]] void fail( const std::string& what ) const;
    [[noreturn]] void fail_at( const Token& tok, const std::string& what ) const;

    // node_syntax enables `pre`, `->`, `if then else`, `and or not`, `<>`.
    ExprPtr expression( bool node_syntax );

private:
    ExprPtr arrow();
    ExprPtr iff();
    ExprPtr implies();
    ExprPtr disjunction();
    ExprPtr conjunction();
    ExprPtr negation();
    ExprPtr comparison();
    ExprPtr sum();
    ExprPtr product();
    ExprPtr unary();
    ExprPtr primary();

    std::vector< Token > _tokens;
    std::size_t _pos = 0;
    bool _node = false;
};

bool is_reserved( std::string_view word );

// Elaboration of an expression into a formula for the transition-system language.
// `resolve` maps (name, primed, token position) to a variable or throws.
struct Scope
{
    virtual ~Scope() = default;
    [[nodiscard]] virtual Variable resolve( const Expr& ident ) const = 0;
};

[[nodiscard]] Formula elaborate_bool( const Expr& e, const Scope& scope );
[[nodiscard]] LinearExpr elaborate_arith( const Expr& e, const Scope& scope );

// Constant value of a literal, optionally negated; nullopt when `e` is not a literal.
[[nodiscard]] std::optional< Value > literal_value( const Expr& e );

// !(a op c) as the complementary atom, otherwise plain negation.
[[nodiscard]] Formula negate_literal( const Formula& f );

} // namespace disjinv::detail
