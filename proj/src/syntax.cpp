#include "syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace disjinv::detail
{

namespace
{

constexpr std::array< std::string_view, 10 > multi_puncts{ "<=>", "=>", "->", "&&", "||", "<=", ">=", "!=", "<>", "==" };

bool ident_start( char c ) { return std::isalpha( static_cast< unsigned char >( c ) ) || c == '_'; }
bool ident_char( char c ) { return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_'; }
bool digit( char c ) { return std::isdigit( static_cast< unsigned char >( c ) ) != 0; }

ExprPtr make( Expr e ) { return std::make_shared< const Expr >( std::move( e ) ); }

Expr at( const Token& tok, Expr::Kind kind )
{
    Expr e;
    e.kind = kind;
    e.line = tok.line;
    e.column = tok.column;
    return e;
}

ExprPtr binary( const ExprPtr& lhs, Expr::Kind kind, ExprPtr rhs )
{
    Expr e;
    e.kind = kind;
    e.line = lhs->line;
    e.column = lhs->column;
    e.kids = { lhs, std::move( rhs ) };
    return make( std::move( e ) );
}

Rational parse_number( const std::string& text )
{
    const auto dot = text.find( '.' );
    if ( dot == std::string::npos )
        return Rational{ Integer{ text } };
    const std::string whole = text.substr( 0, dot );
    const std::string frac = text.substr( dot + 1 );
    Integer denom{ 1 };
    for ( std::size_t k = 0; k < frac.size(); ++k )
        denom *= 10;
    return Rational{ Integer{ whole + frac }, denom };
}

std::string describe( const Token& tok )
{
    return tok.kind == Token::Kind::End ? std::string{ "end of input" } : "'" + tok.text + "'";
}

[[noreturn]] void fail_expr( const Expr& e, const std::string& what ) { throw SyntaxError( what, e.line, e.column ); }

bool is_boolean( const Expr& e, const Scope& scope )
{
    switch ( e.kind )
    {
    case Expr::Kind::BoolLit:
    case Expr::Kind::Not:
    case Expr::Kind::And:
    case Expr::Kind::Or:
    case Expr::Kind::Implies:
    case Expr::Kind::Iff:
    case Expr::Kind::Cmp: return true;
    case Expr::Kind::Ident: return scope.resolve( e ).sort == Sort::Bool;
    default: return false;
    }
}

void reject_node_only( const Expr& e )
{
    switch ( e.kind )
    {
    case Expr::Kind::Pre:
    case Expr::Kind::Arrow:
    case Expr::Kind::Ite: fail_expr( e, "node-only construct in a transition-system formula" );
    default: break;
    }
}

} // namespace

bool is_reserved( std::string_view word )
{
    static constexpr std::array< std::string_view, 14 > words{ "true", "false", "and", "or",   "not",     "if",  "then",
                                                                "else", "pre",   "node", "returns", "var", "let", "tel" };
    return std::find( words.begin(), words.end(), word ) != words.end();
}

std::vector< Token > tokenize( std::string_view text )
{
    std::vector< Token > out;
    std::size_t line = 1, col = 1, k = 0;
    auto advance = [ & ]( std::size_t count ) {
        for ( std::size_t c = 0; c < count; ++c, ++k )
        {
            if ( text[ k ] == '\n' )
            {
                ++line;
                col = 1;
            }
            else
                ++col;
        }
    };

    while ( k < text.size() )
    {
        const char c = text[ k ];
        if ( std::isspace( static_cast< unsigned char >( c ) ) )
        {
            advance( 1 );
            continue;
        }
        if ( c == '#' || text.substr( k, 2 ) == "//" )
        {
            while ( k < text.size() && text[ k ] != '\n' )
                advance( 1 );
            continue;
        }

        Token tok;
        tok.line = line;
        tok.column = col;
        std::size_t len = 0;
        if ( ident_start( c ) )
        {
            tok.kind = Token::Kind::Ident;
            while ( k + len < text.size() && ident_char( text[ k + len ] ) )
                ++len;
        }
        else if ( digit( c ) )
        {
            tok.kind = Token::Kind::Number;
            while ( k + len < text.size() && digit( text[ k + len ] ) )
                ++len;
            if ( k + len + 1 < text.size() && text[ k + len ] == '.' && digit( text[ k + len + 1 ] ) )
            {
                ++len;
                while ( k + len < text.size() && digit( text[ k + len ] ) )
                    ++len;
            }
        }
        else
        {
            tok.kind = Token::Kind::Punct;
            for ( auto p : multi_puncts )
                if ( !p.empty() && text.substr( k, p.size() ) == p )
                {
                    len = p.size();
                    break;
                }
            if ( len == 0 )
            {
                static constexpr std::string_view singles = "();:,'+-*/<>=!";
                if ( singles.find( c ) == std::string_view::npos )
                    throw SyntaxError( std::string{ "unexpected character '" } + c + "'", line, col );
                len = 1;
            }
        }
        tok.text = std::string{ text.substr( k, len ) };
        out.push_back( std::move( tok ) );
        advance( len );
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back( end );
    return out;
}

const Token& TokenStream::peek( std::size_t ahead ) const { return _tokens[ std::min( _pos + ahead, _tokens.size() - 1 ) ]; }

const Token& TokenStream::next()
{
    const Token& t = peek();
    if ( _pos + 1 < _tokens.size() )
        ++_pos;
    return t;
}

bool TokenStream::is( std::string_view text ) const { return peek().kind != Token::Kind::End && peek().kind != Token::Kind::Number && peek().text == text; }

bool TokenStream::accept( std::string_view text )
{
    if ( !is( text ) )
        return false;
    next();
    return true;
}

const Token& TokenStream::expect( std::string_view text )
{
    if ( !is( text ) )
        fail( "expected '" + std::string{ text } + "' but found " + describe( peek() ) );
    return next();
}

std::string TokenStream::expect_ident()
{
    if ( peek().kind != Token::Kind::Ident || is_reserved( peek().text ) )
        fail( "expected an identifier but found " + describe( peek() ) );
    return next().text;
}

void TokenStream::fail( const std::string& what ) const { fail_at( peek(), what ); }

void TokenStream::fail_at( const Token& tok, const std::string& what ) const { throw SyntaxError( what, tok.line, tok.column ); }

ExprPtr TokenStream::expression( bool node_syntax )
{
    _node = node_syntax;
    return arrow();
}

ExprPtr TokenStream::arrow()
{
    ExprPtr lhs = iff();
    if ( _node && accept( "->" ) )
        return binary( lhs, Expr::Kind::Arrow, arrow() );
    return lhs;
}

ExprPtr TokenStream::iff()
{
    ExprPtr lhs = implies();
    while ( accept( "<=>" ) )
        lhs = binary( lhs, Expr::Kind::Iff, implies() );
    return lhs;
}

ExprPtr TokenStream::implies()
{
    ExprPtr lhs = disjunction();
    if ( accept( "=>" ) )
        return binary( lhs, Expr::Kind::Implies, implies() );
    return lhs;
}

ExprPtr TokenStream::disjunction()
{
    ExprPtr first = conjunction();
    if ( !is( "||" ) && !( _node && is( "or" ) ) )
        return first;
    Expr e;
    e.kind = Expr::Kind::Or;
    e.line = first->line;
    e.column = first->column;
    e.kids.push_back( first );
    while ( accept( "||" ) || ( _node && accept( "or" ) ) )
        e.kids.push_back( conjunction() );
    return make( std::move( e ) );
}

ExprPtr TokenStream::conjunction()
{
    ExprPtr first = negation();
    if ( !is( "&&" ) && !( _node && is( "and" ) ) )
        return first;
    Expr e;
    e.kind = Expr::Kind::And;
    e.line = first->line;
    e.column = first->column;
    e.kids.push_back( first );
    while ( accept( "&&" ) || ( _node && accept( "and" ) ) )
        e.kids.push_back( negation() );
    return make( std::move( e ) );
}

ExprPtr TokenStream::negation()
{
    if ( is( "!" ) || ( _node && is( "not" ) ) )
    {
        Expr e = at( next(), Expr::Kind::Not );
        e.kids.push_back( negation() );
        return make( std::move( e ) );
    }
    return comparison();
}

ExprPtr TokenStream::comparison()
{
    ExprPtr lhs = sum();
    static const std::vector< std::pair< std::string_view, CmpOp > > ops{
            { "<", CmpOp::Lt },  { "<=", CmpOp::Le }, { "=", CmpOp::Eq }, { "==", CmpOp::Eq },
            { "!=", CmpOp::Ne }, { "<>", CmpOp::Ne }, { ">=", CmpOp::Ge }, { ">", CmpOp::Gt } };
    for ( const auto& [ text, op ] : ops )
    {
        if ( text == "<>" && !_node )
            continue;
        if ( accept( text ) )
        {
            Expr e;
            e.kind = Expr::Kind::Cmp;
            e.op = op;
            e.line = lhs->line;
            e.column = lhs->column;
            e.kids = { lhs, sum() };
            if ( peek().kind == Token::Kind::Punct &&
                 std::any_of( ops.begin(), ops.end(), [ & ]( const auto& o ) { return o.first == peek().text; } ) )
                fail( "comparisons do not chain" );
            return make( std::move( e ) );
        }
    }
    return lhs;
}

ExprPtr TokenStream::sum()
{
    ExprPtr lhs = product();
    for ( ;; )
    {
        if ( accept( "+" ) )
            lhs = binary( lhs, Expr::Kind::Add, product() );
        else if ( accept( "-" ) )
            lhs = binary( lhs, Expr::Kind::Sub, product() );
        else
            return lhs;
    }
}

ExprPtr TokenStream::product()
{
    ExprPtr lhs = unary();
    for ( ;; )
    {
        if ( accept( "*" ) )
            lhs = binary( lhs, Expr::Kind::Mul, unary() );
        else if ( accept( "/" ) )
            lhs = binary( lhs, Expr::Kind::Div, unary() );
        else
            return lhs;
    }
}

ExprPtr TokenStream::unary()
{
    if ( is( "-" ) )
    {
        Expr e = at( next(), Expr::Kind::Neg );
        e.kids.push_back( unary() );
        return make( std::move( e ) );
    }
    return primary();
}

ExprPtr TokenStream::primary()
{
    const Token& tok = peek();
    if ( tok.kind == Token::Kind::Number )
    {
        Expr e = at( next(), Expr::Kind::Number );
        e.number = parse_number( tok.text );
        return make( std::move( e ) );
    }
    if ( accept( "(" ) )
    {
        ExprPtr inner = arrow();
        expect( ")" );
        return inner;
    }
    if ( tok.kind == Token::Kind::Ident )
    {
        if ( tok.text == "true" || tok.text == "false" )
        {
            Expr e = at( next(), Expr::Kind::BoolLit );
            e.boolean = tok.text == "true";
            return make( std::move( e ) );
        }
        if ( _node && tok.text == "pre" )
        {
            Expr e = at( next(), Expr::Kind::Pre );
            e.name = expect_ident();
            return make( std::move( e ) );
        }
        if ( _node && tok.text == "if" )
        {
            Expr e = at( next(), Expr::Kind::Ite );
            e.kids.push_back( arrow() );
            expect( "then" );
            e.kids.push_back( arrow() );
            expect( "else" );
            e.kids.push_back( arrow() );
            return make( std::move( e ) );
        }
        const Token& id = peek();
        Expr e = at( id, Expr::Kind::Ident );
        e.name = expect_ident();
        // a prime must follow the identifier immediately
        if ( is( "'" ) && peek().line == id.line && peek().column == id.column + id.text.size() )
        {
            next();
            e.primed = true;
        }
        return make( std::move( e ) );
    }
    fail( "expected an expression but found " + describe( tok ) );
}

std::optional< Value > literal_value( const Expr& e )
{
    switch ( e.kind )
    {
    case Expr::Kind::Number: return Value{ e.number };
    case Expr::Kind::BoolLit: return Value{ e.boolean };
    case Expr::Kind::Neg:
        if ( e.kids[ 0 ]->kind == Expr::Kind::Number )
            return Value{ Rational{ -e.kids[ 0 ]->number } };
        return std::nullopt;
    default: return std::nullopt;
    }
}

Formula negate_literal( const Formula& f )
{
    if ( f.kind() == Formula::Kind::Atom )
    {
        Atom a = f.atom();
        a.op = negate( a.op );
        return mk_atom( std::move( a ) );
    }
    if ( f.kind() == Formula::Kind::Not )
        return f.children()[ 0 ];
    return mk_not( f );
}

Formula elaborate_bool( const Expr& e, const Scope& scope )
{
    reject_node_only( e );
    auto kids = [ & ] {
        std::vector< Formula > out;
        for ( const auto& k : e.kids )
            out.push_back( elaborate_bool( *k, scope ) );
        return out;
    };
    switch ( e.kind )
    {
    case Expr::Kind::BoolLit: return mk_const( e.boolean );
    case Expr::Kind::Ident:
    {
        const Variable v = scope.resolve( e );
        if ( v.sort != Sort::Bool )
            throw SortMismatch( "'" + e.name + "' is " + to_string( v.sort ) + ", expected bool", e.line, e.column );
        return mk_bool( v );
    }
    case Expr::Kind::Not: return mk_not( elaborate_bool( *e.kids[ 0 ], scope ) );
    case Expr::Kind::And: return mk_and( kids() );
    case Expr::Kind::Or: return mk_or( kids() );
    case Expr::Kind::Implies:
    {
        auto k = kids();
        return mk_implies( k[ 0 ], k[ 1 ] );
    }
    case Expr::Kind::Iff:
    {
        auto k = kids();
        return mk_iff( k[ 0 ], k[ 1 ] );
    }
    case Expr::Kind::Cmp:
    {
        const Expr& l = *e.kids[ 0 ];
        const Expr& r = *e.kids[ 1 ];
        const bool lb = is_boolean( l, scope ), rb = is_boolean( r, scope );
        if ( lb != rb )
            throw SortMismatch( "comparison between bool and arithmetic operands", e.line, e.column );
        if ( lb )
        {
            if ( e.op != CmpOp::Eq && e.op != CmpOp::Ne )
                throw SortMismatch( "ordering comparison on bool operands", e.line, e.column );
            const Formula eq = mk_iff( elaborate_bool( l, scope ), elaborate_bool( r, scope ) );
            return e.op == CmpOp::Eq ? eq : mk_not( eq );
        }
        return mk_cmp( elaborate_arith( l, scope ), e.op, elaborate_arith( r, scope ) );
    }
    default: throw SortMismatch( "arithmetic expression used as a formula", e.line, e.column );
    }
}

LinearExpr elaborate_arith( const Expr& e, const Scope& scope )
{
    reject_node_only( e );
    switch ( e.kind )
    {
    case Expr::Kind::Number: return LinearExpr::of( e.number );
    case Expr::Kind::Ident:
    {
        const Variable v = scope.resolve( e );
        if ( v.sort == Sort::Bool )
            throw SortMismatch( "'" + e.name + "' is bool, expected a number", e.line, e.column );
        return LinearExpr::of( v );
    }
    case Expr::Kind::Neg: return elaborate_arith( *e.kids[ 0 ], scope ) * Rational{ -1 };
    case Expr::Kind::Add: return elaborate_arith( *e.kids[ 0 ], scope ) + elaborate_arith( *e.kids[ 1 ], scope );
    case Expr::Kind::Sub: return elaborate_arith( *e.kids[ 0 ], scope ) - elaborate_arith( *e.kids[ 1 ], scope );
    case Expr::Kind::Mul:
    {
        LinearExpr a = elaborate_arith( *e.kids[ 0 ], scope );
        LinearExpr b = elaborate_arith( *e.kids[ 1 ], scope );
        if ( a.is_constant() )
            return b * a.constant;
        if ( b.is_constant() )
            return a * b.constant;
        throw NonlinearAtom( "product of two non-constant terms", e.line, e.column );
    }
    case Expr::Kind::Div:
    {
        LinearExpr a = elaborate_arith( *e.kids[ 0 ], scope );
        LinearExpr b = elaborate_arith( *e.kids[ 1 ], scope );
        if ( !b.is_constant() )
            throw NonlinearAtom( "division by a non-constant term", e.line, e.column );
        if ( b.constant == 0 )
            throw SyntaxError( "division by zero", e.line, e.column );
        return a * ( Rational{ 1 } / b.constant );
    }
    default: throw SortMismatch( "formula used as a number", e.line, e.column );
    }
}

} // namespace disjinv::detail
