#include "smtlib.hpp"

#include "disjinv/solver.hpp"

#include <cctype>
#include <sstream>

namespace disjinv
{

namespace
{

std::string int_literal( const Integer& v )
{
    if ( v < 0 )
        return "(- " + Integer{ -v }.str() + ")";
    return v.str();
}

std::string real_literal( const Integer& v )
{
    if ( v < 0 )
        return "(- " + Integer{ -v }.str() + ".0)";
    return v.str() + ".0";
}

// Scales the atom to integer coefficients so Int atoms stay in pure integer arithmetic.
std::string atom_to_smtlib( const Atom& a )
{
    Integer scale = 1;
    auto absorb = [ & ]( const Rational& r ) {
        const Integer d = denominator( r );
        scale = scale / boost::multiprecision::gcd( scale, d ) * d;
    };
    for ( const auto& t : a.terms )
        absorb( t.coef );
    absorb( a.rhs );

    bool real = false;
    for ( const auto& t : a.terms )
        real = real || t.var.sort == Sort::Real;
    auto integral = [ & ]( const Integer& v ) { return real ? real_literal( v ) : int_literal( v ); };
    auto lit = [ & ]( const Rational& r ) { return integral( numerator( Rational{ r * scale } ) ); };

    std::ostringstream lhs;
    if ( a.terms.empty() )
        lhs << ( real ? "0.0" : "0" );
    else
    {
        if ( a.terms.size() > 1 )
            lhs << "(+";
        for ( const auto& t : a.terms )
        {
            std::string var = smtlib::quote( t.var.name );
            if ( real && t.var.sort == Sort::Int )
                var = "(to_real " + var + ")";
            if ( a.terms.size() > 1 )
                lhs << " ";
            const Rational c = t.coef * scale;
            if ( c == 1 )
                lhs << var;
            else
                lhs << "(* " << integral( numerator( c ) ) << " " << var << ")";
        }
        if ( a.terms.size() > 1 )
            lhs << ")";
    }

    const std::string rhs = lit( a.rhs );
    switch ( a.op )
    {
    case CmpOp::Ne: return "(not (= " + lhs.str() + " " + rhs + "))";
    default: return "(" + to_string( a.op ) + " " + lhs.str() + " " + rhs + ")";
    }
}

void emit( std::ostream& os, const Formula& f )
{
    switch ( f.kind() )
    {
    case Formula::Kind::True: os << "true"; return;
    case Formula::Kind::False: os << "false"; return;
    case Formula::Kind::Var: os << smtlib::quote( f.var().name ); return;
    case Formula::Kind::Atom: os << atom_to_smtlib( f.atom() ); return;
    case Formula::Kind::Not:
        os << "(not ";
        emit( os, f.children()[ 0 ] );
        os << ")";
        return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
    {
        const char* op = f.kind() == Formula::Kind::And       ? "and"
                         : f.kind() == Formula::Kind::Or      ? "or"
                         : f.kind() == Formula::Kind::Implies ? "=>"
                                                               : "=";
        os << "(" << op;
        for ( const auto& k : f.children() )
        {
            os << " ";
            emit( os, k );
        }
        os << ")";
        return;
    }
    }
}

} // namespace

std::string to_smtlib( const Formula& f )
{
    std::ostringstream os;
    emit( os, f );
    return os.str();
}

namespace smtlib
{

std::string quote( const std::string& name ) { return "|" + name + "|"; }

std::string sort_name( Sort sort )
{
    switch ( sort )
    {
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
    case Sort::Bool: return "Bool";
    }
    return "?";
}

namespace
{

struct Reader
{
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws()
    {
        while ( pos < s.size() && std::isspace( static_cast< unsigned char >( s[ pos ] ) ) )
            ++pos;
    }

    SExpr read()
    {
        skip_ws();
        if ( pos >= s.size() )
            throw SolverError( "unexpected end of solver output" );
        if ( s[ pos ] == '(' )
        {
            ++pos;
            SExpr e;
            e.is_list = true;
            while ( true )
            {
                skip_ws();
                if ( pos >= s.size() )
                    throw SolverError( "unbalanced solver output" );
                if ( s[ pos ] == ')' )
                {
                    ++pos;
                    return e;
                }
                e.list.push_back( read() );
            }
        }
        if ( s[ pos ] == ')' )
            throw SolverError( "unexpected ')' in solver output" );
        SExpr e;
        if ( s[ pos ] == '|' )
        {
            const auto end = s.find( '|', pos + 1 );
            if ( end == std::string::npos )
                throw SolverError( "unterminated quoted symbol in solver output" );
            e.atom = s.substr( pos + 1, end - pos - 1 );
            pos = end + 1;
            return e;
        }
        if ( s[ pos ] == '"' )
        {
            std::string out;
            ++pos;
            while ( pos < s.size() )
            {
                if ( s[ pos ] == '"' )
                {
                    if ( pos + 1 < s.size() && s[ pos + 1 ] == '"' )
                    {
                        out += '"';
                        pos += 2;
                        continue;
                    }
                    ++pos;
                    e.atom = out;
                    return e;
                }
                out += s[ pos++ ];
            }
            throw SolverError( "unterminated string in solver output" );
        }
        const auto start = pos;
        while ( pos < s.size() && !std::isspace( static_cast< unsigned char >( s[ pos ] ) ) && s[ pos ] != '(' &&
                s[ pos ] != ')' )
            ++pos;
        e.atom = s.substr( start, pos - start );
        return e;
    }
};

Rational parse_number( const std::string& text )
{
    const auto dot = text.find( '.' );
    if ( text.empty() || ( !std::isdigit( static_cast< unsigned char >( text[ 0 ] ) ) ) )
        throw SolverError( "malformed number '" + text + "' in solver output" );
    if ( dot == std::string::npos )
        return Rational{ Integer{ text } };
    const std::string whole = text.substr( 0, dot );
    const std::string frac = text.substr( dot + 1 );
    Integer scale = 1;
    for ( std::size_t k = 0; k < frac.size(); ++k )
        scale *= 10;
    const Integer num = Integer{ whole.empty() ? "0" : whole } * scale + ( frac.empty() ? Integer{ 0 } : Integer{ frac } );
    return Rational{ num, scale };
}

Rational parse_arith( const SExpr& e )
{
    if ( !e.is_list )
        return parse_number( e.atom );
    if ( e.list.size() == 2 && !e.list[ 0 ].is_list && e.list[ 0 ].atom == "-" )
        return -parse_arith( e.list[ 1 ] );
    if ( e.list.size() == 3 && !e.list[ 0 ].is_list && e.list[ 0 ].atom == "/" )
        return parse_arith( e.list[ 1 ] ) / parse_arith( e.list[ 2 ] );
    if ( e.list.size() == 2 && !e.list[ 0 ].is_list && e.list[ 0 ].atom == "to_real" )
        return parse_arith( e.list[ 1 ] );
    throw SolverError( "unsupported value term in solver output" );
}

} // namespace

SExpr parse( const std::string& text )
{
    Reader r{ text };
    return r.read();
}

Value parse_value( const SExpr& e, Sort sort )
{
    if ( sort == Sort::Bool )
    {
        if ( e.is_list || ( e.atom != "true" && e.atom != "false" ) )
            throw SolverError( "expected a Boolean value from the solver" );
        return Value{ e.atom == "true" };
    }
    Rational r = parse_arith( e );
    if ( sort == Sort::Int && denominator( r ) != 1 )
        throw SolverError( "non-integral value for an Int variable" );
    return Value{ std::move( r ) };
}

} // namespace smtlib
} // namespace disjinv
