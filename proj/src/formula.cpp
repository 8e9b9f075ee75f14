#include "disjinv/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace disjinv
{

std::string to_string( Sort sort )
{
    switch ( sort )
    {
    case Sort::Int: return "int";
    case Sort::Real: return "real";
    case Sort::Bool: return "bool";
    }
    return "?";
}

std::string to_string( VarKind kind )
{
    switch ( kind )
    {
    case VarKind::State: return "state";
    case VarKind::Primed: return "primed";
    case VarKind::Input: return "input";
    case VarKind::Output: return "output";
    case VarKind::TemplateBool: return "template";
    case VarKind::Auxiliary: return "auxiliary";
    }
    return "?";
}

std::string to_string( const Rational& r )
{
    if ( denominator( r ) == 1 )
        return numerator( r ).str();
    return numerator( r ).str() + "/" + denominator( r ).str();
}

std::string to_string( const Value& v )
{
    if ( v.is_bool() )
        return v.as_bool() ? "true" : "false";
    return to_string( v.as_rational() );
}

std::string to_string( CmpOp op )
{
    switch ( op )
    {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    }
    return "?";
}

CmpOp flip( CmpOp op )
{
    switch ( op )
    {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Gt: return CmpOp::Lt;
    default: return op;
    }
}

CmpOp negate( CmpOp op )
{
    switch ( op )
    {
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
    }
    return op;
}

bool compare( const Rational& lhs, CmpOp op, const Rational& rhs )
{
    switch ( op )
    {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
    }
    return false;
}

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr LinearExpr::of( Variable v )
{
    LinearExpr e;
    e.add_term( v, Rational{ 1 } );
    return e;
}

LinearExpr LinearExpr::of( Rational c )
{
    LinearExpr e;
    e.constant = std::move( c );
    return e;
}

void LinearExpr::add_term( const Variable& v, const Rational& c )
{
    auto it = std::find_if( terms.begin(), terms.end(), [ & ]( const Term& t ) { return t.var.name == v.name; } );
    if ( it == terms.end() )
    {
        if ( c != 0 )
            terms.push_back( Term{ v, c } );
        return;
    }
    it->coef += c;
    if ( it->coef == 0 )
        terms.erase( it );
}

LinearExpr& LinearExpr::operator+=( const LinearExpr& other )
{
    for ( const auto& t : other.terms )
        add_term( t.var, t.coef );
    constant += other.constant;
    return *this;
}

LinearExpr& LinearExpr::operator-=( const LinearExpr& other )
{
    for ( const auto& t : other.terms )
        add_term( t.var, -t.coef );
    constant -= other.constant;
    return *this;
}

LinearExpr& LinearExpr::operator*=( const Rational& c )
{
    if ( c == 0 )
    {
        terms.clear();
        constant = 0;
        return *this;
    }
    for ( auto& t : terms )
        t.coef *= c;
    constant *= c;
    return *this;
}

LinearExpr operator+( LinearExpr a, const LinearExpr& b ) { return a += b; }
LinearExpr operator-( LinearExpr a, const LinearExpr& b ) { return a -= b; }
LinearExpr operator*( LinearExpr a, const Rational& c ) { return a *= c; }

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node
{
    Kind kind;
    Variable var;
    Atom atom;
    std::vector< Formula > kids;
};

namespace
{

std::shared_ptr< const Formula::Node > shared_true()
{
    static const auto node = std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::True, {}, {}, {} } );
    return node;
}

std::shared_ptr< const Formula::Node > shared_false()
{
    static const auto node = std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::False, {}, {}, {} } );
    return node;
}

// Merge duplicate variables, drop zero coefficients, order positive terms before negative ones
// and make sure at least one coefficient is positive. The rendering relies on this shape.
Atom normalize( Atom a )
{
    LinearExpr merged;
    for ( const auto& t : a.terms )
        merged.add_term( t.var, t.coef );

    std::vector< Term > pos, neg;
    for ( auto& t : merged.terms )
        ( t.coef > 0 ? pos : neg ).push_back( std::move( t ) );

    if ( pos.empty() && !neg.empty() )
    {
        for ( auto& t : neg )
            t.coef = -t.coef;
        a.op = flip( a.op );
        a.rhs = -a.rhs;
        std::swap( pos, neg );
    }

    a.terms = std::move( pos );
    a.terms.insert( a.terms.end(), std::make_move_iterator( neg.begin() ), std::make_move_iterator( neg.end() ) );
    return a;
}

} // namespace

Formula::Formula() : _node{ shared_true() } {}

Formula::Formula( std::shared_ptr< const Node > node ) : _node{ std::move( node ) } {}

Formula::Kind Formula::kind() const { return _node->kind; }
const Variable& Formula::var() const { return _node->var; }
const Atom& Formula::atom() const { return _node->atom; }
const std::vector< Formula >& Formula::children() const { return _node->kids; }

bool operator==( const Formula& a, const Formula& b )
{
    if ( a._node == b._node )
        return true;
    if ( a.kind() != b.kind() )
        return false;
    switch ( a.kind() )
    {
    case Formula::Kind::True:
    case Formula::Kind::False: return true;
    case Formula::Kind::Var: return a.var() == b.var();
    case Formula::Kind::Atom: return a.atom() == b.atom();
    default: return a.children() == b.children();
    }
}

Formula mk_true() { return Formula{ shared_true() }; }
Formula mk_false() { return Formula{ shared_false() }; }
Formula mk_const( bool b ) { return b ? mk_true() : mk_false(); }

Formula mk_bool( Variable v )
{
    if ( v.sort != Sort::Bool )
        throw SubstitutionError( "variable '" + v.name + "' is not Boolean" );
    return Formula{ std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::Var, std::move( v ), {}, {} } ) };
}

Formula mk_atom( Atom a )
{
    for ( const auto& t : a.terms )
        if ( !is_arithmetic( t.var.sort ) )
            throw SubstitutionError( "Boolean variable '" + t.var.name + "' used in an arithmetic atom" );
    return Formula{ std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::Atom, {}, normalize( std::move( a ) ), {} } ) };
}

Formula mk_cmp( const LinearExpr& lhs, CmpOp op, const LinearExpr& rhs )
{
    LinearExpr diff = lhs - rhs;
    return mk_atom( Atom{ std::move( diff.terms ), op, -diff.constant } );
}

Formula mk_not( Formula f )
{
    return Formula{ std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::Not, {}, {}, { std::move( f ) } } ) };
}

Formula mk_and( std::vector< Formula > fs )
{
    if ( fs.empty() )
        return mk_true();
    if ( fs.size() == 1 )
        return fs.front();
    return Formula{ std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::And, {}, {}, std::move( fs ) } ) };
}

Formula mk_or( std::vector< Formula > fs )
{
    if ( fs.empty() )
        return mk_false();
    if ( fs.size() == 1 )
        return fs.front();
    return Formula{ std::make_shared< const Formula::Node >( Formula::Node{ Formula::Kind::Or, {}, {}, std::move( fs ) } ) };
}

Formula mk_and( std::initializer_list< Formula > fs ) { return mk_and( std::vector< Formula >( fs ) ); }
Formula mk_or( std::initializer_list< Formula > fs ) { return mk_or( std::vector< Formula >( fs ) ); }

Formula mk_implies( Formula a, Formula b )
{
    return Formula{ std::make_shared< const Formula::Node >(
            Formula::Node{ Formula::Kind::Implies, {}, {}, { std::move( a ), std::move( b ) } } ) };
}

Formula mk_iff( Formula a, Formula b )
{
    return Formula{ std::make_shared< const Formula::Node >(
            Formula::Node{ Formula::Kind::Iff, {}, {}, { std::move( a ), std::move( b ) } } ) };
}

// ---------------------------------------------------------------------------
// Substitution

namespace
{

template < typename Fn >
Formula rebuild( const Formula& f, Fn&& leaf )
{
    switch ( f.kind() )
    {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Var:
    case Formula::Kind::Atom: return leaf( f );
    case Formula::Kind::Not: return mk_not( rebuild( f.children()[ 0 ], leaf ) );
    case Formula::Kind::Implies:
        return mk_implies( rebuild( f.children()[ 0 ], leaf ), rebuild( f.children()[ 1 ], leaf ) );
    case Formula::Kind::Iff: return mk_iff( rebuild( f.children()[ 0 ], leaf ), rebuild( f.children()[ 1 ], leaf ) );
    case Formula::Kind::And:
    case Formula::Kind::Or:
    {
        std::vector< Formula > kids;
        kids.reserve( f.children().size() );
        for ( const auto& k : f.children() )
            kids.push_back( rebuild( k, leaf ) );
        return f.kind() == Formula::Kind::And ? mk_and( std::move( kids ) ) : mk_or( std::move( kids ) );
    }
    }
    return f;
}

Formula substitute_leaf( const Formula& f, const Binding& binding )
{
    if ( f.kind() == Formula::Kind::Var )
    {
        auto it = binding.find( f.var().name );
        if ( it == binding.end() )
            return f;
        return std::visit(
                [ & ]( const auto& r ) -> Formula {
                    using R = std::decay_t< decltype( r ) >;
                    if constexpr ( std::is_same_v< R, Value > )
                    {
                        if ( !r.is_bool() )
                            throw SubstitutionError( "Boolean variable '" + f.var().name + "' bound to a number" );
                        return mk_const( r.as_bool() );
                    }
                    else if constexpr ( std::is_same_v< R, Variable > )
                    {
                        if ( r.sort != Sort::Bool )
                            throw SubstitutionError( "Boolean variable '" + f.var().name + "' renamed to non-Boolean '" +
                                                     r.name + "'" );
                        return mk_bool( r );
                    }
                    else
                        return r;
                },
                it->second );
    }

    const Atom& a = f.atom();
    Atom out{ {}, a.op, a.rhs };
    bool changed = false;
    for ( const auto& t : a.terms )
    {
        auto it = binding.find( t.var.name );
        if ( it == binding.end() )
        {
            out.terms.push_back( t );
            continue;
        }
        changed = true;
        if ( const auto* v = std::get_if< Value >( &it->second ) )
        {
            if ( v->is_bool() )
                throw SubstitutionError( "arithmetic variable '" + t.var.name + "' bound to a Boolean" );
            if ( t.var.sort == Sort::Int && denominator( v->as_rational() ) != 1 )
                throw SubstitutionError( "integer variable '" + t.var.name + "' bound to " + to_string( *v ) );
            out.rhs -= t.coef * v->as_rational();
        }
        else if ( const auto* w = std::get_if< Variable >( &it->second ) )
        {
            if ( w->sort != t.var.sort )
                throw SubstitutionError( "variable '" + t.var.name + "' renamed across sorts to '" + w->name + "'" );
            out.terms.push_back( Term{ *w, t.coef } );
        }
        else
            throw SubstitutionError( "arithmetic variable '" + t.var.name + "' bound to a formula" );
    }
    return changed ? mk_atom( std::move( out ) ) : f;
}

} // namespace

Formula substitute( const Formula& f, const Binding& binding )
{
    if ( binding.empty() )
        return f;
    return rebuild( f, [ & ]( const Formula& leaf ) { return substitute_leaf( leaf, binding ); } );
}

Formula substitute( const Formula& f, const Model& values )
{
    Binding b;
    for ( const auto& [ name, v ] : values )
        b.emplace( name, v );
    return substitute( f, b );
}

Variable primed( const Variable& v ) { return Variable{ v.name + "'", v.sort, VarKind::Primed }; }

Variable unprimed( const Variable& v )
{
    if ( v.kind != VarKind::Primed || v.name.empty() || v.name.back() != '\'' )
        return v;
    return Variable{ v.name.substr( 0, v.name.size() - 1 ), v.sort, VarKind::State };
}

Formula prime( const Formula& f, const std::vector< Variable >& state )
{
    Binding b;
    for ( const auto& v : state )
        b.emplace( v.name, primed( v ) );
    return substitute( f, b );
}

Variable state_copy( const Variable& v, const std::string& tag )
{
    return Variable{ v.name + "@" + tag, v.sort, VarKind::Auxiliary };
}

Formula copy_state( const Formula& f, const std::vector< Variable >& state, const std::string& tag )
{
    Binding b;
    for ( const auto& v : state )
        b.emplace( v.name, state_copy( v, tag ) );
    return substitute( f, b );
}

// ---------------------------------------------------------------------------
// Evaluation and simplification

namespace
{

const Value& lookup( const Model& model, const Variable& v )
{
    auto it = model.find( v.name );
    if ( it == model.end() )
        throw Error( "no value for variable '" + v.name + "'" );
    return it->second;
}

} // namespace

bool evaluate( const Formula& f, const Model& model )
{
    switch ( f.kind() )
    {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Var: return lookup( model, f.var() ).as_bool();
    case Formula::Kind::Atom:
    {
        Rational sum = 0;
        for ( const auto& t : f.atom().terms )
            sum += t.coef * lookup( model, t.var ).as_rational();
        return compare( sum, f.atom().op, f.atom().rhs );
    }
    case Formula::Kind::Not: return !evaluate( f.children()[ 0 ], model );
    case Formula::Kind::And:
        return std::all_of( f.children().begin(), f.children().end(), [ & ]( const Formula& k ) { return evaluate( k, model ); } );
    case Formula::Kind::Or:
        return std::any_of( f.children().begin(), f.children().end(), [ & ]( const Formula& k ) { return evaluate( k, model ); } );
    case Formula::Kind::Implies: return !evaluate( f.children()[ 0 ], model ) || evaluate( f.children()[ 1 ], model );
    case Formula::Kind::Iff: return evaluate( f.children()[ 0 ], model ) == evaluate( f.children()[ 1 ], model );
    }
    return false;
}

Formula simplify( const Formula& f )
{
    switch ( f.kind() )
    {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Var: return f;
    case Formula::Kind::Atom:
        if ( f.atom().is_ground() )
            return mk_const( compare( Rational{ 0 }, f.atom().op, f.atom().rhs ) );
        return f;
    case Formula::Kind::Not:
    {
        Formula k = simplify( f.children()[ 0 ] );
        if ( k.is_true() )
            return mk_false();
        if ( k.is_false() )
            return mk_true();
        if ( k.kind() == Formula::Kind::Not )
            return k.children()[ 0 ];
        return mk_not( k );
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    {
        const bool is_and = f.kind() == Formula::Kind::And;
        std::vector< Formula > kids;
        for ( const auto& c : f.children() )
        {
            Formula k = simplify( c );
            if ( is_and ? k.is_false() : k.is_true() )
                return k;
            if ( is_and ? k.is_true() : k.is_false() )
                continue;
            if ( k.kind() == f.kind() )
                kids.insert( kids.end(), k.children().begin(), k.children().end() );
            else
                kids.push_back( std::move( k ) );
        }
        return is_and ? mk_and( std::move( kids ) ) : mk_or( std::move( kids ) );
    }
    case Formula::Kind::Implies:
    {
        Formula a = simplify( f.children()[ 0 ] );
        Formula b = simplify( f.children()[ 1 ] );
        if ( a.is_false() || b.is_true() )
            return mk_true();
        if ( a.is_true() )
            return b;
        if ( b.is_false() )
            return simplify( mk_not( a ) );
        return mk_implies( a, b );
    }
    case Formula::Kind::Iff:
    {
        Formula a = simplify( f.children()[ 0 ] );
        Formula b = simplify( f.children()[ 1 ] );
        if ( a.is_true() )
            return b;
        if ( b.is_true() )
            return a;
        if ( a.is_false() )
            return simplify( mk_not( b ) );
        if ( b.is_false() )
            return simplify( mk_not( a ) );
        return mk_iff( a, b );
    }
    }
    return f;
}

namespace
{

void collect( const Formula& f, std::vector< Variable >& out, std::set< std::string >& seen )
{
    switch ( f.kind() )
    {
    case Formula::Kind::Var:
        if ( seen.insert( f.var().name ).second )
            out.push_back( f.var() );
        return;
    case Formula::Kind::Atom:
        for ( const auto& t : f.atom().terms )
            if ( seen.insert( t.var.name ).second )
                out.push_back( t.var );
        return;
    default:
        for ( const auto& k : f.children() )
            collect( k, out, seen );
    }
}

} // namespace

std::vector< Variable > free_variables( const Formula& f )
{
    std::vector< Variable > out;
    std::set< std::string > seen;
    collect( f, out, seen );
    return out;
}

std::vector< Variable > free_variables( const std::vector< Formula >& fs )
{
    std::vector< Variable > out;
    std::set< std::string > seen;
    for ( const auto& f : fs )
        collect( f, out, seen );
    return out;
}

bool is_propositional( const Formula& f )
{
    if ( f.kind() == Formula::Kind::Atom )
        return f.atom().is_ground();
    return std::all_of( f.children().begin(), f.children().end(), []( const Formula& k ) { return is_propositional( k ); } );
}

// ---------------------------------------------------------------------------
// Rendering

namespace
{

void render_terms( std::ostream& os, const std::vector< Term >& terms, bool negated )
{
    bool first = true;
    for ( const auto& t : terms )
    {
        const Rational c = negated ? Rational{ -t.coef } : t.coef;
        if ( !first )
            os << " + ";
        first = false;
        if ( c != 1 )
            os << to_string( c ) << "*";
        os << t.var.name;
    }
}

bool is_connective( const Formula& f )
{
    switch ( f.kind() )
    {
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: return true;
    default: return false;
    }
}

void render( std::ostream& os, const Formula& f );

void render_child( std::ostream& os, const Formula& f, bool parens_for_atoms = false )
{
    const bool parens = is_connective( f ) || ( parens_for_atoms && f.kind() == Formula::Kind::Atom );
    if ( parens )
        os << "(";
    render( os, f );
    if ( parens )
        os << ")";
}

void render( std::ostream& os, const Formula& f )
{
    switch ( f.kind() )
    {
    case Formula::Kind::True: os << "true"; return;
    case Formula::Kind::False: os << "false"; return;
    case Formula::Kind::Var: os << f.var().name; return;
    case Formula::Kind::Atom: os << to_string( f.atom() ); return;
    case Formula::Kind::Not:
        os << "!";
        render_child( os, f.children()[ 0 ], true );
        return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    {
        const char* sep = f.kind() == Formula::Kind::And ? " && " : " || ";
        bool first = true;
        for ( const auto& k : f.children() )
        {
            if ( !first )
                os << sep;
            first = false;
            render_child( os, k );
        }
        return;
    }
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
        render_child( os, f.children()[ 0 ] );
        os << ( f.kind() == Formula::Kind::Implies ? " => " : " <=> " );
        render_child( os, f.children()[ 1 ] );
        return;
    }
}

} // namespace

std::string to_string( const Atom& a )
{
    std::vector< Term > left, right;
    for ( const auto& t : a.terms )
        ( t.coef > 0 ? left : right ).push_back( t );

    std::ostringstream os;
    if ( left.empty() )
        os << "0";
    else
        render_terms( os, left, false );
    os << " " << to_string( a.op ) << " ";
    if ( right.empty() )
        os << to_string( a.rhs );
    else
    {
        render_terms( os, right, true );
        if ( a.rhs > 0 )
            os << " + " << to_string( a.rhs );
        else if ( a.rhs < 0 )
            os << " - " << to_string( Rational{ -a.rhs } );
    }
    return os.str();
}

std::string to_string( const Formula& f )
{
    std::ostringstream os;
    render( os, f );
    return os.str();
}

std::ostream& operator<<( std::ostream& os, const Formula& f ) { return os << to_string( f ); }

} // namespace disjinv
