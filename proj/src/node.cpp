#include "disjinv/frontend.hpp"

#include "syntax.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace disjinv
{

const NodeEquation* NodeProgram::equation( const std::string& flow ) const
{
    for ( const auto& eq : equations )
        if ( eq.lhs == flow )
            return &eq;
    return nullptr;
}

const Variable* NodeProgram::flow( const std::string& name ) const
{
    for ( const auto* group : { &inputs, &outputs, &locals } )
        for ( const auto& v : *group )
            if ( v.name == name )
                return &v;
    return nullptr;
}

namespace
{

using detail::Token;
using detail::TokenStream;

Sort parse_sort( TokenStream& ts )
{
    const Token& tok = ts.peek();
    const std::string name = tok.kind == Token::Kind::Ident ? tok.text : "";
    if ( name == "int" )
        return ts.next(), Sort::Int;
    if ( name == "real" )
        return ts.next(), Sort::Real;
    if ( name == "bool" )
        return ts.next(), Sort::Bool;
    ts.fail( "expected a sort (int, real or bool)" );
}

// a, b : int ; c : bool   (separators `;`, optional trailing one)
void parse_decls( TokenStream& ts, VarKind kind, std::vector< Variable >& out, std::set< std::string >& seen,
                  const std::function< bool() >& at_close )
{
    while ( !at_close() )
    {
        std::vector< Token > names;
        do
        {
            names.push_back( ts.peek() );
            ts.expect_ident();
        } while ( ts.accept( "," ) );
        ts.expect( ":" );
        const Sort sort = parse_sort( ts );
        for ( const auto& tok : names )
        {
            if ( !seen.insert( tok.text ).second )
                throw DuplicateDefinition( "flow '" + tok.text + "' declared twice", tok.line, tok.column );
            out.push_back( Variable{ tok.text, sort, kind } );
        }
        if ( !ts.accept( ";" ) )
            break;
    }
}

void walk( const Expr& e, const std::function< void( const Expr& ) >& visit )
{
    visit( e );
    for ( const auto& k : e.kids )
        walk( *k, visit );
}

// Flows read at the current instant, i.e. outside `pre`.
void instant_deps( const Expr& e, std::vector< const Expr* >& out )
{
    if ( e.kind == Expr::Kind::Pre )
        return;
    if ( e.kind == Expr::Kind::Ident )
        out.push_back( &e );
    for ( const auto& k : e.kids )
        instant_deps( *k, out );
}

void check_references( const NodeProgram& np, const Expr& root )
{
    walk( root, [ & ]( const Expr& e ) {
        if ( e.kind != Expr::Kind::Ident && e.kind != Expr::Kind::Pre )
            return;
        if ( e.primed )
            throw SyntaxError( "primes are not part of the node language", e.line, e.column );
        if ( !np.flow( e.name ) )
            throw UndeclaredVariable( "undeclared flow '" + e.name + "'", e.line, e.column );
    } );
}

void check_causality( const NodeProgram& np )
{
    enum class Mark
    {
        White,
        Grey,
        Black
    };
    std::map< std::string, Mark > mark;
    std::vector< std::string > path;

    std::function< void( const NodeEquation& ) > visit = [ & ]( const NodeEquation& eq ) {
        mark[ eq.lhs ] = Mark::Grey;
        path.push_back( eq.lhs );
        std::vector< const Expr* > deps;
        instant_deps( *eq.rhs, deps );
        for ( const Expr* d : deps )
        {
            const NodeEquation* next = np.equation( d->name );
            if ( !next )
                continue; // input
            if ( mark[ d->name ] == Mark::Grey )
            {
                std::string cycle;
                auto from = std::find( path.begin(), path.end(), d->name );
                for ( auto it = from; it != path.end(); ++it )
                    cycle += *it + " -> ";
                throw InstantaneousCycle( "instantaneous cycle " + cycle + d->name, d->line, d->column );
            }
            if ( mark[ d->name ] == Mark::White )
                visit( *next );
        }
        path.pop_back();
        mark[ eq.lhs ] = Mark::Black;
    };
    for ( const auto& eq : np.equations )
        if ( mark[ eq.lhs ] == Mark::White )
            visit( eq );
}

struct Case
{
    std::vector< Formula > guard;
    LinearExpr value;
};

using Cases = std::vector< Case >;

std::vector< Formula > joined( const std::vector< Formula >& a, const std::vector< Formula >& b )
{
    std::vector< Formula > out = a;
    out.insert( out.end(), b.begin(), b.end() );
    return out;
}

Formula defines( const LinearExpr& target, const Cases& cases )
{
    if ( cases.size() == 1 && cases[ 0 ].guard.empty() )
        return mk_cmp( target, CmpOp::Eq, cases[ 0 ].value );
    std::vector< Formula > alts;
    for ( const auto& c : cases )
        alts.push_back( mk_and( joined( c.guard, { mk_cmp( target, CmpOp::Eq, c.value ) } ) ) );
    return mk_or( std::move( alts ) );
}

class Translator
{
public:
    explicit Translator( const NodeProgram& np ) : _np{ np }
    {
        for ( const auto* group : { &np.inputs, &np.outputs, &np.locals } )
            for ( const auto& v : *group )
                _names.insert( v.name );
    }

    TransitionSystem run()
    {
        _ts.name = _np.name;
        _ts.inputs = _np.inputs;
        _ts.outputs = _np.outputs;

        for ( const auto& eq : _np.equations )
            collect_pre( *eq.rhs );
        for ( const auto* group : { &_np.predicates, &_np.io_predicates } )
            for ( const auto& p : *group )
                walk( *p, [ & ]( const Expr& e ) {
                    if ( e.kind == Expr::Kind::Pre && !find_any( e.name ) )
                        add_pre( e.name, std::nullopt );
                    if ( e.kind == Expr::Kind::Arrow )
                        throw UnsupportedInit( "initializers are not allowed in annotations", e.line, e.column );
                } );
        std::vector< Formula > trans;
        for ( const auto& out : _np.outputs )
        {
            const Expr& rhs = *_np.equation( out.name )->rhs;
            trans.push_back( out.sort == Sort::Bool ? mk_iff( mk_bool( out ), compile_bool( rhs ) )
                                                    : defines( LinearExpr::of( out ), compile_arith( rhs ) ) );
        }
        // locals nobody reads are still type-checked
        for ( const auto& local : _np.locals )
        {
            if ( local.sort == Sort::Bool )
                compile_local_bool( local );
            else
                compile_local_arith( local );
        }

        std::vector< Formula > init;
        for ( const auto& pf : _ts.pre_flows )
        {
            const Variable next = primed( pf.state );
            const Variable& src = *_np.flow( pf.flow );
            if ( src.sort == Sort::Bool )
                trans.push_back( mk_iff( mk_bool( next ), flow_bool( src ) ) );
            else
                trans.push_back( defines( LinearExpr::of( next ), flow_arith( src ) ) );
            if ( pf.init )
            {
                if ( pf.init->is_bool() )
                    init.push_back( pf.init->as_bool() ? mk_bool( pf.state ) : mk_not( mk_bool( pf.state ) ) );
                else
                    init.push_back( mk_cmp( LinearExpr::of( pf.state ), CmpOp::Eq, LinearExpr::of( pf.init->as_rational() ) ) );
            }
        }
        if ( _first )
        {
            init.push_back( mk_bool( *_first ) );
            trans.push_back( mk_not( mk_bool( primed( *_first ) ) ) );
        }
        _ts.trans = mk_and( std::move( trans ) );
        _ts.init = mk_and( std::move( init ) );
        for ( const auto& pf : _ts.pre_flows )
            _ts.state.push_back( pf.state );
        if ( _first )
            _ts.state.push_back( *_first );

        for ( const auto& p : _np.predicates )
            _ts.state_preds.push_back( annotation( *p, true ) );
        for ( const auto& p : _np.io_predicates )
            _ts.io_preds.push_back( annotation( *p, false ) );
        return std::move( _ts );
    }

private:
    const PreFlow* find_any( const std::string& flow ) const
    {
        for ( const auto& pf : _ts.pre_flows )
            if ( pf.flow == flow )
                return &pf;
        return nullptr;
    }

    const PreFlow* find( const std::string& flow, const std::optional< Value >& init ) const
    {
        for ( const auto& pf : _ts.pre_flows )
            if ( pf.flow == flow && pf.init == init )
                return &pf;
        return nullptr;
    }

    void add_pre( const std::string& flow, std::optional< Value > init )
    {
        if ( find( flow, init ) )
            return;
        std::string name = "pre_" + flow;
        for ( int k = 2; _names.contains( name ); ++k )
            name = "pre_" + flow + "_" + std::to_string( k );
        _names.insert( name );
        _ts.pre_flows.push_back( PreFlow{ Variable{ name, _np.flow( flow )->sort, VarKind::State }, flow, std::move( init ) } );
    }

    // Key of a `pre x` or `c -> pre x` occurrence.
    std::pair< std::string, std::optional< Value > > pre_key( const Expr& e ) const
    {
        if ( e.kind == Expr::Kind::Pre )
            return { e.name, std::nullopt };
        const Expr& lhs = *e.kids[ 0 ];
        const Expr& rhs = *e.kids[ 1 ];
        auto lit = detail::literal_value( lhs );
        if ( !lit )
            throw UnsupportedInit( "initializer is not a constant", lhs.line, lhs.column );
        const Sort sort = _np.flow( rhs.name )->sort;
        const bool ok = sort == Sort::Bool ? lit->is_bool()
                                           : !lit->is_bool() && ( sort == Sort::Real || denominator( lit->as_rational() ) == 1 );
        if ( !ok )
            throw SortMismatch( "initializer does not fit the sort of '" + rhs.name + "'", lhs.line, lhs.column );
        return { rhs.name, lit };
    }

    void collect_pre( const Expr& e )
    {
        if ( e.kind == Expr::Kind::Arrow && e.kids[ 1 ]->kind == Expr::Kind::Pre )
        {
            auto [ flow, init ] = pre_key( e );
            add_pre( flow, init );
            return;
        }
        if ( e.kind == Expr::Kind::Arrow && !detail::literal_value( *e.kids[ 0 ] ) )
            throw UnsupportedInit( "initializer is not a constant", e.kids[ 0 ]->line, e.kids[ 0 ]->column );
        if ( e.kind == Expr::Kind::Pre )
            add_pre( e.name, std::nullopt );
        for ( const auto& k : e.kids )
            collect_pre( *k );
    }

    static bool direct_init( const Expr& e ) { return e.kind == Expr::Kind::Arrow && e.kids[ 1 ]->kind == Expr::Kind::Pre; }

    // True exactly at the first instant; only created for general `c -> e` arrows.
    Formula first()
    {
        if ( !_first )
        {
            std::string name = "first";
            for ( int k = 2; _names.contains( name ); ++k )
                name = "first_" + std::to_string( k );
            _names.insert( name );
            _first = Variable{ name, Sort::Bool, VarKind::State };
        }
        return mk_bool( *_first );
    }

    Variable state_of( const Expr& e ) const
    {
        auto [ flow, init ] = pre_key( e );
        if ( const PreFlow* pf = find( flow, init ); pf )
            return pf->state;
        if ( const PreFlow* pf = find_any( flow ); pf ) // annotations
            return pf->state;
        throw Error( "internal: no state variable for pre " + flow );
    }

    bool is_bool( const Expr& e ) const
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
        case Expr::Kind::Ident:
        case Expr::Kind::Pre: return _np.flow( e.name )->sort == Sort::Bool;
        case Expr::Kind::Arrow: return is_bool( *e.kids[ 1 ] );
        case Expr::Kind::Ite: return is_bool( *e.kids[ 1 ] );
        default: return false;
        }
    }

    Cases flow_arith( const Variable& v )
    {
        if ( v.kind == VarKind::Auxiliary )
            return compile_local_arith( v );
        return { Case{ {}, LinearExpr::of( v ) } };
    }

    Formula flow_bool( const Variable& v )
    {
        if ( v.kind == VarKind::Auxiliary )
            return compile_local_bool( v );
        return mk_bool( v );
    }

    const Cases& compile_local_arith( const Variable& v )
    {
        if ( auto it = _local_arith.find( v.name ); it != _local_arith.end() )
            return it->second;
        Cases c = compile_arith( *_np.equation( v.name )->rhs );
        return _local_arith.emplace( v.name, std::move( c ) ).first->second;
    }

    const Formula& compile_local_bool( const Variable& v )
    {
        if ( auto it = _local_bool.find( v.name ); it != _local_bool.end() )
            return it->second;
        Formula f = compile_bool( *_np.equation( v.name )->rhs );
        return _local_bool.emplace( v.name, std::move( f ) ).first->second;
    }

    Cases combine( const Cases& a, const Cases& b, const std::function< LinearExpr( const LinearExpr&, const LinearExpr& ) >& op )
    {
        Cases out;
        for ( const auto& x : a )
            for ( const auto& y : b )
                out.push_back( Case{ joined( x.guard, y.guard ), op( x.value, y.value ) } );
        return out;
    }

    static std::optional< Rational > constant_of( const Cases& c )
    {
        if ( c.size() == 1 && c[ 0 ].guard.empty() && c[ 0 ].value.is_constant() )
            return c[ 0 ].value.constant;
        return std::nullopt;
    }

    Cases compile_arith( const Expr& e )
    {
        if ( is_bool( e ) )
            throw SortMismatch( "formula used as a number", e.line, e.column );
        switch ( e.kind )
        {
        case Expr::Kind::Number: return { Case{ {}, LinearExpr::of( e.number ) } };
        case Expr::Kind::Ident: return flow_arith( *_np.flow( e.name ) );
        case Expr::Kind::Arrow:
            if ( !direct_init( e ) )
            {
                const Formula f = first();
                Cases out;
                for ( auto& k : compile_arith( *e.kids[ 0 ] ) )
                    out.push_back( Case{ joined( { f }, k.guard ), std::move( k.value ) } );
                for ( auto& k : compile_arith( *e.kids[ 1 ] ) )
                    out.push_back( Case{ joined( { mk_not( f ) }, k.guard ), std::move( k.value ) } );
                return out;
            }
            [[fallthrough]];
        case Expr::Kind::Pre: return { Case{ {}, LinearExpr::of( state_of( e ) ) } };
        case Expr::Kind::Neg:
        {
            Cases c = compile_arith( *e.kids[ 0 ] );
            for ( auto& k : c )
                k.value *= Rational{ -1 };
            return c;
        }
        case Expr::Kind::Add:
            return combine( compile_arith( *e.kids[ 0 ] ), compile_arith( *e.kids[ 1 ] ),
                            []( const LinearExpr& a, const LinearExpr& b ) { return a + b; } );
        case Expr::Kind::Sub:
            return combine( compile_arith( *e.kids[ 0 ] ), compile_arith( *e.kids[ 1 ] ),
                            []( const LinearExpr& a, const LinearExpr& b ) { return a - b; } );
        case Expr::Kind::Mul:
        {
            Cases a = compile_arith( *e.kids[ 0 ] );
            Cases b = compile_arith( *e.kids[ 1 ] );
            auto ca = constant_of( a ), cb = constant_of( b );
            if ( !ca && !cb )
                throw NonlinearAtom( "product of two non-constant terms", e.line, e.column );
            Cases& scaled = ca ? b : a;
            for ( auto& k : scaled )
                k.value *= ca ? *ca : *cb;
            return scaled;
        }
        case Expr::Kind::Div:
        {
            Cases a = compile_arith( *e.kids[ 0 ] );
            auto cb = constant_of( compile_arith( *e.kids[ 1 ] ) );
            if ( !cb )
                throw NonlinearAtom( "division by a non-constant term", e.line, e.column );
            if ( *cb == 0 )
                throw SyntaxError( "division by zero", e.line, e.column );
            for ( auto& k : a )
                k.value *= Rational{ 1 } / *cb;
            return a;
        }
        case Expr::Kind::Ite:
        {
            const Formula g = compile_bool( *e.kids[ 0 ] );
            Cases out;
            for ( auto& k : compile_arith( *e.kids[ 1 ] ) )
                out.push_back( Case{ joined( { g }, k.guard ), std::move( k.value ) } );
            const Formula ng = detail::negate_literal( g );
            for ( auto& k : compile_arith( *e.kids[ 2 ] ) )
                out.push_back( Case{ joined( { ng }, k.guard ), std::move( k.value ) } );
            return out;
        }
        default: throw SortMismatch( "formula used as a number", e.line, e.column );
        }
    }

    Formula compile_bool( const Expr& e )
    {
        auto kids = [ & ] {
            std::vector< Formula > out;
            for ( const auto& k : e.kids )
                out.push_back( compile_bool( *k ) );
            return out;
        };
        switch ( e.kind )
        {
        case Expr::Kind::BoolLit: return mk_const( e.boolean );
        case Expr::Kind::Ident:
        {
            const Variable& v = *_np.flow( e.name );
            if ( v.sort != Sort::Bool )
                throw SortMismatch( "'" + e.name + "' is " + to_string( v.sort ) + ", expected bool", e.line, e.column );
            return flow_bool( v );
        }
        case Expr::Kind::Arrow:
            if ( !direct_init( e ) )
            {
                const Formula f = first();
                return mk_or( { mk_and( { f, compile_bool( *e.kids[ 0 ] ) } ),
                                mk_and( { mk_not( f ), compile_bool( *e.kids[ 1 ] ) } ) } );
            }
            [[fallthrough]];
        case Expr::Kind::Pre:
        {
            const Variable s = state_of( e );
            if ( s.sort != Sort::Bool )
                throw SortMismatch( "number used as a formula", e.line, e.column );
            return mk_bool( s );
        }
        case Expr::Kind::Not: return mk_not( compile_bool( *e.kids[ 0 ] ) );
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
        case Expr::Kind::Ite:
        {
            auto k = kids();
            return mk_or( { mk_and( { k[ 0 ], k[ 1 ] } ), mk_and( { detail::negate_literal( k[ 0 ] ), k[ 2 ] } ) } );
        }
        case Expr::Kind::Cmp:
        {
            const Expr& l = *e.kids[ 0 ];
            const Expr& r = *e.kids[ 1 ];
            if ( is_bool( l ) != is_bool( r ) )
                throw SortMismatch( "comparison between bool and arithmetic operands", e.line, e.column );
            if ( is_bool( l ) )
            {
                if ( e.op != CmpOp::Eq && e.op != CmpOp::Ne )
                    throw SortMismatch( "ordering comparison on bool operands", e.line, e.column );
                const Formula eq = mk_iff( compile_bool( l ), compile_bool( r ) );
                return e.op == CmpOp::Eq ? eq : mk_not( eq );
            }
            const Cases a = compile_arith( l );
            const Cases b = compile_arith( r );
            std::vector< Formula > alts;
            for ( const auto& x : a )
                for ( const auto& y : b )
                    alts.push_back( mk_and( joined( joined( x.guard, y.guard ), { mk_cmp( x.value, e.op, y.value ) } ) ) );
            return mk_or( std::move( alts ) );
        }
        default: throw SortMismatch( "number used as a formula", e.line, e.column );
        }
    }

    Formula annotation( const Expr& e, bool state )
    {
        const Formula f = compile_bool( e );
        for ( const auto& v : free_variables( f ) )
        {
            const bool ok = state ? v.kind == VarKind::State : ( v.kind == VarKind::Input || v.kind == VarKind::Output );
            if ( !ok )
                throw ScopeError( std::string{ state ? "predicate" : "iopredicate" } + " mentions " + to_string( v.kind ) +
                                          " variable '" + v.name + "'",
                                  e.line, e.column );
        }
        return f;
    }

    const NodeProgram& _np;
    TransitionSystem _ts;
    std::set< std::string > _names;
    std::map< std::string, Cases > _local_arith;
    std::map< std::string, Formula > _local_bool;
    std::optional< Variable > _first;
};

} // namespace

NodeProgram parse_node( std::string_view text )
{
    TokenStream ts{ detail::tokenize( text ) };
    NodeProgram np;
    std::set< std::string > seen;

    ts.expect( "node" );
    np.name = ts.expect_ident();
    ts.expect( "(" );
    parse_decls( ts, VarKind::Input, np.inputs, seen, [ & ] { return ts.is( ")" ); } );
    ts.expect( ")" );
    ts.expect( "returns" );
    ts.expect( "(" );
    parse_decls( ts, VarKind::Output, np.outputs, seen, [ & ] { return ts.is( ")" ); } );
    ts.expect( ")" );
    ts.accept( ";" );
    if ( ts.accept( "var" ) )
        parse_decls( ts, VarKind::Auxiliary, np.locals, seen, [ & ] { return ts.is( "let" ); } );
    ts.expect( "let" );
    while ( !ts.is( "tel" ) )
    {
        const Token& head = ts.peek();
        NodeEquation eq;
        eq.line = head.line;
        eq.column = head.column;
        eq.lhs = ts.expect_ident();
        ts.expect( "=" );
        eq.rhs = ts.expression( true );
        ts.expect( ";" );

        const Variable* target = np.flow( eq.lhs );
        if ( !target )
            throw UndeclaredVariable( "equation for undeclared flow '" + eq.lhs + "'", eq.line, eq.column );
        if ( target->kind == VarKind::Input )
            throw ScopeError( "input '" + eq.lhs + "' cannot be defined", eq.line, eq.column );
        if ( np.equation( eq.lhs ) )
            throw DuplicateDefinition( "flow '" + eq.lhs + "' is defined twice", eq.line, eq.column );
        np.equations.push_back( std::move( eq ) );
    }
    ts.expect( "tel" );
    ts.accept( ";" );

    while ( !ts.at_end() )
    {
        const bool io = ts.is( "iopredicate" );
        if ( !io && !ts.is( "predicate" ) )
            ts.fail( "expected 'predicate:' or 'iopredicate:' after the node" );
        ts.next();
        ts.expect( ":" );
        ( io ? np.io_predicates : np.predicates ).push_back( ts.expression( true ) );
        ts.expect( ";" );
    }

    for ( const auto* group : { &np.outputs, &np.locals } )
        for ( const auto& v : *group )
            if ( !np.equation( v.name ) )
                throw SyntaxError( "flow '" + v.name + "' has no equation" );
    for ( const auto& eq : np.equations )
        check_references( np, *eq.rhs );
    for ( const auto* group : { &np.predicates, &np.io_predicates } )
        for ( const auto& p : *group )
            check_references( np, *p );
    check_causality( np );
    return np;
}

TransitionSystem node_to_transition_system( const NodeProgram& np ) { return Translator{ np }.run(); }

} // namespace disjinv
