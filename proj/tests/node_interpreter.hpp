#pragma once

#include "disjinv/frontend.hpp"

#include <map>
#include <random>
#include <stdexcept>

namespace disjinv::test
{

// Direct stream semantics of a node, independent of the transition-system translation.
class NodeInterpreter
{
public:
    explicit NodeInterpreter( const NodeProgram& np ) : _np{ np } {}

    // Value of `pre x` at the first instant when no initializer guards it.
    void set_uninitialized( const std::string& flow, Value v ) { _memory[ flow ] = std::move( v ); }

    // Evaluates one instant; returns the value of every flow.
    std::map< std::string, Value > step( const std::map< std::string, Value >& inputs )
    {
        _inputs = &inputs;
        _current.clear();
        for ( const auto& eq : _np.equations )
            flow_value( eq.lhs );
        std::map< std::string, Value > out = _current;
        for ( const auto& [ k, v ] : inputs )
            out[ k ] = v;
        _first = false;
        _memory = out;
        return out;
    }

    // Value the state variable of `pf` holds before the upcoming step.
    [[nodiscard]] Value state_value( const PreFlow& pf ) const
    {
        if ( _first && pf.init )
            return *pf.init;
        return _memory.at( pf.flow );
    }

    [[nodiscard]] bool first() const { return _first; }

private:
    Value flow_value( const std::string& name )
    {
        if ( auto it = _inputs->find( name ); it != _inputs->end() )
            return it->second;
        if ( auto it = _current.find( name ); it != _current.end() )
            return it->second;
        const Value v = eval( *_np.equation( name )->rhs );
        _current[ name ] = v;
        return v;
    }

    Rational num( const Expr& e ) { return eval( e ).as_rational(); }
    bool boolean( const Expr& e ) { return eval( e ).as_bool(); }

    Value eval( const Expr& e )
    {
        switch ( e.kind )
        {
        case Expr::Kind::Number: return Value{ e.number };
        case Expr::Kind::BoolLit: return Value{ e.boolean };
        case Expr::Kind::Ident: return flow_value( e.name );
        case Expr::Kind::Pre: return _memory.at( e.name );
        case Expr::Kind::Arrow: return _first ? eval( *e.kids[ 0 ] ) : eval( *e.kids[ 1 ] );
        case Expr::Kind::Neg: return Value{ Rational{ -num( *e.kids[ 0 ] ) } };
        case Expr::Kind::Add: return Value{ Rational{ num( *e.kids[ 0 ] ) + num( *e.kids[ 1 ] ) } };
        case Expr::Kind::Sub: return Value{ Rational{ num( *e.kids[ 0 ] ) - num( *e.kids[ 1 ] ) } };
        case Expr::Kind::Mul: return Value{ Rational{ num( *e.kids[ 0 ] ) * num( *e.kids[ 1 ] ) } };
        case Expr::Kind::Div: return Value{ Rational{ num( *e.kids[ 0 ] ) / num( *e.kids[ 1 ] ) } };
        case Expr::Kind::Not: return Value{ !boolean( *e.kids[ 0 ] ) };
        case Expr::Kind::And:
        {
            bool r = true;
            for ( const auto& k : e.kids )
                r = boolean( *k ) && r;
            return Value{ r };
        }
        case Expr::Kind::Or:
        {
            bool r = false;
            for ( const auto& k : e.kids )
                r = boolean( *k ) || r;
            return Value{ r };
        }
        case Expr::Kind::Implies: return Value{ !boolean( *e.kids[ 0 ] ) || boolean( *e.kids[ 1 ] ) };
        case Expr::Kind::Iff: return Value{ boolean( *e.kids[ 0 ] ) == boolean( *e.kids[ 1 ] ) };
        case Expr::Kind::Cmp:
        {
            const Value a = eval( *e.kids[ 0 ] ), b = eval( *e.kids[ 1 ] );
            if ( a.is_bool() )
                return Value{ e.op == CmpOp::Eq ? a == b : a != b };
            return Value{ compare( a.as_rational(), e.op, b.as_rational() ) };
        }
        case Expr::Kind::Ite: return boolean( *e.kids[ 0 ] ) ? eval( *e.kids[ 1 ] ) : eval( *e.kids[ 2 ] );
        }
        throw std::logic_error( "unreachable" );
    }

    const NodeProgram& _np;
    const std::map< std::string, Value >* _inputs = nullptr;
    std::map< std::string, Value > _current;
    std::map< std::string, Value > _memory;
    bool _first = true;
};

} // namespace disjinv::test
