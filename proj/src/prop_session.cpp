#include "backends.hpp"

#include "disjinv/sat.hpp"

#include <map>
#include <unordered_map>

namespace disjinv::detail
{

namespace
{

using sat::Lit;

// Purely propositional session: Tseitin encoding into the internal CDCL solver. Each push
// level owns a selector literal; clauses asserted at that level are guarded by it and pop
// disables the selector permanently.
class PropSession final : public Session
{
public:
    explicit PropSession( const SolverConfig& cfg ) : Session{ cfg }, _solver{ cfg.seed.value_or( 0 ), static_cast< sat::Phase >( cfg.phase ) }
    {
        _true = Lit::pos( _solver.new_var() );
        _solver.add_clause( { _true } );
    }

protected:
    void do_declare( const Variable& v ) override
    {
        if ( v.sort != Sort::Bool )
            throw UnsupportedSort( "the propositional backend cannot declare " + to_string( v.sort ) + " variable '" +
                                   v.name + "'" );
        _vars.emplace( v.name, _solver.new_var() );
    }

    void do_assert( const Formula& f ) override
    {
        const Formula g = simplify( f );
        if ( !is_propositional( g ) )
            throw UnsupportedSort( "the propositional backend received an arithmetic atom" );
        std::vector< Lit > clause{ encode( g ) };
        if ( !_selectors.empty() )
            clause.push_back( ~_selectors.back() );
        _solver.add_clause( std::move( clause ) );
    }

    void do_push() override { _selectors.push_back( Lit::pos( _solver.new_var() ) ); }

    void do_pop() override
    {
        _solver.add_clause( { ~_selectors.back() } );
        _selectors.pop_back();
    }

    SatResult do_check() override
    {
        if ( _solver.solve( _selectors ) == sat::Result::Unsat )
            return SatResult{ SatResult::Status::Unsat, {}, {} };
        SatResult res{ SatResult::Status::Sat, {}, {} };
        for ( const auto& [ name, v ] : _vars )
            res.model.emplace( name, Value{ _solver.model_value( v ) } );
        return res;
    }

private:
    Lit fresh() { return Lit::pos( _solver.new_var() ); }

    // Returns a literal equivalent to f; definitions are added unguarded since each one only
    // constrains its own fresh variable.
    Lit encode( const Formula& f )
    {
        switch ( f.kind() )
        {
        case Formula::Kind::True: return _true;
        case Formula::Kind::False: return ~_true;
        case Formula::Kind::Var: return Lit::pos( _vars.at( f.var().name ) );
        case Formula::Kind::Atom:
            return compare( Rational{ 0 }, f.atom().op, f.atom().rhs ) ? _true : ~_true;
        case Formula::Kind::Not: return ~encode( f.children()[ 0 ] );
        default: break;
        }

        if ( auto it = _cache.find( f.id() ); it != _cache.end() )
            return it->second.second;

        std::vector< Lit > kids;
        for ( const auto& k : f.children() )
            kids.push_back( encode( k ) );
        const Lit t = fresh();
        switch ( f.kind() )
        {
        case Formula::Kind::And:
        {
            std::vector< Lit > big{ t };
            for ( auto k : kids )
            {
                _solver.add_clause( { ~t, k } );
                big.push_back( ~k );
            }
            _solver.add_clause( std::move( big ) );
            break;
        }
        case Formula::Kind::Or:
        {
            std::vector< Lit > big{ ~t };
            for ( auto k : kids )
            {
                _solver.add_clause( { t, ~k } );
                big.push_back( k );
            }
            _solver.add_clause( std::move( big ) );
            break;
        }
        case Formula::Kind::Implies:
            _solver.add_clause( { ~t, ~kids[ 0 ], kids[ 1 ] } );
            _solver.add_clause( { t, kids[ 0 ] } );
            _solver.add_clause( { t, ~kids[ 1 ] } );
            break;
        case Formula::Kind::Iff:
            _solver.add_clause( { ~t, ~kids[ 0 ], kids[ 1 ] } );
            _solver.add_clause( { ~t, kids[ 0 ], ~kids[ 1 ] } );
            _solver.add_clause( { t, kids[ 0 ], kids[ 1 ] } );
            _solver.add_clause( { t, ~kids[ 0 ], ~kids[ 1 ] } );
            break;
        default: break;
        }
        _cache.emplace( f.id(), std::make_pair( f, t ) );
        return t;
    }

    sat::Solver _solver;
    Lit _true;
    std::map< std::string, std::uint32_t > _vars;
    std::vector< Lit > _selectors;
    // Keeps the formula alive so its node address cannot be reused by another formula.
    std::unordered_map< const void*, std::pair< Formula, Lit > > _cache;
};

} // namespace

std::unique_ptr< Session > make_prop_session( const SolverConfig& cfg ) { return std::make_unique< PropSession >( cfg ); }

} // namespace disjinv::detail
