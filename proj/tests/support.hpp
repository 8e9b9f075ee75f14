#pragma once

#include "disjinv/formula.hpp"
#include "disjinv/solver.hpp"
#include "disjinv/template.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace disjinv::test
{

// Solver used by the suites: the configured command (or DISJINV_SOLVER), with every model
// re-evaluated against the asserted store.
inline SolverConfig solver_config()
{
    SolverConfig cfg;
    cfg.command = DISJINV_TEST_SOLVER;
    if ( const char* cmd = std::getenv( "DISJINV_SOLVER" ); cmd && *cmd )
        cfg.command = cmd;
    cfg.verify_models = true;
    return cfg;
}

inline SolverConfig prop_config()
{
    SolverConfig cfg = solver_config();
    cfg.backend = Backend::InternalProp;
    return cfg;
}

inline std::string model_path( const std::string& file ) { return std::string( DISJINV_MODELS_DIR ) + "/" + file; }

inline std::string read_model( const std::string& file )
{
    std::ifstream in( model_path( file ) );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Variable int_var( const std::string& name, VarKind kind = VarKind::State ) { return { name, Sort::Int, kind }; }
inline Variable real_var( const std::string& name, VarKind kind = VarKind::State ) { return { name, Sort::Real, kind }; }
inline Variable bool_var( const std::string& name, VarKind kind = VarKind::State ) { return { name, Sort::Bool, kind }; }

// x op c
inline Formula cmp( const Variable& x, CmpOp op, int c ) { return mk_cmp( LinearExpr::of( x ), op, LinearExpr::of( Rational{ c } ) ); }
// x op y
inline Formula cmp( const Variable& x, CmpOp op, const Variable& y ) { return mk_cmp( LinearExpr::of( x ), op, LinearExpr::of( y ) ); }

// a <=> b, decided on a fresh session.
inline bool equivalent( const SolverConfig& cfg, const Formula& a, const Formula& b )
{
    return check_entailment( cfg, mk_true(), mk_iff( a, b ) ).holds();
}

// Random formulas over a fixed pool of variables, for homomorphism and round-trip properties.
class FormulaGen
{
public:
    explicit FormulaGen( std::uint64_t seed ) : _rng{ seed } {}

    std::vector< Variable > ints{ int_var( "x" ), int_var( "y" ), int_var( "z" ) };
    std::vector< Variable > bools{ bool_var( "p" ), bool_var( "q" ) };

    Formula atom()
    {
        LinearExpr e;
        for ( const auto& v : ints )
            if ( coin() )
                e.add_term( v, Rational{ pick( -3, 3 ) } );
        const CmpOp op = static_cast< CmpOp >( pick( 0, 5 ) );
        return mk_cmp( e, op, LinearExpr::of( Rational{ pick( -5, 5 ), pick( 1, 3 ) } ) );
    }

    Formula formula( int depth )
    {
        if ( depth == 0 || pick( 0, 3 ) == 0 )
        {
            switch ( pick( 0, 3 ) )
            {
            case 0: return mk_bool( bools[ pick( 0, 1 ) ] );
            case 1: return coin() ? mk_true() : mk_false();
            default: return atom();
            }
        }
        switch ( pick( 0, 4 ) )
        {
        case 0: return mk_not( formula( depth - 1 ) );
        case 1: return mk_and( { formula( depth - 1 ), formula( depth - 1 ), formula( depth - 1 ) } );
        case 2: return mk_or( { formula( depth - 1 ), formula( depth - 1 ) } );
        case 3: return mk_implies( formula( depth - 1 ), formula( depth - 1 ) );
        default: return mk_iff( formula( depth - 1 ), formula( depth - 1 ) );
        }
    }

    Model model()
    {
        Model m;
        for ( const auto& v : ints )
            m.emplace( v.name, Value{ Rational{ pick( -4, 4 ) } } );
        for ( const auto& v : bools )
            m.emplace( v.name, Value{ coin() } );
        return m;
    }

    int pick( int lo, int hi ) { return std::uniform_int_distribution< int >( lo, hi )( _rng ); }
    bool coin() { return pick( 0, 1 ) == 1; }
    std::mt19937_64& rng() { return _rng; }

private:
    std::mt19937_64 _rng;
};

} // namespace disjinv::test
