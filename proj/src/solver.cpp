#include "disjinv/solver.hpp"

#include "backends.hpp"

#include <cstdlib>

namespace disjinv
{

std::string to_string( Logic logic )
{
    switch ( logic )
    {
    case Logic::Auto: return "auto";
    case Logic::QF_LIA: return "QF_LIA";
    case Logic::QF_LRA: return "QF_LRA";
    case Logic::QF_LIRA: return "QF_LIRA";
    }
    return "?";
}

SolverConfig SolverConfig::from_env()
{
    SolverConfig cfg;
    if ( const char* cmd = std::getenv( "DISJINV_SOLVER" ); cmd && *cmd )
        cfg.command = cmd;
    if ( const char* t = std::getenv( "DISJINV_TIMEOUT" ); t && *t )
        cfg.timeout = std::strtod( t, nullptr );
    return cfg;
}

Logic resolve_logic( Logic requested, const std::vector< Variable >& vars )
{
    if ( requested != Logic::Auto )
        return requested;
    bool has_int = false, has_real = false;
    for ( const auto& v : vars )
    {
        has_int = has_int || v.sort == Sort::Int;
        has_real = has_real || v.sort == Sort::Real;
    }
    if ( !has_real )
        return Logic::QF_LIA;
    return has_int ? Logic::QF_LIRA : Logic::QF_LRA;
}

Session::Session( const SolverConfig& cfg ) : _cfg{ cfg } {}

std::unique_ptr< Session > Session::open( const SolverConfig& cfg, const std::vector< Variable >& vars )
{
    std::unique_ptr< Session > s;
    if ( cfg.backend == Backend::InternalProp )
        s = detail::make_prop_session( cfg );
    else
        s = detail::make_smt_session( cfg, resolve_logic( cfg.logic, vars ) );
    for ( const auto& v : vars )
        s->declare( v );
    return s;
}

void Session::declare( const Variable& v )
{
    if ( auto it = _by_name.find( v.name ); it != _by_name.end() )
    {
        if ( it->second.sort != v.sort )
            throw UnsupportedSort( "variable '" + v.name + "' redeclared with a different sort" );
        return;
    }
    if ( depth() != 0 )
        throw SolverError( "declarations are only allowed at assertion depth 0" );
    do_declare( v );
    _by_name.emplace( v.name, v );
    _declared.push_back( v );
}

bool Session::is_declared( const std::string& name ) const { return _by_name.contains( name ); }

void Session::assert_formula( const Formula& f )
{
    for ( const auto& v : free_variables( f ) )
        if ( !is_declared( v.name ) )
            throw UndeclaredSolverVariable( "variable '" + v.name + "' is not declared in the session" );
    do_assert( f );
    if ( _cfg.verify_models )
        _stack.back().push_back( f );
}

void Session::push()
{
    do_push();
    _stack.emplace_back();
}

void Session::pop()
{
    if ( depth() == 0 )
        throw UnbalancedPop( "pop at assertion depth 0" );
    do_pop();
    _stack.pop_back();
}

SatResult Session::check()
{
    const auto start = std::chrono::steady_clock::now();
    SatResult res = do_check();
    _solver_time += std::chrono::steady_clock::now() - start;
    ++_queries;

    if ( res.is_sat() && _cfg.verify_models )
        for ( const auto& level : _stack )
            for ( const auto& f : level )
                if ( !evaluate( f, res.model ) )
                    throw SolverError( "solver model violates asserted formula " + to_string( f ) );
    return res;
}

Entailment check_entailment( const SolverConfig& cfg, const Formula& hyp, const Formula& concl )
{
    auto s = Session::open( cfg, free_variables( std::vector< Formula >{ hyp, concl } ) );
    s->assert_formula( hyp );
    s->assert_formula( mk_not( concl ) );
    auto res = s->check();
    switch ( res.status )
    {
    case SatResult::Status::Unsat: return Entailment{ Entailment::Status::Holds, {}, {} };
    case SatResult::Status::Sat: return Entailment{ Entailment::Status::Fails, std::move( res.model ), {} };
    case SatResult::Status::Unknown: break;
    }
    return Entailment{ Entailment::Status::Unknown, {}, res.reason };
}

} // namespace disjinv
