#include "disjinv/report.hpp"

#include <algorithm>
#include <sstream>

namespace disjinv
{

std::string to_string( HoareVerdict::Status s )
{
    switch ( s )
    {
    case HoareVerdict::Status::Verified: return "verified";
    case HoareVerdict::Status::Failed: return "failed";
    case HoareVerdict::Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace
{

std::string outcome_name( InferenceOutcome::Kind k )
{
    switch ( k )
    {
    case InferenceOutcome::Kind::Invariant: return "invariant";
    case InferenceOutcome::Kind::NoSolution: return "no-solution";
    case InferenceOutcome::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

Json variables( const std::vector< Variable >& vs )
{
    Json a = Json::array();
    for ( const auto& v : vs )
        a.push_back( { { "name", v.name }, { "sort", to_string( v.sort ) } } );
    return a;
}

Json model_json( const Model& m )
{
    Json o = Json::object();
    for ( const auto& [ name, v ] : m )
        o[ name ] = to_string( v );
    return o;
}

Json invariant_json( const DnfInvariant& inv, const PredicateSet& preds )
{
    Json ds = Json::array();
    for ( std::size_t i = 0; i < inv.size(); ++i )
        ds.push_back( { { "predicates", inv.disjuncts[ i ] }, { "formula", to_string( inv.disjunct( preds, i ) ) } } );
    return { { "disjuncts", ds }, { "formula", to_string( inv.to_formula( preds ) ) } };
}

Json stats_json( const EngineStats& s )
{
    return { { "iterations", s.iterations },
             { "counterexamples", s.counterexamples },
             { "descent_rounds", s.descent_rounds },
             { "blocking_clauses", s.blocking_clauses },
             { "theory_queries", s.theory_queries },
             { "store_queries", s.store_queries },
             { "final_n", s.final_n },
             { "minimality", to_string( s.minimality ) },
             { "non_canonical", { { "solver_seconds", s.solver_seconds }, { "wall_seconds", s.wall_seconds } } } };
}

Json automaton_json( const AbstractAutomaton& aut )
{
    Json states = Json::array();
    for ( std::size_t i = 0; i < aut.size(); ++i )
        states.push_back(
                { { "id", "q" + std::to_string( i ) }, { "formula", to_string( aut.states[ i ] ) }, { "initial", aut.initial[ i ] } } );
    Json edges = Json::array();
    for ( const auto& e : aut.edges )
        edges.push_back( { { "from", "q" + std::to_string( e.from ) },
                           { "to", "q" + std::to_string( e.to ) },
                           { "guard", to_string( e.guard.formula ) },
                           { "rows", e.guard.rows },
                           { "inconclusive", e.guard.inconclusive } } );
    Json io = Json::array();
    for ( const auto& p : aut.io_preds )
        io.push_back( to_string( p ) );
    return { { "states", states }, { "edges", edges }, { "io_predicates", io } };
}

Json trace_json( const Trace& t )
{
    Json states = Json::array(), io = Json::array();
    for ( const auto& s : t.states )
        states.push_back( model_json( s ) );
    for ( const auto& s : t.io )
        io.push_back( model_json( s ) );
    return { { "states", states }, { "io", io }, { "steps", t.steps() }, { "end", to_string( t.end ) } };
}

} // namespace

Json build_report( const ReportInput& in )
{
    Json r = Json::object();
    r[ "schema" ] = report_schema;
    r[ "mode" ] = in.mode;
    if ( in.system )
    {
        const auto& ts = *in.system;
        r[ "system" ] = { { "name", ts.name },
                          { "state", variables( ts.state ) },
                          { "inputs", variables( ts.inputs ) },
                          { "outputs", variables( ts.outputs ) },
                          { "init", to_string( ts.init ) },
                          { "guard", to_string( ts.guard ) },
                          { "trans", to_string( ts.trans ) },
                          { "post", to_string( ts.post ) } };
    }
    Json preds = Json::array();
    for ( const auto& p : in.preds )
        preds.push_back( to_string( p ) );
    r[ "predicates" ] = preds;
    r[ "options" ] = in.options;

    std::vector< std::string > warnings = in.warnings;
    std::optional< DnfInvariant > inv = in.invariant;
    if ( in.outcome )
    {
        const auto& o = *in.outcome;
        r[ "outcome" ] = outcome_name( o.kind );
        if ( !o.reason.empty() )
            r[ "reason" ] = o.reason;
        r[ "shape" ] = { { "n", o.shape.n }, { "m", o.shape.m } };
        r[ "stats" ] = stats_json( o.stats );
        if ( !inv && o.kind != InferenceOutcome::Kind::NoSolution )
            inv = o.invariant;
        warnings.insert( warnings.end(), o.warnings.begin(), o.warnings.end() );
    }
    if ( inv )
        r[ "invariant" ] = invariant_json( *inv, in.preds );
    if ( in.check )
    {
        Json c = { { "status", to_string( in.check->status ) } };
        if ( !in.check->condition.empty() )
            c[ "condition" ] = in.check->condition;
        if ( !in.check->countermodel.empty() )
            c[ "countermodel" ] = model_json( in.check->countermodel );
        if ( !in.check->reason.empty() )
            c[ "reason" ] = in.check->reason;
        r[ "check" ] = c;
    }
    if ( in.automaton )
    {
        r[ "automaton" ] = automaton_json( *in.automaton );
        warnings.insert( warnings.end(), in.automaton->warnings.begin(), in.automaton->warnings.end() );
    }
    if ( in.trace )
        r[ "trace" ] = trace_json( *in.trace );
    r[ "warnings" ] = warnings;
    return r;
}

std::string emit_json( const Json& report ) { return report.dump( 2 ) + "\n"; }

Json canonical( const Json& report )
{
    Json c = report;
    c.erase( "stats" );
    return c;
}

DnfInvariant invariant_from_json( const Json& report, std::size_t m )
{
    try
    {
        const Json& inv = report.contains( "invariant" ) ? report.at( "invariant" ) : report;
        DnfInvariant out;
        for ( const auto& d : inv.at( "disjuncts" ) )
        {
            auto row = d.at( "predicates" ).get< std::vector< std::size_t > >();
            for ( auto j : row )
                if ( j >= m )
                    throw Error( "invariant refers to predicate " + std::to_string( j ) + " of " + std::to_string( m ) );
            std::sort( row.begin(), row.end() );
            out.disjuncts.push_back( std::move( row ) );
        }
        if ( out.disjuncts.empty() )
            throw Error( "invariant has no disjuncts" );
        return out;
    }
    catch ( const Json::exception& e )
    {
        throw Error( std::string{ "malformed invariant document: " } + e.what() );
    }
}

namespace
{

std::string dot_escape( const std::string& s )
{
    std::string out;
    for ( char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string emit_dot( const AbstractAutomaton& aut, const std::string& name )
{
    std::ostringstream o;
    o << "digraph \"" << dot_escape( name ) << "\" {\n";
    o << "  rankdir=LR;\n";
    o << "  node [shape=circle];\n";
    o << "  __start [shape=point, label=\"\"];\n";
    for ( std::size_t i = 0; i < aut.size(); ++i )
        o << "  q" << i << " [label=\"q" << i << "\\n" << dot_escape( to_string( aut.states[ i ] ) ) << "\"];\n";
    for ( std::size_t i = 0; i < aut.size(); ++i )
        if ( aut.initial[ i ] )
            o << "  __start -> q" << i << ";\n";
    for ( const auto& e : aut.edges )
        o << "  q" << e.from << " -> q" << e.to << " [label=\"" << dot_escape( to_string( e.guard.formula ) ) << "\"];\n";
    o << "}\n";
    return o.str();
}

std::string emit_text( const Json& r )
{
    std::ostringstream o;
    if ( r.contains( "system" ) )
        o << "system: " << r[ "system" ][ "name" ].get< std::string >() << "\n";
    o << "predicates: " << r[ "predicates" ].size() << "\n";
    const auto preds = r[ "predicates" ];
    for ( std::size_t j = 0; j < preds.size(); ++j )
        o << "  p" << j << ": " << preds[ j ].get< std::string >() << "\n";
    if ( r.contains( "outcome" ) )
    {
        o << "outcome: " << r[ "outcome" ].get< std::string >();
        if ( r.contains( "reason" ) )
            o << " (" << r[ "reason" ].get< std::string >() << ")";
        o << "\n";
    }
    if ( r.contains( "invariant" ) )
    {
        const auto& ds = r[ "invariant" ][ "disjuncts" ];
        o << "invariant (" << ds.size() << " disjunct" << ( ds.size() == 1 ? "" : "s" ) << "):\n";
        for ( std::size_t i = 0; i < ds.size(); ++i )
            o << "  q" << i << ": " << ds[ i ][ "formula" ].get< std::string >() << "\n";
    }
    if ( r.contains( "stats" ) )
    {
        const auto& s = r[ "stats" ];
        o << "minimality: " << s[ "minimality" ].get< std::string >() << "\n";
        o << "iterations: " << s[ "iterations" ] << ", counterexamples: " << s[ "counterexamples" ]
          << ", descent rounds: " << s[ "descent_rounds" ] << ", final n: " << s[ "final_n" ] << "\n";
        o << "time: " << s[ "non_canonical" ][ "wall_seconds" ].get< double >() << " s (solver "
          << s[ "non_canonical" ][ "solver_seconds" ].get< double >() << " s)\n";
    }
    if ( r.contains( "check" ) )
    {
        const auto& c = r[ "check" ];
        o << "check: " << c[ "status" ].get< std::string >();
        if ( c.contains( "condition" ) )
            o << " (" << c[ "condition" ].get< std::string >() << ")";
        o << "\n";
        if ( c.contains( "countermodel" ) )
            for ( const auto& [ k, v ] : c[ "countermodel" ].items() )
                o << "  " << k << " = " << v.get< std::string >() << "\n";
        if ( c.contains( "reason" ) )
            o << "  " << c[ "reason" ].get< std::string >() << "\n";
    }
    if ( r.contains( "automaton" ) )
    {
        const auto& a = r[ "automaton" ];
        o << "automaton: " << a[ "states" ].size() << " states, " << a[ "edges" ].size() << " edges\n";
        for ( const auto& s : a[ "states" ] )
            o << "  " << s[ "id" ].get< std::string >() << ( s[ "initial" ].get< bool >() ? " (initial)" : "" ) << ": "
              << s[ "formula" ].get< std::string >() << "\n";
        for ( const auto& e : a[ "edges" ] )
            o << "  " << e[ "from" ].get< std::string >() << " -> " << e[ "to" ].get< std::string >() << " [ "
              << e[ "guard" ].get< std::string >() << " ]\n";
    }
    if ( r.contains( "trace" ) )
    {
        const auto& t = r[ "trace" ];
        o << "trace: " << t[ "steps" ] << " steps, " << t[ "end" ].get< std::string >() << "\n";
        const auto& states = t[ "states" ];
        const auto& io = t[ "io" ];
        for ( std::size_t k = 0; k < states.size(); ++k )
        {
            o << "  " << k << ":";
            for ( const auto& [ name, v ] : states[ k ].items() )
                o << " " << name << "=" << v.get< std::string >();
            if ( k < io.size() )
            {
                o << " |";
                for ( const auto& [ name, v ] : io[ k ].items() )
                    o << " " << name << "=" << v.get< std::string >();
            }
            o << "\n";
        }
        if ( r.contains( "containment" ) )
            o << "invariant containment: " << ( r[ "containment" ].get< bool >() ? "ok" : "violated" ) << "\n";
    }
    for ( const auto& w : r[ "warnings" ] )
        o << "warning: " << w.get< std::string >() << "\n";
    return o.str();
}

} // namespace disjinv
