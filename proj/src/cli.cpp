#include "disjinv/cli.hpp"

#include "disjinv/automaton.hpp"
#include "disjinv/engine.hpp"
#include "disjinv/frontend.hpp"
#include "disjinv/harness.hpp"
#include "disjinv/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace disjinv
{

namespace
{

class UsageError : public Error
{
public:
    using Error::Error;
};

struct RunConfig
{
    std::string mode;
    std::string input;
    EngineOptions engine;
    SolverConfig solver = SolverConfig::from_env();
    EdgeCoverMode edge_cover;
    std::vector< std::string > emit{ "text" };
    std::string out_path;

    std::string invariant_path;
    bool harvest = false;
    bool closure = true;
    std::size_t steps = 100;
    std::optional< std::uint64_t > seed;
};

EdgeCoverMode parse_edge_cover( const std::string& s )
{
    if ( s == "conj" )
        return EdgeCoverMode::conjunction();
    if ( s.rfind( "dnf:", 0 ) == 0 )
    {
        std::size_t k = 0;
        try
        {
            k = std::stoul( s.substr( 4 ) );
        }
        catch ( const std::exception& )
        {
        }
        if ( k > 0 )
            return EdgeCoverMode::dnf( k );
    }
    throw UsageError( "--edge-cover expects conj or dnf:K with K >= 1, got '" + s + "'" );
}

Json options_json( const RunConfig& rc )
{
    const auto& e = rc.engine;
    Json o = { { "n", e.n },
               { "minimize", e.minimize },
               { "symmetry", e.symmetry },
               { "subsumption", to_string( e.subsumption ) },
               { "descent", to_string( e.descent ) },
               { "disjoint", e.disjoint },
               { "logic", to_string( rc.solver.logic ) },
               { "max_iterations", e.max_iterations } };
    if ( e.grow )
        o[ "grow" ] = e.max_n;
    if ( rc.mode == "abstract" )
        o[ "edge_cover" ] = to_string( rc.edge_cover );
    if ( rc.mode == "simulate" )
        o[ "steps" ] = rc.steps;
    if ( rc.seed )
        o[ "seed" ] = *rc.seed;
    return o;
}

int outcome_code( InferenceOutcome::Kind k )
{
    switch ( k )
    {
    case InferenceOutcome::Kind::Invariant: return ExitOk;
    case InferenceOutcome::Kind::NoSolution: return ExitNegative;
    case InferenceOutcome::Kind::Inconclusive: return ExitInconclusive;
    }
    return ExitInconclusive;
}

DnfInvariant load_invariant( const std::string& path, std::size_t m )
{
    std::ifstream in( path );
    if ( !in )
        throw UsageError( "cannot read invariant file '" + path + "'" );
    Json doc;
    try
    {
        doc = Json::parse( in );
    }
    catch ( const Json::exception& e )
    {
        throw UsageError( "invariant file '" + path + "' is not JSON: " + e.what() );
    }
    return invariant_from_json( doc, m );
}

std::string extension( const std::string& format ) { return format == "text" ? ".txt" : "." + format; }

void write_outputs( const RunConfig& rc, const Json& report, const std::string& dot, std::ostream& out )
{
    for ( const auto& format : rc.emit )
    {
        std::string text;
        if ( format == "json" )
            text = emit_json( report );
        else if ( format == "dot" )
            text = dot;
        else
            text = emit_text( report );

        if ( rc.out_path.empty() )
        {
            out << text;
            continue;
        }
        std::filesystem::path p = rc.out_path;
        if ( rc.emit.size() > 1 )
            p.replace_extension( extension( format ) );
        std::ofstream f( p );
        if ( !f )
            throw UsageError( "cannot write '" + p.string() + "'" );
        f << text;
    }
}

int run( RunConfig& rc, std::ostream& out, std::ostream& err )
{
    const bool wants_dot = std::find( rc.emit.begin(), rc.emit.end(), "dot" ) != rc.emit.end();
    if ( wants_dot && rc.mode != "abstract" )
        throw UsageError( "--emit dot is only available for abstract" );
    if ( rc.mode == "check" && rc.invariant_path.empty() )
        throw UsageError( "check needs --invariant FILE" );

    rc.engine.solver = rc.solver;
    if ( rc.seed )
    {
        rc.engine.seed = *rc.seed;
        rc.engine.solver.seed = rc.seed;
    }

    const TransitionSystem ts = load_system( rc.input );
    PredicateSet preds = ts.state_preds;
    if ( rc.harvest )
        preds = harvest_predicates( ts, HarvestOptions{ rc.closure } );
    if ( preds.empty() && rc.mode != "simulate" )
        throw NoPredicates();

    ReportInput ri;
    ri.system = &ts;
    ri.preds = preds;
    ri.mode = rc.mode;
    ri.options = options_json( rc );

    int code = ExitOk;
    std::optional< DnfInvariant > inv;
    if ( !rc.invariant_path.empty() )
    {
        inv = load_invariant( rc.invariant_path, preds.size() );
        ri.invariant = inv;
    }
    else if ( rc.mode == "infer" || rc.mode == "abstract" )
    {
        ri.outcome = infer( ts, preds, rc.engine );
        code = outcome_code( ri.outcome->kind );
        if ( ri.outcome->found() )
            inv = ri.outcome->invariant;
    }

    std::optional< AbstractAutomaton > aut;
    std::optional< Trace > trace;
    if ( rc.mode == "check" )
    {
        ri.check = check_hoare( ts, preds, *inv, rc.solver );
        code = ri.check->verified() ? ExitOk
               : ri.check->status == HoareVerdict::Status::Failed ? ExitNegative
                                                                   : ExitInconclusive;
    }
    else if ( rc.mode == "abstract" && inv )
    {
        CoverConfig cc;
        cc.solver = rc.solver;
        cc.mode = rc.edge_cover;
        cc.engine = rc.engine;
        std::vector< Formula > io = ts.io_preds;
        if ( rc.harvest || io.empty() )
            io = harvest_io_predicates( ts, HarvestOptions{ rc.closure } );
        aut = build_automaton( ts, preds, *inv, io, cc );
        ri.automaton = &*aut;
    }
    else if ( rc.mode == "simulate" )
    {
        SimulationOptions so;
        so.steps = rc.steps;
        if ( rc.seed )
            so.seed = *rc.seed;
        trace = simulate( ts, so, rc.solver );
        ri.trace = &*trace;
    }
    else if ( rc.mode == "abstract" )
        err << "disjinv: no invariant, so no automaton\n";

    Json report = build_report( ri );
    if ( trace && inv )
    {
        const Formula f = inv->to_formula( preds );
        bool contained = true;
        for ( const auto& s : trace->states )
            contained = contained && evaluate( f, s );
        report[ "containment" ] = contained;
        if ( !contained )
            code = ExitNegative;
    }
    write_outputs( rc, report, aut ? emit_dot( *aut, ts.name ) : std::string{}, out );
    for ( const auto& w : report[ "warnings" ] )
        err << "disjinv: warning: " << w.get< std::string >() << "\n";
    return code;
}

} // namespace

int run_cli( const std::vector< std::string >& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Minimal disjunctive inductive invariants and abstract automata", "disjinv" };
    RunConfig rc;

    std::string symmetry = "on", subsumption = "blocking", descent = "prop", edge_cover = "conj", logic = "auto";
    std::string solver_cmd;
    std::optional< double > timeout;
    std::size_t grow = 0;

    app.add_option( "mode", rc.mode, "infer | abstract | check | simulate" )
            ->required()
            ->check( CLI::IsMember( { "infer", "abstract", "check", "simulate" } ) );
    app.add_option( "file", rc.input, "transition system (.ts) or node (.node, .lus)" )->required();
    app.add_option( "--n", rc.engine.n, "disjuncts in the template" )->check( CLI::PositiveNumber );
    app.add_option( "--grow", grow, "grow n up to MAXN while the invariant shrinks" )->check( CLI::PositiveNumber );
    app.add_option( "--grow-timeout", rc.engine.grow_timeout, "seconds for --grow, 0 = none" );
    app.add_flag( "--minimize", rc.engine.minimize, "descend to an inclusion-minimal invariant" );
    app.add_flag( "--disjoint", rc.engine.disjoint, "force pairwise disjoint disjuncts" );
    app.add_option( "--symmetry", symmetry, "row ordering constraints" )->check( CLI::IsMember( { "on", "off" } ) );
    app.add_option( "--subsumption", subsumption )->check( CLI::IsMember( { "off", "blocking", "full" } ) );
    app.add_option( "--descent", descent )->check( CLI::IsMember( { "prop", "semantic" } ) );
    app.add_option( "--edge-cover", edge_cover, "conj or dnf:K" );
    app.add_option( "--solver", solver_cmd, "SMT-LIB2 solver command (env DISJINV_SOLVER)" );
    app.add_option( "--logic", logic )->check( CLI::IsMember( { "lia", "lra", "lira", "auto" } ) );
    app.add_option( "--timeout", timeout, "per-query solver timeout in seconds (env DISJINV_TIMEOUT)" );
    app.add_option( "--max-iters", rc.engine.max_iterations, "refinement iterations per run, 0 = 2^(n*m)" );
    app.add_option( "--seed", rc.seed );
    app.add_option( "--emit", rc.emit, "dot,json,text" )
            ->delimiter( ',' )
            ->check( CLI::IsMember( { "dot", "json", "text" } ) );
    app.add_option( "--out", rc.out_path, "output file (one per format when several are emitted)" );
    app.add_option( "--steps", rc.steps, "simulate: number of steps" );
    app.add_option( "--invariant", rc.invariant_path, "invariant JSON (a report from infer)" );
    app.add_flag( "--harvest", rc.harvest, "harvest predicates from the system instead of its annotations" );
    app.add_flag( "--no-closure{false}", rc.closure, "harvest atoms only, without their comparison families" );

    try
    {
        std::vector< std::string > reversed( args.rbegin(), args.rend() );
        app.parse( reversed );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e, out, err );
        return code == 0 ? ExitOk : ExitUsage;
    }

    try
    {
        rc.engine.symmetry = symmetry == "on";
        rc.engine.subsumption = subsumption == "off"  ? Subsumption::Off
                                : subsumption == "full" ? Subsumption::Full
                                                        : Subsumption::BlockingClauses;
        rc.engine.descent = descent == "semantic" ? Descent::SemanticWitness : Descent::Propositional;
        rc.edge_cover = parse_edge_cover( edge_cover );
        rc.solver.logic = logic == "lia"    ? Logic::QF_LIA
                          : logic == "lra"  ? Logic::QF_LRA
                          : logic == "lira" ? Logic::QF_LIRA
                                            : Logic::Auto;
        if ( !solver_cmd.empty() )
            rc.solver.command = solver_cmd;
        if ( timeout )
            rc.solver.timeout = *timeout;
        if ( grow > 0 )
        {
            rc.engine.grow = true;
            rc.engine.max_n = grow;
            rc.engine.minimize = true;
        }
        return run( rc, out, err );
    }
    catch ( const NoPredicates& e )
    {
        err << "disjinv: " << e.what() << " (annotate `predicate:` lines or pass --harvest)\n";
        return ExitUsage;
    }
    catch ( const SolverSpawnError& e )
    {
        err << "disjinv: " << e.what() << "\n";
        return ExitUsage;
    }
    catch ( const SolverError& e )
    {
        err << "disjinv: solver: " << e.what() << "\n";
        return ExitInconclusive;
    }
    catch ( const SoundnessGateFailure& e )
    {
        err << "disjinv: internal error: " << e.what() << "\n";
        return ExitInconclusive;
    }
    catch ( const Error& e )
    {
        err << "disjinv: " << e.what() << "\n";
        return ExitUsage;
    }
    catch ( const std::exception& e )
    {
        err << "disjinv: internal error: " << e.what() << "\n";
        return ExitInconclusive;
    }
}

} // namespace disjinv
