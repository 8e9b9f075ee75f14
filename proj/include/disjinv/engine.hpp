#pragma once

#include "disjinv/solver.hpp"
#include "disjinv/system.hpp"
#include "disjinv/template.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace disjinv
{

enum class Subsumption
{
    Off,
    BlockingClauses,
    Full
};

enum class Descent
{
    Propositional,
    SemanticWitness
};

// One of the three Hoare conjuncts of the verification condition.
enum class VcPart
{
    Init,
    Consecution,
    Post
};

std::string to_string( Subsumption s );
std::string to_string( Descent d );

struct EngineOptions
{
    std::size_t n = 2;
    bool minimize = false;

    bool grow = false;
    std::size_t max_n = 4;
    double grow_timeout = 0; // seconds, 0 = none

    bool symmetry = true;
    Subsumption subsumption = Subsumption::BlockingClauses;
    std::size_t blocking_cap = 3;        // largest predicate subset examined
    std::size_t blocking_budget = 20000; // theory queries spent on blocking clauses
    bool disjoint = false;
    Descent descent = Descent::Propositional;

    // Refinement iterations per run; 0 means the 2^{n*m} bound (capped at 1e6).
    std::size_t max_iterations = 0;
    std::uint64_t seed = 0;

    // Theory queries (counterexamples, blocking clauses, the soundness gate).
    SolverConfig solver;
    // Backend holding H. Unset: the internal propositional solver unless full subsumption or
    // semantic descent needs auxiliary theory variables.
    std::optional< Backend > store_backend;
    // Initial polarity of the internal store's decisions. True proposes specific candidates
    // first and makes the descent deterministic across seeds.
    SolverConfig::Phase store_phase = SolverConfig::Phase::True;

    // Test hook: drop one conjunct from the VC the loop refines against. The soundness gate
    // still checks all three.
    std::optional< VcPart > skip_conjunct;
    // Test hook: called with every candidate B the store proposes.
    std::function< void( const TemplateAssignment& ) > on_candidate;
};

class InvalidOptions : public Error
{
public:
    using Error::Error;
};

// Universally quantified constraint F over template Booleans and `quantified`.
struct VerificationCondition
{
    PredicateSet preds;
    TemplateShape shape;
    std::vector< Formula > conjuncts;
    std::vector< Variable > quantified;
    // The variables predicates range over (copied for auxiliary witnesses).
    std::vector< Variable > state;

    [[nodiscard]] Formula formula() const { return mk_and( conjuncts ); }
};

// F = (S => T) && (T && C && T_rel => T') && (T && !C => P), the last omitted when P is true.
VerificationCondition build_vc( const TransitionSystem& ts, const PredicateSet& preds, TemplateShape shape,
                                std::optional< VcPart > skip = std::nullopt );

// For i < j: !C_i || !C_j.
std::vector< Formula > disjointness_constraints( const PredicateSet& preds, TemplateShape shape );

// Minimal predicate-index subsets (size <= cap) whose conjunction is unsatisfiable.
struct BlockingSubsets
{
    std::vector< std::vector< std::size_t > > subsets;
    std::size_t queries = 0;
    bool budget_exceeded = false;
    bool unknown = false; // some query was inconclusive and treated as satisfiable
};
BlockingSubsets blocking_subsets( const PredicateSet& preds, std::size_t cap, std::size_t budget,
                                  const SolverConfig& cfg );

// H: a growing conjunction over template Booleans (and auxiliary theory variables).
struct ConstraintStore
{
    TemplateShape shape;
    std::vector< Formula > constraints;
    std::vector< Variable > aux;
    std::vector< Model > counterexamples;
    std::size_t iterations = 0;
    std::size_t blocking_clauses = 0;
    std::vector< std::string > warnings;

    [[nodiscard]] Formula formula() const { return mk_and( constraints ); }
};

// `state` names the variables auxiliary copies are made of (full subsumption).
ConstraintStore initial_store( const PredicateSet& preds, TemplateShape shape, const EngineOptions& opts,
                               const std::vector< Variable >& state );

enum class Minimality
{
    NotMinimized,
    Minimal,
    Unknown
};

std::string to_string( Minimality m );

struct EngineStats
{
    std::size_t iterations = 0;
    std::size_t counterexamples = 0;
    std::size_t descent_rounds = 0;
    std::size_t blocking_clauses = 0;
    std::size_t theory_queries = 0;
    std::size_t store_queries = 0;
    double solver_seconds = 0;
    double wall_seconds = 0;
    std::size_t final_n = 0;
    Minimality minimality = Minimality::NotMinimized;
};

struct InferenceOutcome
{
    enum class Kind
    {
        Invariant,
        NoSolution,
        Inconclusive
    };

    Kind kind = Kind::Inconclusive;
    // The invariant, or the best verified one so far when Inconclusive.
    std::optional< DnfInvariant > invariant;
    TemplateShape shape;
    EngineStats stats;
    std::string reason;
    std::vector< std::string > warnings;

    [[nodiscard]] bool found() const { return kind == Kind::Invariant; }
};

std::string to_string( InferenceOutcome::Kind k );

// Lazy refinement over an arbitrary VC. `gate` re-verifies accepted candidates independently and
// returns an empty string when they hold, "?<reason>" when undecided, or a failure description.
class RefinementLoop
{
public:
    using Gate = std::function< std::string( const DnfInvariant& ) >;

    RefinementLoop( VerificationCondition vc, ConstraintStore store, const EngineOptions& opts, Gate gate );
    ~RefinementLoop();
    RefinementLoop( const RefinementLoop& ) = delete;
    RefinementLoop& operator=( const RefinementLoop& ) = delete;

    struct Result
    {
        InferenceOutcome::Kind kind;
        TemplateAssignment b;
        std::string reason;
    };

    // Query H, refute, refine, until a candidate survives, H is exhausted, or a limit hits.
    Result run();

    // Extra universally quantified conjunct of F.
    void add_vc_conjunct( const Formula& f );
    // Extra constraint on H, possibly over new auxiliary variables.
    void add_store_constraint( const Formula& f, const std::vector< Variable >& aux = {} );

    // Inclusion (T => prev) plus strictness for one descent step.
    void require_strictly_below( const TemplateAssignment& prev, const Formula& prev_formula );
    // Inclusion plus, in semantic mode, a strictness witness; used across shapes by grow.
    void require_below( const Formula& prev_formula, bool strict_witness );

    [[nodiscard]] const VerificationCondition& vc() const { return _vc; }
    [[nodiscard]] const ConstraintStore& store() const { return _store; }
    [[nodiscard]] std::size_t iteration_bound() const;
    void collect( EngineStats& stats ) const;

private:
    VerificationCondition _vc;
    ConstraintStore _store;
    EngineOptions _opts;
    Gate _gate;
    std::unique_ptr< Session > _h;
    std::unique_ptr< Session > _theory;
    std::size_t _witnesses = 0;
};

// Backend used for H under `opts`; throws InvalidOptions on inconsistent requests.
Backend store_backend( const EngineOptions& opts );

// S => I, I && C && T => I', I && !C => P, each on a fresh session. Empty string when all hold.
std::string hoare_gate( const TransitionSystem& ts, const Formula& inv, const SolverConfig& cfg );

InferenceOutcome infer( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts );
InferenceOutcome minimize( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts,
                           const DnfInvariant& start );
InferenceOutcome grow_n( const TransitionSystem& ts, const PredicateSet& preds, const EngineOptions& opts );

// Descends from `start` (a B accepted by `loop`) until H is exhausted.
InferenceOutcome descend( RefinementLoop& loop, const TemplateAssignment& start, const EngineOptions& opts );

} // namespace disjinv
