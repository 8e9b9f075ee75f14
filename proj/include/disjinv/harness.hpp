#pragma once

#include "disjinv/automaton.hpp"
#include "disjinv/engine.hpp"
#include "disjinv/solver.hpp"
#include "disjinv/system.hpp"
#include "disjinv/template.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace disjinv
{

// Search-space restrictions the oracle applies, mirroring the engine's.
struct StructuralOptions
{
    bool symmetry = true;
    // BlockingClauses: every disjunct nonempty. Full: no disjunct inside the union of the others.
    Subsumption subsumption = Subsumption::BlockingClauses;
    bool disjoint = false;

    static StructuralOptions from( const EngineOptions& opts ) { return { opts.symmetry, opts.subsumption, opts.disjoint }; }
};

struct OracleReport
{
    // One representative per semantic class, inclusion-minimal among verified assignments.
    std::vector< TemplateAssignment > minimal;
    // Every assignment that passed the Hoare conditions and the structural restrictions.
    std::vector< TemplateAssignment > verified;
    std::size_t examined = 0;
    std::size_t regions = 0;   // feasible predicate truth vectors
    std::size_t queries = 0;   // solver queries spent on the region abstraction
};

// Exhaustive search over n x m templates. Each predicate truth vector ("region") is either
// inside or outside any candidate, so the Hoare conditions reduce to region-level facts computed
// once with the solver; minimal survivors are re-checked by entailment. Requires n*m <= 20.
OracleReport brute_force_minimal( const TransitionSystem& ts, const PredicateSet& preds, std::size_t n,
                                  const StructuralOptions& structure, const SolverConfig& cfg );

struct HoareVerdict
{
    enum class Status
    {
        Verified,
        Failed,
        Inconclusive
    };

    Status status = Status::Inconclusive;
    std::string condition; // initiation | consecution | postcondition, when not verified
    Model countermodel;
    std::string reason;

    [[nodiscard]] bool verified() const { return status == Status::Verified; }
};

// Three entailments on fresh sessions.
HoareVerdict check_hoare( const TransitionSystem& ts, const Formula& inv, const SolverConfig& cfg );
HoareVerdict check_hoare( const TransitionSystem& ts, const PredicateSet& preds, const DnfInvariant& inv,
                          const SolverConfig& cfg );

// Semantic relations decided by entailment; Unknown counts as false.
bool semantically_included( const Formula& a, const Formula& b, const SolverConfig& cfg );
bool semantically_equal( const Formula& a, const Formula& b, const SolverConfig& cfg );

struct Trace
{
    enum class End
    {
        Complete, // ran the requested number of steps
        Exited,   // loop guard became false
        Stuck     // guard holds but no successor exists
    };

    std::vector< Model > states; // sigma_0 .. sigma_k
    std::vector< Model > io;     // inputs and outputs of step t, for t < k
    End end = End::Complete;

    [[nodiscard]] std::size_t steps() const { return io.size(); }
};

std::string to_string( Trace::End end );

struct SimulationOptions
{
    std::size_t steps = 100;
    std::uint64_t seed = 1;
    // Bounds asserted on inputs and on initial values of unconstrained arithmetic state.
    std::int64_t bound = 1000000;
};

// Random concrete run: each step solves C && T with the current state fixed, steering the
// solver with seed-derived value hints that are dropped when they conflict.
Trace simulate( const TransitionSystem& ts, const SimulationOptions& opts, const SolverConfig& cfg );

// Nondeterministic membership: the set of automaton states consistent with the run never empties.
bool check_acceptance( const AbstractAutomaton& aut, const Trace& trace );

} // namespace disjinv
