#pragma once

#include "disjinv/engine.hpp"
#include "disjinv/solver.hpp"
#include "disjinv/system.hpp"
#include "disjinv/template.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace disjinv
{

struct EdgeCoverMode
{
    enum class Kind
    {
        Conjunction,
        Dnf
    };

    Kind kind = Kind::Conjunction;
    std::size_t k = 1; // disjuncts, Dnf only

    static EdgeCoverMode conjunction() { return {}; }
    static EdgeCoverMode dnf( std::size_t k ) { return { Kind::Dnf, k }; }
};

std::string to_string( const EdgeCoverMode& mode );

struct CoverConfig
{
    SolverConfig solver;
    EdgeCoverMode mode;
    // Options for the Dnf template search (n is taken from mode.k).
    EngineOptions engine;
};

// Guard in DNF over the I/O predicates; one empty row is `true`.
struct Guard
{
    std::vector< std::vector< std::size_t > > rows;
    Formula formula = mk_true();
    bool inconclusive = false; // a solver query gave up; the guard falls back to `true`
};

struct AutomatonEdge
{
    std::size_t from = 0;
    std::size_t to = 0;
    Guard guard;
};

struct AbstractAutomaton
{
    std::vector< Formula > states; // I_i
    std::vector< bool > initial;
    std::vector< AutomatonEdge > edges; // ordered by (from, to)
    std::vector< Formula > io_preds;
    std::vector< std::string > warnings;

    [[nodiscard]] const AutomatonEdge* edge( std::size_t from, std::size_t to ) const;
    [[nodiscard]] std::size_t size() const { return states.size(); }
};

// I_i && I_j[s'/s] && C && T, with state, primed state, inputs and outputs free.
Formula edge_body( const TransitionSystem& ts, const PredicateSet& preds, const DnfInvariant& inv, std::size_t i,
                   std::size_t j );

// Strongest conjunction of io_preds implied by the body, pruned of entailed conjuncts;
// nullopt when the body is unsatisfiable.
std::optional< Guard > cover_conjunction( const Formula& body, const std::vector< Formula >& io_preds,
                                          const SolverConfig& cfg );

// Inclusion-minimal k-disjunct DNF over io_preds implied by the body. Falls back to the
// conjunction cover (with a warning) when the search is inconclusive.
std::optional< Guard > cover_dnf( const Formula& body, const std::vector< Formula >& io_preds, std::size_t k,
                                  const CoverConfig& cfg, std::vector< std::string >* warnings = nullptr );

// Drops conjuncts entailed by the rest of their row and rows entailed by other rows.
Guard simplify_guard( const Guard& g, const std::vector< Formula >& io_preds, const SolverConfig& cfg );

// One state per disjunct. io_preds empty: harvested from the I/O atoms of the system.
AbstractAutomaton build_automaton( const TransitionSystem& ts, const PredicateSet& preds, const DnfInvariant& inv,
                                   std::vector< Formula > io_preds, const CoverConfig& cfg );

} // namespace disjinv
