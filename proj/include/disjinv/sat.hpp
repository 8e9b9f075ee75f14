#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace disjinv::sat
{

// Literal over variable v: 2v (positive) or 2v+1 (negative).
struct Lit
{
    std::uint32_t x = 0;

    static Lit pos( std::uint32_t v ) { return Lit{ 2 * v }; }
    static Lit neg( std::uint32_t v ) { return Lit{ 2 * v + 1 }; }

    [[nodiscard]] std::uint32_t var() const { return x >> 1; }
    [[nodiscard]] bool negative() const { return x & 1u; }
    Lit operator~() const { return Lit{ x ^ 1u }; }

    friend bool operator==( Lit, Lit ) = default;
    friend auto operator<=>( Lit, Lit ) = default;
};

enum class Result
{
    Sat,
    Unsat
};

// Small incremental CDCL solver: two watched literals, first-UIP learning, activity-based
// decisions with phase saving, and MiniSat-style solving under assumptions.
// Initial polarity of a decision variable before phase saving takes over.
enum class Phase
{
    Random,
    False,
    True
};

class Solver
{
public:
    explicit Solver( std::uint64_t seed = 0, Phase phase = Phase::Random )
            : _rng{ seed ? seed : 0x9e3779b97f4a7c15ull }, _initial_phase{ phase }
    {
    }

    std::uint32_t new_var();
    [[nodiscard]] std::size_t num_vars() const { return _assigns.size(); }

    // Adds a permanent clause. Returns false once the clause set is unsatisfiable at level 0.
    bool add_clause( std::vector< Lit > lits );

    Result solve( std::span< const Lit > assumptions = {} );

    // Value in the last satisfying assignment.
    [[nodiscard]] bool model_value( std::uint32_t v ) const { return _model.at( v ); }

    [[nodiscard]] std::size_t conflicts() const { return _conflicts; }

private:
    struct Clause
    {
        std::vector< Lit > lits;
        bool learnt = false;
    };

    static constexpr int kUndef = -1;
    static constexpr int kNoReason = -1;

    [[nodiscard]] int value( Lit p ) const
    {
        const int a = _assigns[ p.var() ];
        return a == kUndef ? kUndef : ( a ^ static_cast< int >( p.negative() ) );
    }
    [[nodiscard]] std::size_t decision_level() const { return _trail_lim.size(); }

    void enqueue( Lit p, int reason );
    int propagate();
    void analyze( int conflict, std::vector< Lit >& learnt, std::size_t& backtrack_level );
    void cancel_until( std::size_t level );
    void attach( int ci );
    void bump( std::uint32_t v );
    int pick_branch_var();
    std::uint64_t next_random();

    std::vector< Clause > _clauses;
    std::vector< std::vector< int > > _watches; // indexed by literal; clauses watching it
    std::vector< int > _assigns;
    std::vector< std::size_t > _level;
    std::vector< int > _reason;
    std::vector< char > _phase;
    std::vector< double > _activity;
    std::vector< char > _seen;
    std::vector< Lit > _trail;
    std::vector< std::size_t > _trail_lim;
    std::size_t _qhead = 0;
    double _var_inc = 1.0;
    bool _ok = true;
    std::vector< bool > _model;
    std::size_t _conflicts = 0;
    std::uint64_t _rng;
    Phase _initial_phase;
};

} // namespace disjinv::sat
