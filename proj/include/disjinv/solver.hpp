#pragma once

#include "disjinv/formula.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace disjinv
{

enum class Backend
{
    ExternalSmt,
    InternalProp
};

enum class Logic
{
    Auto,
    QF_LIA,
    QF_LRA,
    QF_LIRA
};

std::string to_string( Logic logic );

struct SolverConfig
{
    Backend backend = Backend::ExternalSmt;
    // Whitespace-separated argv of an SMT-LIB2 solver reading commands on stdin.
    std::string command = "z3 -in -smt2";
    Logic logic = Logic::Auto;
    // Per-query timeout in seconds; 0 disables it.
    double timeout = 0;
    std::optional< std::uint64_t > seed;
    // Internal backend only: initial decision polarity (Random uses the seed).
    enum class Phase
    {
        Random,
        False,
        True
    };
    Phase phase = Phase::Random;
    // Evaluate every Sat model against the asserted store and throw on mismatch.
    bool verify_models = false;

    // Defaults overridden by DISJINV_SOLVER and DISJINV_TIMEOUT.
    static SolverConfig from_env();
};

struct SatResult
{
    enum class Status
    {
        Sat,
        Unsat,
        Unknown
    };

    Status status = Status::Unknown;
    Model model;        // total over declared variables when Sat
    std::string reason; // set when Unknown

    [[nodiscard]] bool is_sat() const { return status == Status::Sat; }
    [[nodiscard]] bool is_unsat() const { return status == Status::Unsat; }
    [[nodiscard]] bool is_unknown() const { return status == Status::Unknown; }
};

// Incremental satisfiability session. Declarations must precede use and happen at depth 0.
// A session is confined to one thread at a time.
class Session
{
public:
    virtual ~Session() = default;
    Session( const Session& ) = delete;
    Session& operator=( const Session& ) = delete;

    static std::unique_ptr< Session > open( const SolverConfig& cfg, const std::vector< Variable >& vars );

    void declare( const Variable& v );
    [[nodiscard]] bool is_declared( const std::string& name ) const;
    [[nodiscard]] const std::vector< Variable >& declared() const { return _declared; }

    void assert_formula( const Formula& f );
    void push();
    void pop();
    [[nodiscard]] std::size_t depth() const { return _stack.size() - 1; }

    SatResult check();

    [[nodiscard]] std::size_t queries() const { return _queries; }
    [[nodiscard]] double solver_seconds() const { return _solver_time.count(); }

protected:
    explicit Session( const SolverConfig& cfg );

    virtual void do_declare( const Variable& v ) = 0;
    virtual void do_assert( const Formula& f ) = 0;
    virtual void do_push() = 0;
    virtual void do_pop() = 0;
    virtual SatResult do_check() = 0;

    const SolverConfig& config() const { return _cfg; }

private:
    SolverConfig _cfg;
    std::vector< Variable > _declared;
    std::map< std::string, Variable > _by_name;
    std::vector< std::vector< Formula > > _stack{ 1 };
    std::size_t _queries = 0;
    std::chrono::duration< double > _solver_time{ 0 };
};

struct Entailment
{
    enum class Status
    {
        Holds,
        Fails,
        Unknown
    };

    Status status = Status::Unknown;
    Model countermodel; // when Fails
    std::string reason; // when Unknown

    [[nodiscard]] bool holds() const { return status == Status::Holds; }
    [[nodiscard]] bool fails() const { return status == Status::Fails; }
};

// hyp => concl, decided as unsatisfiability of hyp && !concl on a fresh session.
Entailment check_entailment( const SolverConfig& cfg, const Formula& hyp, const Formula& concl );

// Logic chosen for a set of declarations when cfg.logic is Auto.
Logic resolve_logic( Logic requested, const std::vector< Variable >& vars );

// SMT-LIB2 rendering of a formula (symbols are always |quoted|).
std::string to_smtlib( const Formula& f );

} // namespace disjinv
