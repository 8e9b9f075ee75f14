#pragma once

#include "disjinv/automaton.hpp"
#include "disjinv/engine.hpp"
#include "disjinv/harness.hpp"
#include "disjinv/system.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace disjinv
{

using Json = nlohmann::json;

inline constexpr int report_schema = 1;

// Everything a report can contain; absent parts are omitted from the document.
struct ReportInput
{
    const TransitionSystem* system = nullptr;
    PredicateSet preds;
    std::string mode;
    Json options = Json::object();
    std::optional< InferenceOutcome > outcome;
    std::optional< DnfInvariant > invariant; // overrides outcome->invariant (e.g. loaded from a file)
    std::optional< HoareVerdict > check;
    const AbstractAutomaton* automaton = nullptr;
    const Trace* trace = nullptr;
    std::vector< std::string > warnings;
};

Json build_report( const ReportInput& in );

// Sorted keys, two-space indent, newline-terminated.
std::string emit_json( const Json& report );
// The report without its stats block, for golden comparisons.
Json canonical( const Json& report );

// Invariant stored under "invariant" (predicate indices per disjunct). Throws Error when the
// document is malformed or its indices exceed `m` predicates.
DnfInvariant invariant_from_json( const Json& report, std::size_t m );

std::string emit_dot( const AbstractAutomaton& aut, const std::string& name = "automaton" );

std::string emit_text( const Json& report );

std::string to_string( HoareVerdict::Status s );

} // namespace disjinv
