#pragma once

#include "disjinv/formula.hpp"
#include "disjinv/template.hpp"

#include <optional>
#include <string>
#include <vector>

namespace disjinv
{

// State variable introduced for a `pre x` flow of a node; `init` is the `->` initializer if any.
struct PreFlow
{
    Variable state;
    std::string flow;
    std::optional< Value > init;

    friend bool operator==( const PreFlow&, const PreFlow& ) = default;
};

// Loop or reactive node: init S over state, guard C over state and inputs, transition T over
// state, primed state, inputs and outputs, postcondition P over state.
struct TransitionSystem
{
    std::string name;
    std::vector< Variable > state;
    std::vector< Variable > inputs;
    std::vector< Variable > outputs;
    Formula init = mk_true();
    Formula guard = mk_true();
    Formula trans = mk_true();
    Formula post = mk_true();
    PredicateSet state_preds;
    std::vector< Formula > io_preds;

    // Only set for systems translated from nodes.
    std::vector< PreFlow > pre_flows;

    [[nodiscard]] std::vector< Variable > primed_state() const;
    // state, primed state, inputs, outputs
    [[nodiscard]] std::vector< Variable > step_variables() const;

    friend bool operator==( const TransitionSystem&, const TransitionSystem& ) = default;
};

} // namespace disjinv
