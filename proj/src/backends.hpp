#pragma once

#include "disjinv/solver.hpp"

#include <memory>

namespace disjinv::detail
{

std::unique_ptr< Session > make_smt_session( const SolverConfig& cfg, Logic logic );
std::unique_ptr< Session > make_prop_session( const SolverConfig& cfg );

} // namespace disjinv::detail
