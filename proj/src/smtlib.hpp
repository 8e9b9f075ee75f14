#pragma once

#include "disjinv/formula.hpp"

#include <string>
#include <vector>

namespace disjinv::smtlib
{

struct SExpr
{
    std::string atom; // set when list is empty and this is a leaf
    std::vector< SExpr > list;
    bool is_list = false;
};

// Parses exactly one s-expression from text; throws SolverError on malformed input.
SExpr parse( const std::string& text );

// Interprets a get-value payload for a variable of the given sort.
Value parse_value( const SExpr& e, Sort sort );

std::string quote( const std::string& name );
std::string sort_name( Sort sort );

} // namespace disjinv::smtlib
