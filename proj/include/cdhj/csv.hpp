#pragma once

#include "cdhj/contact_core.hpp"
#include "cdhj/hamilton_jacobi.hpp"

#include <ostream>

/// CSV emission for trajectories and generating-function grids.  Output is
/// deterministic: 17 significant digits, '\n' line endings, a single header
/// row, no timestamps or environment-dependent fields.
namespace cdhj {

/// Shortest representation that round-trips a double ("%.17g").
std::string format_g17(double x);

/// Header "k,t,q,p,s" (1-D) or "k,t,q0..,p0..,s"; times are t0 + k h.
void write_trajectory_csv(std::ostream& os, const std::vector<ContactState>& states,
                          double t0, double h);

/// Header "q,S,dS", one row per node.
void write_grid_csv(std::ostream& os, const GeneratingFunctionGrid& grid);

} // namespace cdhj
