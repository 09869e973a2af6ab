#include "cdhj/csv.hpp"

#include <cstdio>

namespace cdhj {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const std::vector<ContactState>& states,
                          double t0, double h) {
    if (states.empty()) throw DomainError("write_trajectory_csv: empty trajectory");
    const std::size_t dim = states.front().q.size();
    os << "k,t";
    if (dim == 1) {
        os << ",q,p,s";
    } else {
        for (std::size_t i = 0; i < dim; ++i) os << ",q" << i;
        for (std::size_t i = 0; i < dim; ++i) os << ",p" << i;
        os << ",s";
    }
    os << "\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
        os << k << "," << format_g17(t0 + static_cast<double>(k) * h);
        for (double v : states[k].q) os << "," << format_g17(v);
        for (double v : states[k].p) os << "," << format_g17(v);
        os << "," << format_g17(states[k].s) << "\n";
    }
}

void write_grid_csv(std::ostream& os, const GeneratingFunctionGrid& grid) {
    os << "q,S,dS\n";
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
        os << format_g17(grid.nodes[i]) << "," << format_g17(grid.S[i]) << ","
           << format_g17(grid.dS[i]) << "\n";
}

} // namespace cdhj
