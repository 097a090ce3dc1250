// Walkthrough of the library on a four-node diamond network: region,
// feasibility, vertices, and a decode-and-forward simulation.

#include <iostream>

#include "lfdn/lfdn.hpp"

int main() {
    using namespace lfdn;

    Network net = make_diamond_network(2, 3, 4, 1);

    std::cout << "cut inequalities:\n";
    for (const RegionInequality& iq : region(net)) {
        std::cout << "  sum over {";
        for (std::size_t i = 0; i < iq.subset.size(); ++i)
            std::cout << (i ? "," : "") << iq.subset[i];
        std::cout << "} <= " << iq.bound << "\n";
    }

    RateVector target = {Rational(2), Rational(1), Rational(1)};
    std::cout << "\nrates (2,1,1): "
              << (check_rates(net, target).feasible ? "feasible" : "infeasible") << "\n";

    std::cout << "\nvertices:\n";
    for (const RateVector& v : enumerate_vertices(net)) {
        std::cout << "  ";
        for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << v[i].str();
        std::cout << "\n";
    }

    DiamondStrategy ds = diamond_vertex_strategy(net, 'A');
    SimTrace trace = run(net, ds.strategy, 64, 1);
    std::cout << "\nvertex A simulation over 64 slots:\n" << render_report(measure(trace, 1));
    return 0;
}
