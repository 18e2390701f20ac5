#include "bohrlab/orbit_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "bohrlab/kernels.hpp"

namespace bohrlab {

OrbitClosureNet build_orbit_net(const ActionSystem& sys, const Point& y, double eps,
                                const WindowSpec& window) {
    if (!(eps > 0)) throw InvalidInputError("build_orbit_net: eps must be positive");
    OrbitSample sample = sys.orbit(y, window);
    if (sample.points.empty()) throw InvalidInputError("build_orbit_net: empty window");

    OrbitClosureNet net;
    net.basepoint = y;
    net.eps = eps;
    net.source_window = window;
    for (std::size_t idx : epsilon_net_indices(sys.space(), sample.points, eps)) {
        net.points.push_back(sample.points[idx]);
        net.reps.push_back(sample.elements[idx]);
    }
    return net;
}

std::size_t nearest_net_index(const ActionSystem& sys, const OrbitClosureNet& net, const Point& p) {
    const MetricSpace& space = sys.space();
    std::size_t best = 0;
    double best_d = space.distance(p, net.points[0]);
    for (std::size_t i = 1; i < net.points.size(); ++i) {
        double d = space.distance(p, net.points[i]);
        if (d < best_d) { // strict: ties resolve to the lower index
            best_d = d;
            best = i;
        }
    }
    if (best_d > net.eps)
        throw InvalidInputError("diamond: point is farther than eps from every net point");
    return best;
}

Point diamond(const ActionSystem& sys, const OrbitClosureNet& net, const Point& x, const Point& z) {
    const Element& gx = net.reps[nearest_net_index(sys, net, x)];
    const Element& gz = net.reps[nearest_net_index(sys, net, z)];
    return sys.apply(sys.semigroup().compose(gx, gz), net.basepoint);
}

DiamondTable build_diamond_table(const ActionSystem& sys, const OrbitClosureNet& net) {
    DiamondTable table;
    table.net = net;
    table.cells = kernels::diamond_cells(sys, net.reps, net.basepoint);

    const std::size_t n = net.points.size();
    table.cell_defects.resize(n * n);
    for (std::size_t c = 0; c < n * n; ++c) {
        double best = sys.space().distance(table.cells[c], net.points[0]);
        for (std::size_t i = 1; i < n; ++i)
            best = std::min(best, sys.space().distance(table.cells[c], net.points[i]));
        table.cell_defects[c] = best;
    }
    return table;
}

AlgebraReport algebra_check(const ActionSystem& sys, const DiamondTable& table) {
    const OrbitClosureNet& net = table.net;
    const MetricSpace& space = sys.space();
    const Semigroup& G = sys.semigroup();
    const std::size_t n = net.points.size();
    AlgebraReport rep;

    // commutativity: the table must be symmetric up to round-off
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = space.distance(table.cells[i * n + j], table.cells[j * n + i]);
            if (d > rep.commutativity) {
                rep.commutativity = d;
                rep.comm_i = i;
                rep.comm_j = j;
            }
        }

    // associativity on representatives
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Element ij = G.compose(net.reps[i], net.reps[j]);
            for (std::size_t k = 0; k < n; ++k) {
                Element left = G.compose(ij, net.reps[k]);
                Element right = G.compose(net.reps[i], G.compose(net.reps[j], net.reps[k]));
                double d = space.distance(sys.apply(left, net.basepoint),
                                          sys.apply(right, net.basepoint));
                if (d > rep.associativity) {
                    rep.associativity = d;
                    rep.assoc_i = i;
                    rep.assoc_j = j;
                    rep.assoc_k = k;
                }
            }
        }

    // identity row: cells[e][j] against the net points themselves
    std::size_t e_idx = nearest_net_index(sys, net, net.basepoint);
    for (std::size_t j = 0; j < n; ++j) {
        double d = space.distance(table.cells[e_idx * n + j], net.points[j]);
        if (d > rep.identity) {
            rep.identity = d;
            rep.ident_j = j;
        }
    }
    return rep;
}

double translation_consistency(const ActionSystem& sys, const OrbitClosureNet& net,
                               const Element& g, const Point& x) {
    Point lhs = sys.apply(g, x);
    Point rhs = diamond(sys, net, sys.apply(g, net.basepoint), x);
    return sys.space().distance(lhs, rhs);
}

} // namespace bohrlab
