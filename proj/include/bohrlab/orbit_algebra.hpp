#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bohrlab/space_action.hpp"

namespace bohrlab {

// Finite model of the orbit closure: an eps-net over an orbit sample, with a
// stored representative element per net point.
struct OrbitClosureNet {
    Point basepoint;
    double eps = 0.0;
    WindowSpec source_window;
    std::vector<Point> points;
    std::vector<Element> reps; // parallel to points; pi(reps[i], basepoint) == points[i]
};

// cells[i*n+j] = pi(g_i o g_j, y); cell_defects[i*n+j] = distance from the
// cell product to its nearest net point (how far products land outside the net)
struct DiamondTable {
    OrbitClosureNet net;
    std::vector<Point> cells;
    std::vector<double> cell_defects;
};

struct AlgebraReport {
    double commutativity = 0.0;
    double associativity = 0.0;
    double identity = 0.0;
    // worst witnesses (net indices)
    std::size_t comm_i = 0, comm_j = 0;
    std::size_t assoc_i = 0, assoc_j = 0, assoc_k = 0;
    std::size_t ident_j = 0;
};

OrbitClosureNet build_orbit_net(const ActionSystem& sys, const Point& y, double eps,
                                const WindowSpec& window);

// index of the nearest net point (ties to the lower index); throws when the
// point is farther than eps from every net point
std::size_t nearest_net_index(const ActionSystem& sys, const OrbitClosureNet& net, const Point& p);

// x diamond z = pi(g_x o g_z, y) through the nearest-net representatives
Point diamond(const ActionSystem& sys, const OrbitClosureNet& net, const Point& x, const Point& z);

DiamondTable build_diamond_table(const ActionSystem& sys, const OrbitClosureNet& net);

// exact algebra defects measured on representatives
AlgebraReport algebra_check(const ActionSystem& sys, const DiamondTable& table);

// d(pi(g,x), pi(g,y) diamond x): the translation characterization of the action
double translation_consistency(const ActionSystem& sys, const OrbitClosureNet& net,
                               const Element& g, const Point& x);

} // namespace bohrlab
