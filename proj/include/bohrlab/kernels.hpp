#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bohrlab/semigroup.hpp"
#include "bohrlab/space_action.hpp"

namespace bohrlab::kernels {

// Thread budget for the parallel kernels. 0 = hardware default, 1 = force the
// serial reference. Results are bit-identical for every setting: parallel
// loops only fill independent slots, and every reduction happens serially in
// a fixed order inside each slot.
void set_max_threads(int n);
int max_threads();

// ---------------------------------------------------------------------------
// defect scan: per-candidate tau, the exact maximum over the window of
// d(pi(g,x), pi(tau o g, x)). Scanning for one candidate stops early once the
// running maximum reaches `cap`: returned values below cap are exact maxima,
// values >= cap are lower bounds (the candidate is not an eps-period for any
// eps <= cap). Pass +inf for fully exact results.
// ---------------------------------------------------------------------------
std::vector<double> defect_scan_serial(const ActionSystem& sys, const Point& x,
                                       const WindowSpec& window,
                                       const std::vector<Element>& candidates, double cap);
std::vector<double> defect_scan_parallel(const ActionSystem& sys, const Point& x,
                                         const WindowSpec& window,
                                         const std::vector<Element>& candidates, double cap);
std::vector<double> defect_scan(const ActionSystem& sys, const Point& x, const WindowSpec& window,
                                const std::vector<Element>& candidates, double cap);

// ---------------------------------------------------------------------------
// pair propagation: per pair (a,b), max over the window of d(pi(g,a), pi(g,b)).
// The doubling map steps incrementally (pi(g+1,.) = pi(1, pi(g,.))); all other
// systems evaluate directly per window element.
// ---------------------------------------------------------------------------
using PointPair = std::pair<Point, Point>;

std::vector<double> pair_propagation_serial(const ActionSystem& sys,
                                            const std::vector<PointPair>& pairs,
                                            const WindowSpec& window);
std::vector<double> pair_propagation_parallel(const ActionSystem& sys,
                                              const std::vector<PointPair>& pairs,
                                              const WindowSpec& window);
std::vector<double> pair_propagation(const ActionSystem& sys, const std::vector<PointPair>& pairs,
                                     const WindowSpec& window);

// ---------------------------------------------------------------------------
// diamond cells: cells[i*n+j] = pi(g_i o g_j, y) for net representatives g.
// ---------------------------------------------------------------------------
std::vector<Point> diamond_cells_serial(const ActionSystem& sys, const std::vector<Element>& reps,
                                        const Point& y);
std::vector<Point> diamond_cells_parallel(const ActionSystem& sys, const std::vector<Element>& reps,
                                          const Point& y);
std::vector<Point> diamond_cells(const ActionSystem& sys, const std::vector<Element>& reps,
                                 const Point& y);

// ---------------------------------------------------------------------------
// Folner average batch: for each basepoint, the lambda-weighted compensated
// average of phi over F in enumeration order.
// ---------------------------------------------------------------------------
std::vector<double> folner_average_batch_serial(const ActionSystem& sys,
                                                const std::vector<Point>& basepoints,
                                                const std::function<double(const Point&)>& phi,
                                                const std::vector<Element>& F,
                                                const QuasiHaar& mu);
std::vector<double> folner_average_batch_parallel(const ActionSystem& sys,
                                                  const std::vector<Point>& basepoints,
                                                  const std::function<double(const Point&)>& phi,
                                                  const std::vector<Element>& F,
                                                  const QuasiHaar& mu);
std::vector<double> folner_average_batch(const ActionSystem& sys,
                                         const std::vector<Point>& basepoints,
                                         const std::function<double(const Point&)>& phi,
                                         const std::vector<Element>& F, const QuasiHaar& mu);

} // namespace bohrlab::kernels
