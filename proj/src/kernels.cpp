#include "bohrlab/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bohrlab/numeric.hpp"

namespace bohrlab::kernels {

namespace {

std::atomic<int> g_max_threads{0};

int effective_threads() {
#ifdef _OPENMP
    int n = g_max_threads.load();
    if (n <= 0) return omp_get_max_threads();
    return n;
#else
    return 1;
#endif
}

bool use_parallel() { return effective_threads() > 1; }

} // namespace

void set_max_threads(int n) { g_max_threads.store(n); }
int max_threads() { return effective_threads(); }

// ---------------------------------------------------------------------------
// defect scan
// ---------------------------------------------------------------------------

namespace {

// Precomputed orbit context for one-parameter and lattice windows: window
// element -> orbit point, and candidate composition by index arithmetic.
struct ScanContext {
    const ActionSystem* sys = nullptr;
    Point x;
    std::vector<Element> window;

    bool indexed = false;
    std::vector<Point> table;          // orbit over the extended index domain
    std::vector<std::int64_t> windex;  // window element -> flat index
    std::int64_t side = 0;             // lattice side (ZPlusD/RPlusGrid)
    int dim = 1;
    bool zbar = false;
    std::int64_t zbar_inf_slot = -1;
    bool finite = false;

    double defect(const Element& tau, double cap) const;
};

std::int64_t flat_index(const Element& e, std::int64_t side, int dim) {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * side + e.v[i];
    return idx;
}

ScanContext make_context(const ActionSystem& sys, const Point& x, const WindowSpec& window,
                         const std::vector<Element>& candidates) {
    ScanContext ctx;
    ctx.sys = &sys;
    ctx.x = x;
    ctx.window = sys.semigroup().enumerate_window(window);

    const Family fam = sys.semigroup().family();
    if (fam == Family::ZPlusD || fam == Family::RPlusGrid) {
        ctx.dim = fam == Family::ZPlusD ? sys.semigroup().dim() : 1;
        std::int64_t max_cand = 0, max_win = 0;
        for (const Element& c : candidates)
            for (int i = 0; i < ctx.dim; ++i) max_cand = std::max(max_cand, c.v[i]);
        for (const Element& g : ctx.window)
            for (int i = 0; i < ctx.dim; ++i) max_win = std::max(max_win, g.v[i]);
        ctx.side = max_cand + max_win + 1;
        double cells = 1;
        for (int i = 0; i < ctx.dim; ++i) cells *= static_cast<double>(ctx.side);
        if (cells <= 1e7) {
            ctx.indexed = true;
            const std::size_t total = static_cast<std::size_t>(cells);
            ctx.table.resize(total);
            if (ctx.dim == 1) {
                ctx.table = sys.orbit_ray(x, ctx.side);
            } else {
                Element e = sys.semigroup().identity();
                for (std::size_t flat = 0; flat < total; ++flat) {
                    std::int64_t rem = static_cast<std::int64_t>(flat);
                    for (int i = ctx.dim - 1; i >= 0; --i) {
                        e.v[i] = rem % ctx.side;
                        rem /= ctx.side;
                    }
                    ctx.table[flat] = sys.apply(e, x);
                }
            }
            ctx.windex.reserve(ctx.window.size());
            for (const Element& g : ctx.window)
                ctx.windex.push_back(flat_index(g, ctx.side, ctx.dim));
        }
    } else if (fam == Family::ZbarPlus) {
        std::int64_t max_cand = 0, max_win = 0;
        for (const Element& c : candidates)
            if (c.v[0] != kInf) max_cand = std::max(max_cand, c.v[0]);
        for (const Element& g : ctx.window)
            if (g.v[0] != kInf) max_win = std::max(max_win, g.v[0]);
        ctx.side = max_cand + max_win + 1;
        if (ctx.side <= 10'000'000) {
            ctx.indexed = true;
            ctx.zbar = true;
            ctx.table = sys.orbit_ray(x, ctx.side);
            ctx.table.push_back(sys.apply(Element::make(Family::ZbarPlus, {kInf}), x));
            ctx.zbar_inf_slot = ctx.side;
            ctx.windex.reserve(ctx.window.size());
            for (const Element& g : ctx.window)
                ctx.windex.push_back(g.v[0] == kInf ? ctx.zbar_inf_slot : g.v[0]);
        }
    } else if (fam == Family::FiniteTable) {
        ctx.indexed = true;
        ctx.finite = true;
        const std::size_t n = sys.semigroup().carrier_size();
        ctx.table.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            ctx.table.push_back(
                sys.apply(Element::make(Family::FiniteTable, {static_cast<std::int64_t>(i)}), x));
        ctx.windex.reserve(ctx.window.size());
        for (const Element& g : ctx.window) ctx.windex.push_back(g.v[0]);
    }
    return ctx;
}

double ScanContext::defect(const Element& tau, double cap) const {
    const MetricSpace& space = sys->space();
    double m = 0.0;

    if (indexed && !finite && !zbar) {
        const std::int64_t tflat = flat_index(tau, side, dim);
        for (std::size_t i = 0; i < window.size(); ++i) {
            // flat index of tau o g equals the index sum for lattice families
            std::int64_t composed = tflat;
            if (dim == 1) {
                composed += windex[i];
            } else {
                composed = 0;
                for (int c = 0; c < dim; ++c) composed = composed * side + (tau.v[c] + window[i].v[c]);
            }
            double d = space.distance(table[static_cast<std::size_t>(windex[i])],
                                      table[static_cast<std::size_t>(composed)]);
            if (d > m) {
                m = d;
                if (m >= cap) return m;
            }
        }
        return m;
    }
    if (indexed && zbar) {
        const bool tau_inf = tau.v[0] == kInf;
        for (std::size_t i = 0; i < window.size(); ++i) {
            std::int64_t composed;
            if (tau_inf || windex[i] == zbar_inf_slot)
                composed = zbar_inf_slot;
            else
                composed = tau.v[0] + windex[i];
            double d = space.distance(table[static_cast<std::size_t>(windex[i])],
                                      table[static_cast<std::size_t>(composed)]);
            if (d > m) {
                m = d;
                if (m >= cap) return m;
            }
        }
        return m;
    }
    if (indexed && finite) {
        const auto& op = sys->semigroup().table().op;
        const std::size_t n = sys->semigroup().carrier_size();
        for (std::size_t i = 0; i < window.size(); ++i) {
            std::size_t composed = static_cast<std::size_t>(
                op[static_cast<std::size_t>(tau.v[0]) * n + static_cast<std::size_t>(windex[i])]);
            double d = space.distance(table[static_cast<std::size_t>(windex[i])], table[composed]);
            if (d > m) {
                m = d;
                if (m >= cap) return m;
            }
        }
        return m;
    }

    // generic fallback: compose and apply per pair
    for (const Element& g : window) {
        Point a = sys->apply(g, x);
        Point b = sys->apply(sys->semigroup().compose(tau, g), x);
        double d = space.distance(a, b);
        if (d > m) {
            m = d;
            if (m >= cap) return m;
        }
    }
    return m;
}

} // namespace

std::vector<double> defect_scan_serial(const ActionSystem& sys, const Point& x,
                                       const WindowSpec& window,
                                       const std::vector<Element>& candidates, double cap) {
    ScanContext ctx = make_context(sys, x, window, candidates);
    std::vector<double> out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = ctx.defect(candidates[i], cap);
    return out;
}

std::vector<double> defect_scan_parallel(const ActionSystem& sys, const Point& x,
                                         const WindowSpec& window,
                                         const std::vector<Element>& candidates, double cap) {
    ScanContext ctx = make_context(sys, x, window, candidates);
    std::vector<double> out(candidates.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(effective_threads())
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(candidates.size()); ++i)
        out[static_cast<std::size_t>(i)] = ctx.defect(candidates[static_cast<std::size_t>(i)], cap);
    return out;
}

std::vector<double> defect_scan(const ActionSystem& sys, const Point& x, const WindowSpec& window,
                                const std::vector<Element>& candidates, double cap) {
    return use_parallel() ? defect_scan_parallel(sys, x, window, candidates, cap)
                          : defect_scan_serial(sys, x, window, candidates, cap);
}

// ---------------------------------------------------------------------------
// pair propagation
// ---------------------------------------------------------------------------

namespace {

double propagate_one(const ActionSystem& sys, const std::vector<Element>& window,
                     const PointPair& pr) {
    const MetricSpace& space = sys.space();
    double m = 0.0;
    if (sys.kind() == ActionKind::Doubling) {
        // incremental doubling; window is {0..W-1} in order
        Point a = pr.first, b = pr.second;
        Element one = Element::make(Family::ZPlusD, {1});
        std::int64_t at = 0;
        for (const Element& g : window) {
            while (at < g.v[0]) {
                a = sys.apply(one, a);
                b = sys.apply(one, b);
                ++at;
            }
            m = std::max(m, space.distance(a, b));
        }
        return m;
    }
    for (const Element& g : window)
        m = std::max(m, space.distance(sys.apply(g, pr.first), sys.apply(g, pr.second)));
    return m;
}

} // namespace

std::vector<double> pair_propagation_serial(const ActionSystem& sys,
                                            const std::vector<PointPair>& pairs,
                                            const WindowSpec& window) {
    auto elems = sys.semigroup().enumerate_window(window);
    std::vector<double> out(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = propagate_one(sys, elems, pairs[i]);
    return out;
}

std::vector<double> pair_propagation_parallel(const ActionSystem& sys,
                                              const std::vector<PointPair>& pairs,
                                              const WindowSpec& window) {
    auto elems = sys.semigroup().enumerate_window(window);
    std::vector<double> out(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) num_threads(effective_threads())
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(pairs.size()); ++i)
        out[static_cast<std::size_t>(i)] =
            propagate_one(sys, elems, pairs[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<double> pair_propagation(const ActionSystem& sys, const std::vector<PointPair>& pairs,
                                     const WindowSpec& window) {
    return use_parallel() ? pair_propagation_parallel(sys, pairs, window)
                          : pair_propagation_serial(sys, pairs, window);
}

// ---------------------------------------------------------------------------
// diamond cells
// ---------------------------------------------------------------------------

std::vector<Point> diamond_cells_serial(const ActionSystem& sys, const std::vector<Element>& reps,
                                        const Point& y) {
    const std::size_t n = reps.size();
    std::vector<Point> cells(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cells[i * n + j] = sys.apply(sys.semigroup().compose(reps[i], reps[j]), y);
    return cells;
}

std::vector<Point> diamond_cells_parallel(const ActionSystem& sys, const std::vector<Element>& reps,
                                          const Point& y) {
    const std::size_t n = reps.size();
    std::vector<Point> cells(n * n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
#endif
    for (std::int64_t f = 0; f < static_cast<std::int64_t>(n * n); ++f) {
        std::size_t i = static_cast<std::size_t>(f) / n;
        std::size_t j = static_cast<std::size_t>(f) % n;
        cells[static_cast<std::size_t>(f)] = sys.apply(sys.semigroup().compose(reps[i], reps[j]), y);
    }
    return cells;
}

std::vector<Point> diamond_cells(const ActionSystem& sys, const std::vector<Element>& reps,
                                 const Point& y) {
    return use_parallel() ? diamond_cells_parallel(sys, reps, y) : diamond_cells_serial(sys, reps, y);
}

// ---------------------------------------------------------------------------
// Folner average batch
// ---------------------------------------------------------------------------

namespace {

double average_one(const ActionSystem& sys, const Point& x,
                   const std::function<double(const Point&)>& phi, const std::vector<Element>& F,
                   const QuasiHaar& mu) {
    NeumaierSum num, den;
    if (sys.kind() == ActionKind::Doubling && x.exact_den != 0 && !F.empty() &&
        F.front().family == Family::ZPlusD) {
        // sequential modular stepping when F is enumerated in increasing order
        std::uint64_t s = x.exact_num % x.exact_den;
        std::int64_t at = 0;
        bool increasing = true;
        for (std::size_t i = 1; i < F.size(); ++i)
            if (F[i].v[0] < F[i - 1].v[0]) { increasing = false; break; }
        if (increasing && F.front().v[0] >= 0) {
            for (const Element& t : F) {
                while (at < t.v[0]) {
                    s <<= 1;
                    if (s >= x.exact_den) s -= x.exact_den;
                    ++at;
                }
                Point p;
                p.nx = 1;
                p.exact_den = x.exact_den;
                p.exact_num = s;
                p.x[0] = static_cast<double>(s) / static_cast<double>(x.exact_den);
                double w = mu.atom(t);
                num.add(w * phi(p));
                den.add(w);
            }
            return num.value() / den.value();
        }
    }
    for (const Element& t : F) {
        double w = mu.atom(t);
        num.add(w * phi(sys.apply(t, x)));
        den.add(w);
    }
    return num.value() / den.value();
}

} // namespace

std::vector<double> folner_average_batch_serial(const ActionSystem& sys,
                                                const std::vector<Point>& basepoints,
                                                const std::function<double(const Point&)>& phi,
                                                const std::vector<Element>& F,
                                                const QuasiHaar& mu) {
    if (F.empty()) throw InvalidInputError("folner_average: empty set");
    std::vector<double> out(basepoints.size());
    for (std::size_t i = 0; i < basepoints.size(); ++i)
        out[i] = average_one(sys, basepoints[i], phi, F, mu);
    return out;
}

std::vector<double> folner_average_batch_parallel(const ActionSystem& sys,
                                                  const std::vector<Point>& basepoints,
                                                  const std::function<double(const Point&)>& phi,
                                                  const std::vector<Element>& F,
                                                  const QuasiHaar& mu) {
    if (F.empty()) throw InvalidInputError("folner_average: empty set");
    std::vector<double> out(basepoints.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads())
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(basepoints.size()); ++i)
        out[static_cast<std::size_t>(i)] =
            average_one(sys, basepoints[static_cast<std::size_t>(i)], phi, F, mu);
    return out;
}

std::vector<double> folner_average_batch(const ActionSystem& sys,
                                         const std::vector<Point>& basepoints,
                                         const std::function<double(const Point&)>& phi,
                                         const std::vector<Element>& F, const QuasiHaar& mu) {
    return use_parallel() ? folner_average_batch_parallel(sys, basepoints, phi, F, mu)
                          : folner_average_batch_serial(sys, basepoints, phi, F, mu);
}

} // namespace bohrlab::kernels
