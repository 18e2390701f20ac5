#include "bohrlab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bohrlab/kernels.hpp"
#include "bohrlab/numeric.hpp"
#include "bohrlab/rng.hpp"

namespace bohrlab {

// ---------------------------------------------------------------------------
// Folner sequences
// ---------------------------------------------------------------------------

FolnerSequence FolnerSequence::cubes(Semigroup g) {
    if (g.family() != Family::ZPlusD)
        throw InvalidInputError("folner cubes: needs a zplus semigroup");
    FolnerSequence f;
    f.kind_ = FolnerKind::Cube;
    f.desc_ = std::move(g);
    return f;
}

FolnerSequence FolnerSequence::grid_cubes(Semigroup g) {
    if (g.family() != Family::RPlusGrid)
        throw InvalidInputError("folner grid cubes: needs an rplusgrid semigroup");
    FolnerSequence f;
    f.kind_ = FolnerKind::GridCube;
    f.desc_ = std::move(g);
    return f;
}

FolnerSequence FolnerSequence::jr(Semigroup g) {
    if (g.family() != Family::ZPlusD || g.dim() != 1)
        throw InvalidInputError("folner jr: defined for one-dimensional zplus only");
    FolnerSequence f;
    f.kind_ = FolnerKind::JR;
    f.desc_ = std::move(g);
    return f;
}

FolnerSequence FolnerSequence::explicit_sets(Semigroup g, std::vector<std::vector<Element>> sets) {
    if (sets.empty()) throw InvalidInputError("folner explicit: needs at least one set");
    FolnerSequence f;
    f.kind_ = FolnerKind::Explicit;
    f.desc_ = std::move(g);
    f.sets_ = std::move(sets);
    return f;
}

std::vector<std::int64_t> jr_values(std::int64_t n) {
    if (n < 1) throw InvalidInputError("jr_values: n must be >= 1");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t v = n * n; v <= n * n + n; ++v) out.push_back(v);
    return out;
}

std::vector<Element> FolnerSequence::set(std::int64_t n) const {
    if (n < 1) throw InvalidInputError("folner set: n must be >= 1");
    switch (kind_) {
    case FolnerKind::Cube:
        return desc_.enumerate_window(WindowSpec::box(n));
    case FolnerKind::GridCube:
        return desc_.enumerate_window(WindowSpec::box(n));
    case FolnerKind::JR: {
        std::vector<Element> out;
        for (std::int64_t v : jr_values(n)) out.push_back(Element::make(Family::ZPlusD, {v}));
        return out;
    }
    case FolnerKind::Explicit: {
        std::size_t idx = static_cast<std::size_t>(n - 1);
        if (idx >= sets_.size()) throw InvalidInputError("folner explicit: index out of range");
        return sets_[idx];
    }
    }
    throw InvalidInputError("folner set: unknown kind");
}

std::string FolnerSequence::name() const {
    switch (kind_) {
    case FolnerKind::Cube: return "cube";
    case FolnerKind::GridCube: return "gridcube";
    case FolnerKind::JR: return "jr";
    case FolnerKind::Explicit: return "explicit";
    }
    return "?";
}

double folner_ratio(const Semigroup& desc, const QuasiHaar& mu, const std::vector<Element>& F,
                    const Element& g) {
    if (F.empty()) throw InvalidInputError("folner_ratio: empty set");
    auto base = canonical_set(F);
    std::vector<Element> shifted;
    shifted.reserve(base.size());
    for (const Element& t : base) shifted.push_back(desc.compose(g, t));
    shifted = canonical_set(std::move(shifted));

    std::vector<Element> sym;
    std::set_symmetric_difference(base.begin(), base.end(), shifted.begin(), shifted.end(),
                                  std::back_inserter(sym));
    return mu.mass(sym) / mu.mass(base);
}

// ---------------------------------------------------------------------------
// empirical measures
// ---------------------------------------------------------------------------

EmpiricalMeasure empirical_measure(const ActionSystem& sys, const Point& x,
                                   const std::vector<Element>& F, const QuasiHaar& mu) {
    if (F.empty()) throw InvalidInputError("empirical_measure: empty set");
    std::vector<Point> pts;
    std::vector<double> wts;
    pts.reserve(F.size());
    wts.reserve(F.size());
    for (const Element& t : F) {
        pts.push_back(sys.apply(t, x));
        wts.push_back(mu.atom(t));
    }

    // aggregate ties by coordinate order
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });

    EmpiricalMeasure m;
    NeumaierSum total;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        NeumaierSum w;
        while (j < order.size() && pts[order[j]] == pts[order[i]]) {
            w.add(wts[order[j]]);
            ++j;
        }
        m.support.push_back(pts[order[i]]);
        m.weights.push_back(w.value());
        total.add(w.value());
        i = j;
    }
    const double t = total.value();
    if (!(t > 0)) throw InvalidInputError("empirical_measure: zero total mass");
    for (double& w : m.weights) w /= t;
    return m;
}

EmpiricalMeasure pushforward(const ActionSystem& sys, const EmpiricalMeasure& m, const Element& g) {
    std::vector<Point> pts;
    pts.reserve(m.support.size());
    for (const Point& p : m.support) pts.push_back(sys.apply(g, p));

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });

    EmpiricalMeasure out;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        NeumaierSum w;
        while (j < order.size() && pts[order[j]] == pts[order[i]]) {
            w.add(m.weights[order[j]]);
            ++j;
        }
        out.support.push_back(pts[order[i]]);
        out.weights.push_back(w.value());
        i = j;
    }
    return out;
}

double integral(const EmpiricalMeasure& m, const TestFunction& fn) {
    NeumaierSum acc;
    for (std::size_t i = 0; i < m.support.size(); ++i)
        acc.add(m.weights[i] * fn.eval(m.support[i]));
    return acc.value();
}

double folner_average(const ActionSystem& sys, const Point& x, const TestFunction& fn,
                      const std::vector<Element>& F, const QuasiHaar& mu) {
    return kernels::folner_average_batch(sys, {x}, fn.eval, F, mu).front();
}

double bl_distance(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2,
                   const TestFunctionFamily& fam) {
    if (fam.fns.empty()) throw InvalidInputError("bl_distance: empty test family");
    double best = 0.0;
    for (const TestFunction& fn : fam.fns) {
        double norm = std::max(1.0, fn.sup_bound);
        best = std::max(best, std::abs(integral(m1, fn) - integral(m2, fn)) / norm);
    }
    return best;
}

// ---------------------------------------------------------------------------
// test-function families
// ---------------------------------------------------------------------------

TestFunctionFamily TestFunctionFamily::torus_characters(int torus_dim, int kmax) {
    if (torus_dim < 1 || torus_dim > 4 || kmax < 1)
        throw InvalidInputError("torus_characters: bad parameters");
    TestFunctionFamily fam;
    const double two_pi = 2.0 * std::numbers::pi;

    if (torus_dim == 1) {
        for (int k = 1; k <= kmax; ++k) {
            double lip = two_pi * k;
            fam.fns.push_back({"cos:" + std::to_string(k), lip, 1.0, [k, two_pi](const Point& p) {
                                   return std::cos(two_pi * k * p.x[0]);
                               }});
            fam.fns.push_back({"sin:" + std::to_string(k), lip, 1.0, [k, two_pi](const Point& p) {
                                   return std::sin(two_pi * k * p.x[0]);
                               }});
        }
        return fam;
    }

    // nonzero integer vectors with |k|_inf <= kmax, first nonzero positive
    std::vector<std::vector<int>> freqs;
    std::vector<int> k(static_cast<std::size_t>(torus_dim), -kmax);
    while (true) {
        bool nonzero = false, canonical = false;
        for (int v : k) {
            if (v != 0) {
                nonzero = true;
                canonical = v > 0;
                break;
            }
        }
        if (nonzero && canonical) freqs.push_back(k);
        int i = torus_dim - 1;
        while (i >= 0 && k[static_cast<std::size_t>(i)] == kmax) {
            k[static_cast<std::size_t>(i)] = -kmax;
            --i;
        }
        if (i < 0) break;
        ++k[static_cast<std::size_t>(i)];
    }
    for (const auto& kv : freqs) {
        double l1 = 0;
        std::string tag;
        for (std::size_t i = 0; i < kv.size(); ++i) {
            l1 += std::abs(kv[i]);
            tag += (i ? "," : "") + std::to_string(kv[i]);
        }
        double lip = two_pi * l1;
        int dim = torus_dim;
        auto phase = [kv, dim, two_pi](const Point& p) {
            double s = 0;
            for (int i = 0; i < dim; ++i) s += kv[static_cast<std::size_t>(i)] * p.x[i];
            return two_pi * s;
        };
        fam.fns.push_back(
            {"cos:" + tag, lip, 1.0, [phase](const Point& p) { return std::cos(phase(p)); }});
        fam.fns.push_back(
            {"sin:" + tag, lip, 1.0, [phase](const Point& p) { return std::sin(phase(p)); }});
    }
    return fam;
}

TestFunctionFamily TestFunctionFamily::landmarks(const MetricSpace& space, int count, double radius,
                                                 std::uint64_t seed) {
    if (count < 1 || !(radius > 0)) throw InvalidInputError("landmarks: bad parameters");
    TestFunctionFamily fam;
    SplitMix64 rng(seed);
    MetricSpace sp = space;
    for (int i = 0; i < count; ++i) {
        Point p = sp.sample(rng);
        fam.fns.push_back({"landmark:" + std::to_string(i), 1.0 / radius, 1.0,
                           [sp, p, radius](const Point& q) {
                               return std::min(1.0, sp.distance(q, p) / radius);
                           }});
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Haar measures of finite commutative semigroups
// ---------------------------------------------------------------------------

namespace {

double invariance_residual(const std::vector<std::int32_t>& op, std::size_t n,
                           const std::vector<double>& mu) {
    // max over g and atoms {a} of |mu(L_g^{-1}{a}) - mu({a})|
    double worst = 0.0;
    std::vector<double> pre(n);
    for (std::size_t g = 0; g < n; ++g) {
        std::fill(pre.begin(), pre.end(), 0.0);
        for (std::size_t t = 0; t < n; ++t) pre[static_cast<std::size_t>(op[g * n + t])] += mu[t];
        for (std::size_t a = 0; a < n; ++a) worst = std::max(worst, std::abs(pre[a] - mu[a]));
    }
    return worst;
}

} // namespace

InvariantMeasureSolution haar_solve_finite(const Semigroup& desc, const HaarOptions& opts) {
    if (!desc.finite()) throw InvalidInputError("haar_solve_finite: needs a finite semigroup");
    auto comm = desc.check_commutative(WindowSpec{});
    if (!comm.holds)
        throw InvalidInputError("haar_solve_finite: operation table is not commutative");

    const std::size_t n = desc.carrier_size();
    const auto& op = desc.table().op;

    std::vector<double> mu;
    if (opts.start.empty()) {
        mu.assign(n, 1.0 / static_cast<double>(n));
    } else {
        if (opts.start.size() != n)
            throw InvalidInputError("haar_solve_finite: start vector size mismatch");
        double s = 0;
        for (double w : opts.start) {
            if (w < 0) throw InvalidInputError("haar_solve_finite: negative start weight");
            s += w;
        }
        if (!(s > 0)) throw InvalidInputError("haar_solve_finite: zero start mass");
        mu.resize(n);
        for (std::size_t i = 0; i < n; ++i) mu[i] = opts.start[i] / s;
    }

    InvariantMeasureSolution sol;
    std::vector<double> next(n);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        double res = invariance_residual(op, n, mu);
        sol.residual_history.push_back(res);
        if (res <= opts.tolerance) {
            sol.weights = mu;
            sol.residual = res;
            sol.iterations = it;
            return sol;
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t t = 0; t < n; ++t)
                next[static_cast<std::size_t>(op[g * n + t])] += mu[t];
        for (std::size_t a = 0; a < n; ++a) next[a] /= static_cast<double>(n);
        mu.swap(next);
    }
    throw NumericError("haar_solve_finite: averaging iteration did not converge",
                       sol.residual_history);
}

std::vector<double> haar_linear_oracle(const Semigroup& desc) {
    if (!desc.finite()) throw InvalidInputError("haar_linear_oracle: needs a finite semigroup");
    const std::size_t n = desc.carrier_size();
    const auto& op = desc.table().op;

    // constraints: for each (g,a): sum_{t: g o t = a} mu_t - mu_a = 0; sum mu = 1.
    // least squares via normal equations with partial-pivot elimination.
    const std::size_t rows = n * n + 1;
    std::vector<double> A(rows * n, 0.0), b(rows, 0.0);
    std::size_t r = 0;
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t a = 0; a < n; ++a, ++r) {
            for (std::size_t t = 0; t < n; ++t)
                if (static_cast<std::size_t>(op[g * n + t]) == a) A[r * n + t] += 1.0;
            A[r * n + a] -= 1.0;
        }
    for (std::size_t t = 0; t < n; ++t) A[r * n + t] = 1.0;
    b[r] = 1.0;

    std::vector<double> M(n * n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            NeumaierSum s;
            for (std::size_t k = 0; k < rows; ++k) s.add(A[k * n + i] * A[k * n + j]);
            M[i * n + j] = s.value();
        }
        NeumaierSum s;
        for (std::size_t k = 0; k < rows; ++k) s.add(A[k * n + i] * b[k]);
        rhs[i] = s.value();
    }

    // gaussian elimination with partial pivoting
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t rr = col + 1; rr < n; ++rr)
            if (std::abs(M[perm[rr] * n + col]) > std::abs(M[perm[piv] * n + col])) piv = rr;
        std::swap(perm[col], perm[piv]);
        double diag = M[perm[col] * n + col];
        if (std::abs(diag) < 1e-14)
            throw NumericError("haar_linear_oracle: singular system (non-unique solution?)");
        for (std::size_t rr = col + 1; rr < n; ++rr) {
            double f = M[perm[rr] * n + col] / diag;
            if (f == 0.0) continue;
            for (std::size_t cc = col; cc < n; ++cc) M[perm[rr] * n + cc] -= f * M[perm[col] * n + cc];
            rhs[perm[rr]] -= f * rhs[perm[col]];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t col = n; col-- > 0;) {
        double s = rhs[perm[col]];
        for (std::size_t cc = col + 1; cc < n; ++cc) s -= M[perm[col] * n + cc] * x[cc];
        x[col] = s / M[perm[col] * n + col];
    }
    return x;
}

// ---------------------------------------------------------------------------
// unique ergodicity / uniform convergence probes
// ---------------------------------------------------------------------------

UniqueErgodicityReport unique_ergodicity_probe(const ActionSystem& sys,
                                               const std::vector<Point>& basepoints,
                                               const FolnerSequence& folner,
                                               const TestFunctionFamily& fam,
                                               const std::vector<std::int64_t>& schedule,
                                               double tolerance) {
    if (basepoints.size() < 2)
        throw InvalidInputError("unique_ergodicity_probe: needs at least two basepoints");
    if (schedule.empty()) throw InvalidInputError("unique_ergodicity_probe: empty schedule");

    QuasiHaar mu = folner.semigroup().family() == Family::RPlusGrid
                       ? QuasiHaar::grid_lebesgue(folner.semigroup().grid_step())
                       : QuasiHaar::counting();

    UniqueErgodicityReport rep;
    rep.schedule = schedule;
    for (std::int64_t n : schedule) {
        auto F = folner.set(n);
        // int f d(mu_{x,n}) equals the Folner average of f from x by definition
        std::vector<double> flat;
        double diameter = 0.0;
        for (const TestFunction& fn : fam.fns) {
            auto vals = kernels::folner_average_batch(sys, basepoints, fn.eval, F, mu);
            double lo = vals[0], hi = vals[0];
            for (double v : vals) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            diameter = std::max(diameter, (hi - lo) / std::max(1.0, fn.sup_bound));
            flat.insert(flat.end(), vals.begin(), vals.end());
        }
        rep.diameters.push_back(diameter);
        rep.averages.push_back(std::move(flat));
    }

    bool decreasing = true;
    for (std::size_t i = 1; i < rep.diameters.size(); ++i)
        decreasing = decreasing && rep.diameters[i] <= rep.diameters[i - 1];
    rep.consistent = decreasing && rep.diameters.back() <= tolerance;
    rep.verdict = rep.consistent ? "consistent with unique ergodicity"
                                 : "not consistent with unique ergodicity";
    return rep;
}

UniformConvergenceSeries uniform_convergence_probe(const ActionSystem& sys,
                                                   const std::vector<Point>& basepoints,
                                                   const FolnerSequence& folner,
                                                   const TestFunction& fn, double target,
                                                   const std::vector<std::int64_t>& schedule) {
    if (basepoints.empty()) throw InvalidInputError("uniform_convergence_probe: no basepoints");
    QuasiHaar mu = folner.semigroup().family() == Family::RPlusGrid
                       ? QuasiHaar::grid_lebesgue(folner.semigroup().grid_step())
                       : QuasiHaar::counting();

    UniformConvergenceSeries series;
    series.schedule = schedule;
    for (std::int64_t n : schedule) {
        auto vals = kernels::folner_average_batch(sys, basepoints, fn.eval, folner.set(n), mu);
        double dev = 0.0;
        for (double v : vals) dev = std::max(dev, std::abs(v - target));
        series.deviations.push_back(dev);
        series.values.push_back(std::move(vals));
    }
    return series;
}

// ---------------------------------------------------------------------------
// Shulman diagnostics
// ---------------------------------------------------------------------------

ShulmanReport shulman_constant(const FolnerSequence& folner, std::int64_t n_max,
                               double bound_threshold) {
    const Semigroup& G = folner.semigroup();
    if (G.family() != Family::ZPlusD && G.family() != Family::RPlusGrid)
        throw InvalidInputError("shulman_constant: family does not embed in a group with "
                                "enumerable inverses");
    const int d = G.family() == Family::ZPlusD ? G.dim() : 1;
    if (d != 1 && folner.kind() != FolnerKind::Cube)
        throw InvalidInputError("shulman_constant: d >= 2 supported for cubes only");

    QuasiHaar mu = G.family() == Family::RPlusGrid
                       ? QuasiHaar::grid_lebesgue(G.grid_step())
                       : QuasiHaar::counting();
    double atom = G.family() == Family::RPlusGrid ? G.grid_step() : 1.0;
    auto atom_d = [&](int dim) {
        double a = 1.0;
        for (int i = 0; i < dim; ++i) a *= atom;
        return a;
    };

    ShulmanReport rep;
    rep.bound_threshold = bound_threshold;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        rep.ns.push_back(n);
        auto Fn = folner.set(n);
        double mass_fn = static_cast<double>(Fn.size()) * atom_d(d);

        if (n == 1) { // union over k < 1 is empty
            rep.constants.push_back(0.0);
            continue;
        }

        if (d == 1) {
            // -F_k + F_n in Z (or h*Z); enumerate as marked offsets
            std::int64_t fn_min = Fn.front().v[0], fn_max = Fn.front().v[0];
            for (const Element& e : Fn) {
                fn_min = std::min(fn_min, e.v[0]);
                fn_max = std::max(fn_max, e.v[0]);
            }
            std::int64_t lo = fn_min, hi = fn_max;
            for (std::int64_t k = 1; k < n; ++k) {
                auto Fk = folner.set(k);
                for (const Element& e : Fk) {
                    lo = std::min(lo, fn_min - e.v[0]);
                    hi = std::max(hi, fn_max - e.v[0]);
                }
            }
            if (static_cast<double>(hi - lo + 1) > 5e8)
                throw ResourceError("shulman_constant: offset range too large");
            std::vector<char> marked(static_cast<std::size_t>(hi - lo + 1), 0);
            std::size_t count = 0;
            for (std::int64_t k = 1; k < n; ++k) {
                auto Fk = folner.set(k);
                for (const Element& a : Fk)
                    for (const Element& bE : Fn) {
                        std::int64_t off = bE.v[0] - a.v[0] - lo;
                        if (!marked[static_cast<std::size_t>(off)]) {
                            marked[static_cast<std::size_t>(off)] = 1;
                            ++count;
                        }
                    }
            }
            rep.constants.push_back(static_cast<double>(count) * atom / mass_fn);
        } else {
            // cubes in Z_+^d: offsets b - a land in [-(n-1), n-1]^d
            std::int64_t side = 2 * n - 1;
            std::vector<char> marked(
                static_cast<std::size_t>(std::pow(static_cast<double>(side), d)), 0);
            std::size_t count = 0;
            for (std::int64_t k = 1; k < n; ++k) {
                auto Fk = folner.set(k);
                for (const Element& a : Fk)
                    for (const Element& bE : Fn) {
                        std::size_t flat = 0;
                        for (int i = 0; i < d; ++i) {
                            std::int64_t off = bE.v[i] - a.v[i] + (n - 1);
                            flat = flat * static_cast<std::size_t>(side) +
                                   static_cast<std::size_t>(off);
                        }
                        if (!marked[flat]) {
                            marked[flat] = 1;
                            ++count;
                        }
                    }
            }
            rep.constants.push_back(static_cast<double>(count) * atom_d(d) / mass_fn);
        }
    }

    double worst = 0.0;
    for (double c : rep.constants) worst = std::max(worst, c);
    rep.bounded_looking = worst <= bound_threshold;
    return rep;
}

} // namespace bohrlab
