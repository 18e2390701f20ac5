#include "bohrlab/almost_periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bohrlab/kernels.hpp"
#include "bohrlab/numeric.hpp"

namespace bohrlab {

namespace {
constexpr double kInfDouble = std::numeric_limits<double>::infinity();
}

std::string to_string(CertStatus s) {
    switch (s) {
    case CertStatus::CertifiedAtResolution: return "CertifiedAtResolution";
    case CertStatus::RefutedAtResolution: return "RefutedAtResolution";
    case CertStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double period_defect(const ActionSystem& sys, const Point& x, const Element& tau,
                     const WindowSpec& window) {
    return kernels::defect_scan(sys, x, window, {tau}, kInfDouble).front();
}

EpsilonPeriodSet epsilon_period_set(const ActionSystem& sys, const Point& x, double eps,
                                    const WindowSpec& window, const WindowSpec& candidate_window) {
    if (!(eps > 0)) throw InvalidInputError("epsilon_period_set: eps must be positive");
    EpsilonPeriodSet out;
    out.eps = eps;
    out.window = window;
    out.candidate_window = candidate_window;

    auto candidates = sys.semigroup().enumerate_window(candidate_window);
    auto defects = kernels::defect_scan(sys, x, window, candidates, eps);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (defects[i] < eps) { // exact below the cap
            out.members.push_back(candidates[i]);
            out.defects.push_back(defects[i]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// syndeticity
// ---------------------------------------------------------------------------

namespace {

// Minimal box gauge for Z_+^d / grid members: smallest l <= bound such that
// every g in [0, W-l)^d has a member tau <= g with max_i(g_i - tau_i) < l.
// Covers with l >= W-l are rejected as degenerate: there L = [0,l)^d reaches
// the whole shrunken window on its own and any set containing the identity
// would "succeed".
SyndeticityWitness box_gauge_search(const std::vector<Element>& members, int dim, std::int64_t W,
                                    std::int64_t bound, const Semigroup& desc) {
    SyndeticityWitness wit;
    wit.success = false;
    bound = std::min(bound, (W - 1) / 2);

    if (dim == 1) {
        std::vector<std::int64_t> ms;
        ms.reserve(members.size());
        for (const Element& m : members)
            if (m.v[0] != kInf) ms.push_back(m.v[0]);
        std::sort(ms.begin(), ms.end());
        // l_needed(g) = g - (largest member <= g) + 1; identity guarantees a predecessor
        std::vector<std::int64_t> needed(static_cast<std::size_t>(W));
        std::size_t at = 0;
        std::int64_t last = 0;
        for (std::int64_t g = 0; g < W; ++g) {
            while (at < ms.size() && ms[at] <= g) { last = ms[at]; ++at; }
            needed[static_cast<std::size_t>(g)] = g - last + 1;
        }
        // suffix-free scan: minimal l with max over [0, W-l) of needed <= l
        std::int64_t run_max = 0;
        std::vector<std::int64_t> prefix_max(static_cast<std::size_t>(W) + 1, 0);
        for (std::int64_t g = 0; g < W; ++g) {
            run_max = std::max(run_max, needed[static_cast<std::size_t>(g)]);
            prefix_max[static_cast<std::size_t>(g) + 1] = run_max;
        }
        for (std::int64_t l = 1; l <= std::min(bound, W); ++l) {
            if (prefix_max[static_cast<std::size_t>(W - l)] <= l) {
                wit.success = true;
                wit.gauge = l;
                wit.covered_bound = W - l;
                return wit;
            }
        }
        // report the worst uncovered element at the largest tried gauge
        std::int64_t l = std::min(bound, W);
        for (std::int64_t g = 0; g < W - l; ++g) {
            if (needed[static_cast<std::size_t>(g)] > l) {
                Element e = desc.identity();
                e.v[0] = g;
                wit.uncovered = e;
                break;
            }
        }
        wit.gauge = l;
        wit.covered_bound = std::max<std::int64_t>(W - l, 0);
        return wit;
    }

    // d >= 2: direct needed-gauge computation per lattice point
    std::vector<Element> sorted_members = members;
    std::vector<std::int64_t> needed;
    double total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<double>(W);
    if (total > 4e6) throw ResourceError("syndeticity_witness: window too large for d >= 2 search");
    const std::size_t count = static_cast<std::size_t>(total);
    needed.assign(count, std::numeric_limits<std::int64_t>::max());

    Element g = desc.identity();
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::int64_t rem = static_cast<std::int64_t>(flat);
        for (int i = dim - 1; i >= 0; --i) {
            g.v[i] = rem % W;
            rem /= W;
        }
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (const Element& m : sorted_members) {
            bool le = true;
            std::int64_t span = 0;
            for (int i = 0; i < dim; ++i) {
                if (m.v[i] > g.v[i]) { le = false; break; }
                span = std::max(span, g.v[i] - m.v[i]);
            }
            if (le) best = std::min(best, span + 1);
        }
        needed[flat] = best;
    }
    for (std::int64_t l = 1; l <= std::min(bound, W); ++l) {
        bool ok = true;
        Element bad = desc.identity();
        Element probe = desc.identity();
        for (std::size_t flat = 0; flat < count && ok; ++flat) {
            std::int64_t rem = static_cast<std::int64_t>(flat);
            bool inside = true;
            for (int i = dim - 1; i >= 0; --i) {
                probe.v[i] = rem % W;
                rem /= W;
                if (probe.v[i] >= W - l) inside = false;
            }
            if (inside && needed[flat] > l) {
                ok = false;
                bad = probe;
            }
        }
        if (ok) {
            wit.success = true;
            wit.gauge = l;
            wit.covered_bound = W - l;
            return wit;
        }
        wit.uncovered = bad;
    }
    wit.gauge = std::min(bound, W);
    return wit;
}

} // namespace

SyndeticityWitness syndeticity_witness(const EpsilonPeriodSet& pset, const Semigroup& desc,
                                       const WindowSpec& window, std::int64_t gauge_bound) {
    if (pset.members.empty())
        throw InvalidInputError("syndeticity_witness: empty period set (identity must be a member)");

    switch (desc.family()) {
    case Family::ZPlusD:
    case Family::RPlusGrid:
        return box_gauge_search(pset.members, desc.family() == Family::ZPlusD ? desc.dim() : 1,
                                window.bound, gauge_bound, desc);
    case Family::ZbarPlus: {
        // prefix {0..l-1} + the compactification point; inf is always covered
        // (tau o inf = inf with tau = e)
        SyndeticityWitness wit =
            box_gauge_search(pset.members, 1, window.bound, gauge_bound, desc);
        if (!wit.success) {
            // Zbar+ is compact: L = G itself witnesses T o L = G
            wit.success = true;
            wit.whole_semigroup = true;
            wit.gauge = window.bound + 1;
            wit.covered_bound = window.bound;
            wit.uncovered.reset();
        }
        return wit;
    }
    case Family::FiniteTable: {
        SyndeticityWitness wit;
        wit.success = true;
        wit.whole_semigroup = true;
        wit.gauge = static_cast<std::int64_t>(desc.carrier_size());
        wit.covered_bound = wit.gauge;
        return wit;
    }
    case Family::NonnegIntMatrix:
        throw InvalidInputError("syndeticity_witness: no gauge family for matrix semigroups");
    }
    throw InvalidInputError("syndeticity_witness: unknown family");
}

bool verify_syndeticity_by_enumeration(const EpsilonPeriodSet& pset, const Semigroup& desc,
                                       const WindowSpec& window, const SyndeticityWitness& wit) {
    if (!wit.success) return false;
    if (wit.whole_semigroup) return true; // T o G contains e o G = G

    auto targets = desc.enumerate_window(window);
    const std::int64_t l = wit.gauge;
    for (const Element& g : targets) {
        bool inside = true;
        for (int i = 0; i < g.size && inside; ++i)
            inside = g.v[i] != kInf && g.v[i] < wit.covered_bound;
        if (!inside) continue;
        bool covered = false;
        for (const Element& tau : pset.members) {
            if (covered) break;
            if (tau.v[0] == kInf) continue;
            // g = tau o ell with ell in [0,l)^d
            bool ok = true;
            for (int i = 0; i < g.size; ++i) {
                std::int64_t diff = g.v[i] - tau.v[i];
                if (diff < 0 || diff >= l) { ok = false; break; }
            }
            covered = ok;
        }
        if (!covered) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// certification
// ---------------------------------------------------------------------------

BohrCertificate certify_bohr(const ActionSystem& sys, const Point& x, double eps,
                             const std::vector<std::int64_t>& window_schedule,
                             const CertifyOptions& opts) {
    if (window_schedule.empty()) throw InvalidInputError("certify_bohr: empty window schedule");
    for (std::size_t i = 1; i < window_schedule.size(); ++i)
        if (window_schedule[i] <= window_schedule[i - 1])
            throw InvalidInputError("certify_bohr: schedule must be strictly growing");

    BohrCertificate cert;
    cert.eps = eps;
    cert.windows = window_schedule;

    bool gauge_failed = false;
    for (std::int64_t w : window_schedule) {
        WindowSpec win = WindowSpec::box(w);
        auto pset = epsilon_period_set(sys, x, eps, win, win);
        auto wit = syndeticity_witness(pset, sys.semigroup(), win, opts.gauge_bound);
        cert.member_counts.push_back(pset.members.size());
        cert.witnesses.push_back(wit);
        if (!wit.success) gauge_failed = true;
    }

    // equicontinuity probe at (capped) final window
    double delta_hat = eps;
    if (opts.run_probe) {
        std::int64_t probe_w = std::min(window_schedule.back(), opts.probe_window_cap);
        auto sample = sys.orbit(x, WindowSpec::box(std::min<std::int64_t>(probe_w, 2048)));
        auto net = epsilon_net(sys.space(), sample.points, eps / 4.0);
        EquicontinuityOptions eopts;
        eopts.seed = opts.seed;
        auto est = equicontinuity_modulus(sys, net, eps, WindowSpec::box(probe_w), eopts);
        delta_hat = est.delta_hat;
        cert.final_delta_hat = delta_hat;
    }
    bool collapsed = opts.run_probe && delta_hat < eps * opts.collapse_factor;

    if (gauge_failed || collapsed) {
        cert.status = CertStatus::RefutedAtResolution;
        cert.detail = gauge_failed ? "minimal gauge exceeded the configured bound"
                                   : "equicontinuity probe collapsed";
        return cert;
    }

    // stability: the gauge must not increase across the last half of the schedule
    bool stable = true;
    std::size_t half = window_schedule.size() / 2;
    auto effective = [](const SyndeticityWitness& w) {
        return w.whole_semigroup ? std::int64_t{0} : w.gauge;
    };
    for (std::size_t i = std::max<std::size_t>(half, 1); i < cert.witnesses.size(); ++i)
        if (effective(cert.witnesses[i]) > effective(cert.witnesses[i - 1])) stable = false;

    cert.status = stable ? CertStatus::CertifiedAtResolution : CertStatus::Inconclusive;
    if (!stable) cert.detail = "gauge did not stabilize across the window schedule";
    return cert;
}

// ---------------------------------------------------------------------------
// equicontinuity modulus
// ---------------------------------------------------------------------------

EquicontinuityEstimate equicontinuity_modulus(const ActionSystem& sys,
                                              const std::vector<Point>& net, double eps,
                                              const WindowSpec& window,
                                              const EquicontinuityOptions& opts) {
    if (net.empty()) throw InvalidInputError("equicontinuity_modulus: empty net");
    if (!(eps > 0)) throw InvalidInputError("equicontinuity_modulus: eps must be positive");

    std::vector<kernels::PointPair> pairs;
    const MetricSpace& space = sys.space();

    // net pairs below eps, in deterministic net order, capped
    for (std::size_t i = 0; i < net.size() && pairs.size() < opts.max_net_pairs; ++i)
        for (std::size_t j = i + 1; j < net.size() && pairs.size() < opts.max_net_pairs; ++j)
            if (space.distance(net[i], net[j]) < eps) pairs.emplace_back(net[i], net[j]);

    // synthetic near pairs at every ladder scale (dense orbit closures only)
    if (sys.orbit_closure_dense()) {
        for (int j = 0; j <= opts.ladder_depth; ++j) {
            double delta = eps * std::pow(2.0, -j);
            for (int c = 0; c < opts.companions_per_scale; ++c) {
                auto np = space.near_pair(delta, static_cast<std::uint64_t>(j * 131 + c));
                if (np) pairs.push_back(*np);
            }
        }
    }

    std::vector<double> initial(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        initial[i] = space.distance(pairs[i].first, pairs[i].second);
    std::vector<double> propagated = kernels::pair_propagation(sys, pairs, window);

    EquicontinuityEstimate est;
    est.eps = eps;
    est.window = window.bound;
    est.pair_count = pairs.size();

    double delta_hat = 0.0;
    for (int j = 0; j <= opts.ladder_depth; ++j) {
        double delta = eps * std::pow(2.0, -j);
        bool ok = true;
        for (std::size_t i = 0; i < pairs.size() && ok; ++i)
            ok = !(initial[i] < delta) || propagated[i] <= eps;
        if (ok) {
            delta_hat = delta;
            break;
        }
    }
    est.delta_hat = delta_hat;

    std::size_t worst = 0;
    for (std::size_t i = 1; i < pairs.size(); ++i)
        if (propagated[i] > propagated[worst]) worst = i;
    if (!pairs.empty()) {
        est.worst.a = pairs[worst].first;
        est.worst.b = pairs[worst].second;
        est.worst.initial = initial[worst];
        est.worst.propagated = propagated[worst];
    }
    return est;
}

// ---------------------------------------------------------------------------
// Cauchy products
// ---------------------------------------------------------------------------

CauchyProductReport cauchy_product_check(const ActionSystem& sys, const Point& y,
                                         const std::vector<Element>& seq_t,
                                         const std::vector<Element>& seq_s, std::size_t tail,
                                         double cauchy_threshold) {
    if (seq_t.size() != seq_s.size())
        throw InvalidInputError("cauchy_product_check: sequences must have equal length");
    if (tail >= seq_t.size())
        throw InvalidInputError("cauchy_product_check: tail index beyond sequence length");

    const MetricSpace& space = sys.space();
    auto tail_defect = [&](const std::vector<Point>& pts) {
        double m = 0.0;
        for (std::size_t n = tail; n < pts.size(); ++n)
            for (std::size_t k = n + 1; k < pts.size(); ++k)
                m = std::max(m, space.distance(pts[n], pts[k]));
        return m;
    };

    std::vector<Point> pt, ps, pp;
    pt.reserve(seq_t.size());
    ps.reserve(seq_t.size());
    pp.reserve(seq_t.size());
    for (std::size_t n = 0; n < seq_t.size(); ++n) {
        pt.push_back(sys.apply(seq_t[n], y));
        ps.push_back(sys.apply(seq_s[n], y));
        pp.push_back(sys.apply(sys.semigroup().compose(seq_t[n], seq_s[n]), y));
    }

    CauchyProductReport rep;
    rep.tail_defect_t = tail_defect(pt);
    rep.tail_defect_s = tail_defect(ps);
    if (rep.tail_defect_t > cauchy_threshold) {
        rep.precondition_ok = false;
        rep.failing_sequence = 0;
    } else if (rep.tail_defect_s > cauchy_threshold) {
        rep.precondition_ok = false;
        rep.failing_sequence = 1;
    }
    rep.product_tail_defect = tail_defect(pp);
    return rep;
}

} // namespace bohrlab
