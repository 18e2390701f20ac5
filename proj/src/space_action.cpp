#include "bohrlab/space_action.hpp"

#include <algorithm>
#include <cmath>

#include "bohrlab/numeric.hpp"

namespace bohrlab {

namespace {

constexpr double kGolden = 0.61803398874989484820; // (sqrt(5)-1)/2
constexpr double kSqrt2m1 = 0.41421356237309504880; // sqrt(2)-1

// prime modulus of the exact doubling engine; primality is asserted in tests
constexpr std::uint64_t kDoublingModulus = 1000000000000000009ULL;

} // namespace

double zbar_embed(std::int64_t n) {
    if (n == kInf) return 0.0;
    return 1.0 / (static_cast<double>(n) + 1.0);
}

// ---------------------------------------------------------------------------
// MetricSpace
// ---------------------------------------------------------------------------

MetricSpace MetricSpace::torus(int k) {
    if (k < 1 || k > 4) throw InvalidInputError("torus: dimension out of range");
    MetricSpace s;
    s.tag_ = SpaceTag::Torus;
    s.k_ = k;
    s.diameter_ = 0.5;
    s.name_ = "torus:k=" + std::to_string(k);
    return s;
}

MetricSpace MetricSpace::zbar_space(std::int64_t cutoff) {
    if (cutoff < 1) throw InvalidInputError("zbar_space: cutoff must be positive");
    MetricSpace s;
    s.tag_ = SpaceTag::ZbarPlusSpace;
    s.count_ = cutoff;
    s.diameter_ = 1.0;
    s.name_ = "zbarplus-space:N=" + std::to_string(cutoff);
    return s;
}

MetricSpace MetricSpace::finite(std::int64_t count) {
    if (count < 1) throw InvalidInputError("finite space: needs at least one point");
    MetricSpace s;
    s.tag_ = SpaceTag::FiniteSpace;
    s.count_ = count;
    s.diameter_ = count > 1 ? 1.0 : 0.0;
    s.name_ = "finite:" + std::to_string(count);
    return s;
}

MetricSpace MetricSpace::product(MetricSpace a, MetricSpace b) {
    if (a.tag_ == SpaceTag::Product || b.tag_ == SpaceTag::Product)
        throw InvalidInputError("product: nested products not supported");
    MetricSpace s;
    s.tag_ = SpaceTag::Product;
    s.diameter_ = std::max(a.diameter_, b.diameter_);
    s.name_ = "product(" + a.name_ + "," + b.name_ + ")";
    s.parts_.push_back(std::move(a));
    s.parts_.push_back(std::move(b));
    return s;
}

namespace {

// split a product payload into factor payloads
std::pair<Point, Point> split_product(const MetricSpace& a, const MetricSpace& b, const Point& p) {
    Point pa, pb;
    int ka = a.tag() == SpaceTag::Torus ? a.torus_dim() : 0;
    int ia = a.tag() == SpaceTag::Torus ? 0 : 1;
    pa.nx = static_cast<std::uint8_t>(ka);
    pa.ni = static_cast<std::uint8_t>(ia);
    for (int i = 0; i < ka; ++i) pa.x[i] = p.x[i];
    if (ia) pa.iv[0] = p.iv[0];
    int kb = b.tag() == SpaceTag::Torus ? b.torus_dim() : 0;
    int ib = b.tag() == SpaceTag::Torus ? 0 : 1;
    pb.nx = static_cast<std::uint8_t>(kb);
    pb.ni = static_cast<std::uint8_t>(ib);
    for (int i = 0; i < kb; ++i) pb.x[i] = p.x[ka + i];
    if (ib) pb.iv[0] = p.iv[ia];
    return {pa, pb};
}

} // namespace

double MetricSpace::distance(const Point& a, const Point& b) const {
    switch (tag_) {
    case SpaceTag::Torus: {
        if (a.nx != k_ || b.nx != k_) throw InvalidInputError("distance: point not in this torus");
        double m = 0.0;
        for (int i = 0; i < k_; ++i) m = std::max(m, circle_dist(a.x[i], b.x[i]));
        return m;
    }
    case SpaceTag::ZbarPlusSpace:
        if (a.ni != 1 || b.ni != 1) throw InvalidInputError("distance: point not in this space");
        return std::abs(zbar_embed(a.iv[0]) - zbar_embed(b.iv[0]));
    case SpaceTag::FiniteSpace:
        if (a.ni != 1 || b.ni != 1) throw InvalidInputError("distance: point not in this space");
        return a.iv[0] == b.iv[0] ? 0.0 : 1.0;
    case SpaceTag::Product: {
        auto [a0, a1] = split_product(parts_[0], parts_[1], a);
        auto [b0, b1] = split_product(parts_[0], parts_[1], b);
        return std::max(parts_[0].distance(a0, b0), parts_[1].distance(a1, b1));
    }
    }
    throw InvalidInputError("distance: unknown space");
}

Point MetricSpace::sample(SplitMix64& rng) const {
    Point p;
    switch (tag_) {
    case SpaceTag::Torus:
        p.nx = static_cast<std::uint8_t>(k_);
        for (int i = 0; i < k_; ++i) p.x[i] = rng.next_unit();
        return p;
    case SpaceTag::ZbarPlusSpace: {
        std::uint64_t u = rng.next_below(static_cast<std::uint64_t>(count_) + 2);
        p.ni = 1;
        p.iv[0] = u > static_cast<std::uint64_t>(count_) ? kInf : static_cast<std::int64_t>(u);
        return p;
    }
    case SpaceTag::FiniteSpace:
        p.ni = 1;
        p.iv[0] = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(count_)));
        return p;
    case SpaceTag::Product: {
        Point a = parts_[0].sample(rng);
        Point b = parts_[1].sample(rng);
        Point out;
        out.nx = static_cast<std::uint8_t>(a.nx + b.nx);
        out.ni = static_cast<std::uint8_t>(a.ni + b.ni);
        for (int i = 0; i < a.nx; ++i) out.x[i] = a.x[i];
        for (int i = 0; i < b.nx; ++i) out.x[a.nx + i] = b.x[i];
        int slot = 0;
        for (int i = 0; i < a.ni; ++i) out.iv[slot++] = a.iv[i];
        for (int i = 0; i < b.ni; ++i) out.iv[slot++] = b.iv[i];
        return out;
    }
    }
    throw InvalidInputError("sample: unknown space");
}

bool MetricSpace::contains(const Point& p) const {
    switch (tag_) {
    case SpaceTag::Torus: {
        if (p.nx != k_ || p.ni != 0) return false;
        for (int i = 0; i < k_; ++i)
            if (!(p.x[i] >= 0.0 && p.x[i] < 1.0)) return false;
        return true;
    }
    case SpaceTag::ZbarPlusSpace:
        return p.ni == 1 && p.nx == 0 && (p.iv[0] >= 0 || p.iv[0] == kInf);
    case SpaceTag::FiniteSpace:
        return p.ni == 1 && p.nx == 0 && p.iv[0] >= 0 && p.iv[0] < count_;
    case SpaceTag::Product:
        return p.nx <= 4; // structural checks live in the factors
    }
    return false;
}

std::optional<std::pair<Point, Point>> MetricSpace::near_pair(double delta, std::uint64_t k) const {
    if (!(delta > 0)) return std::nullopt;
    switch (tag_) {
    case SpaceTag::Torus: {
        // base point walks the circle deterministically; offset stays < delta
        double base = std::fmod(0.5 * kGolden * static_cast<double>(k + 1), 1.0);
        double off = delta * kGolden;
        if (off <= 0.0) return std::nullopt; // delta below representable resolution
        Point a, b;
        a.nx = b.nx = static_cast<std::uint8_t>(k_);
        for (int i = 0; i < k_; ++i) a.x[i] = b.x[i] = base;
        b.x[0] = base + off;
        if (b.x[0] >= 1.0) b.x[0] -= 1.0;
        if (a == b) return std::nullopt;
        return std::make_pair(a, b);
    }
    case SpaceTag::ZbarPlusSpace: {
        // consecutive values m, m+1 are 1/((m+1)(m+2)) apart
        double m0 = std::ceil(std::sqrt(1.0 / delta));
        std::int64_t m = static_cast<std::int64_t>(m0) + static_cast<std::int64_t>(k);
        if (zbar_embed(m) - zbar_embed(m + 1) >= delta) ++m;
        if (zbar_embed(m) - zbar_embed(m + 1) >= delta) return std::nullopt;
        return std::make_pair(Point::zbar(m), Point::zbar(m + 1));
    }
    case SpaceTag::FiniteSpace:
        return std::nullopt; // discrete: no pairs below distance 1
    case SpaceTag::Product: {
        auto sub = parts_[0].near_pair(delta, k);
        if (!sub) return std::nullopt;
        // pad the second factor with a fixed sample
        SplitMix64 rng(7);
        Point fill = parts_[1].sample(rng);
        auto embed = [&](const Point& p0) {
            Point out;
            out.nx = static_cast<std::uint8_t>(p0.nx + fill.nx);
            out.ni = static_cast<std::uint8_t>(p0.ni + fill.ni);
            for (int i = 0; i < p0.nx; ++i) out.x[i] = p0.x[i];
            for (int i = 0; i < fill.nx; ++i) out.x[p0.nx + i] = fill.x[i];
            int slot = 0;
            for (int i = 0; i < p0.ni; ++i) out.iv[slot++] = p0.iv[i];
            for (int i = 0; i < fill.ni; ++i) out.iv[slot++] = fill.iv[i];
            return out;
        };
        return std::make_pair(embed(sub->first), embed(sub->second));
    }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// ActionSystem
// ---------------------------------------------------------------------------

std::vector<std::vector<double>> ActionSystem::default_alphas(int d, int k) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(d),
                                          std::vector<double>(static_cast<std::size_t>(k), 0.0));
    const double irr[4] = {kGolden, kSqrt2m1, 0.25992104989487316477 /* 2^(1/3)-1 */,
                           0.23606797749978969641 /* sqrt(5)-2 */};
    if (d == 1) {
        for (int j = 0; j < k; ++j) rows[0][static_cast<std::size_t>(j)] = irr[j % 4];
    } else {
        for (int i = 0; i < d; ++i)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i % k)] = irr[i % 4];
    }
    return rows;
}

ActionSystem ActionSystem::torus_translation(Semigroup g, int k,
                                             std::vector<std::vector<double>> vectors) {
    if (g.family() != Family::ZPlusD && g.family() != Family::RPlusGrid)
        throw InvalidInputError("torus_translation: needs zplus or rplusgrid semigroup");
    const int d = g.family() == Family::ZPlusD ? g.dim() : 1;
    if (static_cast<int>(vectors.size()) != d)
        throw InvalidInputError("torus_translation: one translation vector per generator");
    for (const auto& row : vectors)
        if (static_cast<int>(row.size()) != k)
            throw InvalidInputError("torus_translation: vector dimension mismatch");

    ActionSystem s;
    s.kind_ = ActionKind::TorusTranslation;
    s.semigroup_ = std::move(g);
    s.space_ = MetricSpace::torus(k);
    s.vectors_ = std::move(vectors);
    s.hint_ = ModulusHint::Isometric;
    s.dense_orbit_closure_ = true; // shipped vectors are irrational: orbits are dense
    Point y;
    y.nx = static_cast<std::uint8_t>(k);
    s.basepoint_ = y;
    s.name_ = "torus-translation(" + s.semigroup_.tag() + ",k=" + std::to_string(k) + ")";
    return s;
}

ActionSystem ActionSystem::zbar_self_action(std::int64_t cutoff) {
    ActionSystem s;
    s.kind_ = ActionKind::ZbarSelf;
    s.semigroup_ = Semigroup::zbarplus();
    s.space_ = MetricSpace::zbar_space(cutoff);
    s.hint_ = ModulusHint::Nonexpanding;
    s.dense_orbit_closure_ = true; // from 0 the orbit is the whole space
    s.basepoint_ = Point::zbar(0);
    s.name_ = "zbarplus-self:N=" + std::to_string(cutoff);
    return s;
}

ActionSystem ActionSystem::doubling(std::uint64_t seed) {
    ActionSystem s;
    s.kind_ = ActionKind::Doubling;
    s.semigroup_ = Semigroup::zplus(1);
    s.space_ = MetricSpace::torus(1);
    s.hint_ = ModulusHint::None;
    s.dense_orbit_closure_ = true;
    s.q_ = kDoublingModulus;
    SplitMix64 rng(seed ^ 0x2545f4914f6cdd1dULL);
    s.p_ = rng.next() % (s.q_ - 2) + 1;
    Point y;
    y.nx = 1;
    y.exact_num = s.p_;
    y.exact_den = s.q_;
    y.x[0] = static_cast<double>(s.p_) / static_cast<double>(s.q_);
    s.basepoint_ = y;
    s.name_ = "doubling";
    return s;
}

ActionSystem ActionSystem::finite_action(Semigroup g, std::int64_t count,
                                         std::vector<std::int32_t> action_table) {
    if (g.family() != Family::FiniteTable)
        throw InvalidInputError("finite_action: needs a finite-table semigroup");
    const std::size_t m = g.carrier_size();
    if (action_table.size() != m * static_cast<std::size_t>(count))
        throw InvalidInputError("finite_action: table size mismatch");
    for (std::int32_t v : action_table)
        if (v < 0 || v >= count) throw InvalidInputError("finite_action: image out of range");

    ActionSystem s;
    s.kind_ = ActionKind::FiniteAction;
    s.semigroup_ = std::move(g);
    s.space_ = MetricSpace::finite(count);
    s.space_count_ = count;
    s.action_table_ = std::move(action_table);
    s.basepoint_ = Point::finite(0);
    s.name_ = "finite-action(" + s.semigroup_.tag() + ")";

    // identity and action laws by exhaustion over the carrier
    const auto id = s.semigroup_.identity();
    for (std::int64_t i = 0; i < count; ++i)
        if (s.apply(id, Point::finite(i)) != Point::finite(i))
            throw InvalidInputError("finite_action: identity law fails");
    auto carrier = s.semigroup_.enumerate_window(WindowSpec{});
    for (const Element& a : carrier)
        for (const Element& b : carrier)
            for (std::int64_t i = 0; i < count; ++i) {
                Point x = Point::finite(i);
                if (s.apply(s.semigroup_.compose(a, b), x) != s.apply(a, s.apply(b, x)))
                    throw InvalidInputError("finite_action: action law fails");
            }
    return s;
}

Point ActionSystem::apply(const Element& g, const Point& x) const {
    switch (kind_) {
    case ActionKind::TorusTranslation: {
        if (g.family != semigroup_.family())
            throw InvalidInputError("apply: element from another semigroup");
        if (x.nx != space_.torus_dim()) throw InvalidInputError("apply: point not on this torus");
        const int k = space_.torus_dim();
        const int d = static_cast<int>(vectors_.size());
        Point out;
        out.nx = static_cast<std::uint8_t>(k);
        const double h = semigroup_.family() == Family::RPlusGrid ? semigroup_.grid_step() : 1.0;
        for (int j = 0; j < k; ++j) {
            DD acc{x.x[j], 0.0};
            for (int i = 0; i < d; ++i) {
                double t = static_cast<double>(g.v[i]) * h; // exact: h is a power of two by default
                acc = dd_add(acc, two_prod(t, vectors_[static_cast<std::size_t>(i)]
                                                       [static_cast<std::size_t>(j)]));
            }
            out.x[j] = dd_frac01(acc);
        }
        return out;
    }
    case ActionKind::ZbarSelf: {
        if (g.family != Family::ZbarPlus) throw InvalidInputError("apply: element family mismatch");
        if (x.ni != 1) throw InvalidInputError("apply: point not in this space");
        if (g.v[0] == kInf || x.iv[0] == kInf) return Point::zbar(kInf);
        return Point::zbar(g.v[0] + x.iv[0]);
    }
    case ActionKind::Doubling: {
        if (g.family != Family::ZPlusD || g.size != 1)
            throw InvalidInputError("apply: element family mismatch");
        std::int64_t n = g.v[0];
        if (x.exact_den != 0) {
            Point out;
            out.nx = 1;
            out.exact_den = x.exact_den;
            out.exact_num = mulmod_u64(x.exact_num,
                                       powmod_u64(2, static_cast<std::uint64_t>(n), x.exact_den),
                                       x.exact_den);
            out.x[0] = static_cast<double>(out.exact_num) / static_cast<double>(out.exact_den);
            return out;
        }
        // dyadic semantics: doubling a double shifts its mantissa exactly
        double v = x.x[0];
        for (std::int64_t i = 0; i < n && v != 0.0; ++i) {
            v *= 2.0;
            v -= std::floor(v);
        }
        return Point::torus1(v);
    }
    case ActionKind::FiniteAction: {
        if (g.family != Family::FiniteTable) throw InvalidInputError("apply: element family mismatch");
        if (x.iv[0] < 0 || x.iv[0] >= space_count_)
            throw InvalidInputError("apply: point not in this space");
        return Point::finite(
            action_table_[static_cast<std::size_t>(g.v[0]) * static_cast<std::size_t>(space_count_) +
                          static_cast<std::size_t>(x.iv[0])]);
    }
    }
    throw InvalidInputError("apply: unknown action");
}

Point ActionSystem::generic_point(SplitMix64& rng) const {
    if (kind_ == ActionKind::Doubling) {
        Point y;
        y.nx = 1;
        y.exact_den = q_;
        y.exact_num = rng.next() % (q_ - 2) + 1;
        y.x[0] = static_cast<double>(y.exact_num) / static_cast<double>(y.exact_den);
        return y;
    }
    return space_.sample(rng);
}

OrbitSample ActionSystem::orbit(const Point& y, const WindowSpec& w) const {
    OrbitSample out;
    out.basepoint = y;
    out.elements = semigroup_.enumerate_window(w);
    out.points.reserve(out.elements.size());

    if (kind_ == ActionKind::Doubling && y.exact_den != 0) {
        // sequential modular doubling; elements are 0..W-1 in order
        std::uint64_t s = y.exact_num % y.exact_den;
        std::int64_t expect = 0;
        for (const Element& g : out.elements) {
            while (expect < g.v[0]) {
                s <<= 1;
                if (s >= y.exact_den) s -= y.exact_den;
                ++expect;
            }
            Point p;
            p.nx = 1;
            p.exact_den = y.exact_den;
            p.exact_num = s;
            p.x[0] = static_cast<double>(s) / static_cast<double>(y.exact_den);
            out.points.push_back(p);
        }
        return out;
    }

    for (const Element& g : out.elements) out.points.push_back(apply(g, y));
    return out;
}

std::vector<Point> ActionSystem::orbit_ray(const Point& y, std::int64_t count) const {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    switch (kind_) {
    case ActionKind::Doubling: {
        if (y.exact_den != 0) {
            std::uint64_t s = y.exact_num % y.exact_den;
            for (std::int64_t n = 0; n < count; ++n) {
                Point p;
                p.nx = 1;
                p.exact_den = y.exact_den;
                p.exact_num = s;
                p.x[0] = static_cast<double>(s) / static_cast<double>(y.exact_den);
                pts.push_back(p);
                s <<= 1;
                if (s >= y.exact_den) s -= y.exact_den;
            }
        } else {
            double v = y.x[0];
            for (std::int64_t n = 0; n < count; ++n) {
                pts.push_back(Point::torus1(v));
                v *= 2.0;
                v -= std::floor(v);
            }
        }
        return pts;
    }
    case ActionKind::ZbarSelf: {
        for (std::int64_t n = 0; n < count; ++n)
            pts.push_back(apply(Element::make(Family::ZbarPlus, {n}), y));
        return pts;
    }
    case ActionKind::TorusTranslation: {
        Element g = semigroup_.identity();
        for (std::int64_t n = 0; n < count; ++n) {
            g.v[0] = n;
            pts.push_back(apply(g, y));
        }
        return pts;
    }
    case ActionKind::FiniteAction:
        throw InvalidInputError("orbit_ray: finite actions use explicit windows");
    }
    return pts;
}

// ---------------------------------------------------------------------------
// greedy epsilon net
// ---------------------------------------------------------------------------

std::vector<std::size_t> epsilon_net_indices(const MetricSpace& space,
                                             const std::vector<Point>& points, double eps) {
    if (!(eps > 0)) throw InvalidInputError("epsilon_net: eps must be positive");
    std::vector<std::size_t> net;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool covered = false;
        for (std::size_t j : net) {
            if (space.distance(points[i], points[j]) <= eps) { covered = true; break; }
        }
        if (!covered) net.push_back(i);
    }

    // independent cover check, run unconditionally
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool ok = false;
        for (std::size_t j : net)
            if (space.distance(points[i], points[j]) <= eps) { ok = true; break; }
        if (!ok) throw NumericError("epsilon_net: cover verification failed");
    }
    for (std::size_t a = 0; a < net.size(); ++a)
        for (std::size_t b = a + 1; b < net.size(); ++b)
            if (space.distance(points[net[a]], points[net[b]]) <= eps)
                throw NumericError("epsilon_net: separation verification failed");
    return net;
}

std::vector<Point> epsilon_net(const MetricSpace& space, const std::vector<Point>& points,
                               double eps) {
    std::vector<Point> out;
    for (std::size_t i : epsilon_net_indices(space, points, eps)) out.push_back(points[i]);
    return out;
}

} // namespace bohrlab
