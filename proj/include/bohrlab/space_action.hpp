#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bohrlab/rng.hpp"
#include "bohrlab/semigroup.hpp"

namespace bohrlab {

enum class SpaceTag : std::uint8_t { Torus, ZbarPlusSpace, FiniteSpace, Product };

// A space point is a flat payload; the owning MetricSpace interprets it.
// Torus: nx coordinates in [0,1). ZbarPlusSpace / FiniteSpace: iv[0] holds the
// value (kInf for the compactification point) or the point index. Product
// spaces concatenate the payloads of their factors.
//
// exact_den != 0 marks a torus coordinate known exactly as the rational
// exact_num/exact_den; the doubling action uses it to run long orbits without
// losing mantissa bits (x[0] mirrors the rational, rounded to double).
struct Point {
    std::array<double, 4> x{};
    std::array<std::int64_t, 2> iv{};
    std::uint8_t nx = 0;
    std::uint8_t ni = 0;
    std::uint64_t exact_num = 0;
    std::uint64_t exact_den = 0;

    static Point torus1(double v) {
        Point p;
        p.nx = 1;
        p.x[0] = v;
        return p;
    }
    static Point zbar(std::int64_t v) {
        Point p;
        p.ni = 1;
        p.iv[0] = v;
        return p;
    }
    static Point finite(std::int64_t idx) { return zbar(idx); }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.nx != b.nx || a.ni != b.ni) return false;
        for (int i = 0; i < a.nx; ++i)
            if (a.x[i] != b.x[i]) return false;
        for (int i = 0; i < a.ni; ++i)
            if (a.iv[i] != b.iv[i]) return false;
        return true;
    }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
    // coordinate order; used for deterministic tie resolution
    friend bool operator<(const Point& a, const Point& b) {
        for (int i = 0; i < a.nx && i < b.nx; ++i)
            if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
        if (a.nx != b.nx) return a.nx < b.nx;
        for (int i = 0; i < a.ni && i < b.ni; ++i)
            if (a.iv[i] != b.iv[i]) return a.iv[i] < b.iv[i];
        return a.ni < b.ni;
    }
};

// ---------------------------------------------------------------------------
// MetricSpace: compact metric space with an evaluator, a seeded sampler and a
// diameter bound. Torus metric: max over coordinates of circle distance.
// ZbarPlusSpace metric: |1/(m+1) - 1/(n+1)| with 1/(inf+1) = 0.
// ---------------------------------------------------------------------------
class MetricSpace {
public:
    static MetricSpace torus(int k);
    static MetricSpace zbar_space(std::int64_t sampler_cutoff);
    static MetricSpace finite(std::int64_t count);
    static MetricSpace product(MetricSpace a, MetricSpace b);

    SpaceTag tag() const { return tag_; }
    int torus_dim() const { return k_; }
    std::int64_t point_count() const { return count_; } // finite spaces
    double diameter() const { return diameter_; }

    double distance(const Point& a, const Point& b) const;
    Point sample(SplitMix64& rng) const;
    bool contains(const Point& p) const;

    // Deterministic pair of distinct points at distance < delta, or nullopt
    // when the space has no such pair. Index k varies the construction.
    std::optional<std::pair<Point, Point>> near_pair(double delta, std::uint64_t k) const;

    std::string tag_string() const { return name_; }

private:
    MetricSpace() = default;

    SpaceTag tag_ = SpaceTag::Torus;
    int k_ = 1;                  // torus dimension
    std::int64_t count_ = 0;     // finite carrier size / zbar sampler cutoff
    double diameter_ = 0.5;
    std::string name_;
    std::vector<MetricSpace> parts_; // product factors
};

// zbar-space coordinate embedding value 1/(n+1), 0 for inf
double zbar_embed(std::int64_t n);

struct OrbitSample {
    Point basepoint;
    std::vector<Element> elements;
    std::vector<Point> points;
};

// ---------------------------------------------------------------------------
// ActionSystem: a semigroup acting continuously on a compact metric space.
// Shipped systems:
//   torus_translation  pi(n, x) = x + n*A mod 1   (isometry)
//   zbar_self_action   pi(s, x) = s o x           (nonexpanding)
//   doubling           pi(n, x) = 2^n x mod 1     (expanding negative control)
//   finite_action      table-driven action on a finite space
// ---------------------------------------------------------------------------
enum class ActionKind : std::uint8_t { TorusTranslation, ZbarSelf, Doubling, FiniteAction };
enum class ModulusHint : std::uint8_t { None, Isometric, Nonexpanding };

class ActionSystem {
public:
    // rows of `vectors` are the per-generator translation vectors (d rows, k columns)
    static ActionSystem torus_translation(Semigroup g, int k,
                                          std::vector<std::vector<double>> vectors);
    // default irrational translation vectors for d generators on T^k
    static std::vector<std::vector<double>> default_alphas(int d, int k);

    static ActionSystem zbar_self_action(std::int64_t sampler_cutoff);
    static ActionSystem doubling(std::uint64_t seed);
    // action_table[g*count + i] = image index of point i under carrier element g
    static ActionSystem finite_action(Semigroup g, std::int64_t count,
                                      std::vector<std::int32_t> action_table);

    ActionKind kind() const { return kind_; }
    const Semigroup& semigroup() const { return semigroup_; }
    const MetricSpace& space() const { return space_; }
    ModulusHint modulus_hint() const { return hint_; }
    // true when synthetic near pairs are legitimate orbit-closure probes
    bool orbit_closure_dense() const { return dense_orbit_closure_; }

    Point apply(const Element& g, const Point& x) const;

    // default / generic basepoints (doubling: exact rational from the seed)
    Point default_basepoint() const { return basepoint_; }
    Point generic_point(SplitMix64& rng) const;

    // deterministic orbit over a window, in window enumeration order
    OrbitSample orbit(const Point& y, const WindowSpec& w) const;

    // orbit points over {0,1,...,count-1} for Z_+-like one-parameter windows;
    // used by the scan kernels (sequential for the doubling engine)
    std::vector<Point> orbit_ray(const Point& y, std::int64_t count) const;

    std::string tag_string() const { return name_; }

    std::uint64_t doubling_modulus() const { return q_; }

private:
    ActionSystem() = default;

    ActionKind kind_ = ActionKind::TorusTranslation;
    Semigroup semigroup_ = Semigroup::zplus(1);
    MetricSpace space_ = MetricSpace::torus(1);
    ModulusHint hint_ = ModulusHint::None;
    bool dense_orbit_closure_ = false;
    Point basepoint_;
    std::string name_;

    std::vector<std::vector<double>> vectors_; // torus translation rows
    std::uint64_t q_ = 0;                      // doubling modulus (prime)
    std::uint64_t p_ = 0;                      // doubling generic numerator
    std::vector<std::int32_t> action_table_;   // finite action
    std::int64_t space_count_ = 0;
};

// Greedy epsilon net over `points` in input order: the first point is always
// selected, net points end up pairwise > eps apart, and every input point is
// within eps of a net point. The cover property is re-verified by brute force
// on every call.
std::vector<Point> epsilon_net(const MetricSpace& space, const std::vector<Point>& points,
                               double eps);
// same, returning indices into `points`
std::vector<std::size_t> epsilon_net_indices(const MetricSpace& space,
                                             const std::vector<Point>& points, double eps);

} // namespace bohrlab
