#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bohrlab/space_action.hpp"

namespace bohrlab {

// ---------------------------------------------------------------------------
// Folner sequences
// ---------------------------------------------------------------------------
enum class FolnerKind : std::uint8_t { Cube, GridCube, JR, Explicit };

class FolnerSequence {
public:
    static FolnerSequence cubes(Semigroup g);      // F_n = [0,n)^d in Z_+^d
    static FolnerSequence grid_cubes(Semigroup g); // F_n = {0, h, ..., (n-1)h}
    static FolnerSequence jr(Semigroup g);         // F_n = {n^2, ..., n^2+n} in Z_+
    static FolnerSequence explicit_sets(Semigroup g, std::vector<std::vector<Element>> sets);

    FolnerKind kind() const { return kind_; }
    const Semigroup& semigroup() const { return desc_; }
    std::vector<Element> set(std::int64_t n) const;
    std::string name() const;

private:
    FolnerSequence() = default;
    FolnerKind kind_ = FolnerKind::Cube;
    Semigroup desc_ = Semigroup::zplus(1);
    std::vector<std::vector<Element>> sets_;
};

// the del Junco-Rosenblatt block {n^2, ..., n^2+n}
std::vector<std::int64_t> jr_values(std::int64_t n);

// lambda(F triangle g o F) / lambda(F), by enumeration
double folner_ratio(const Semigroup& desc, const QuasiHaar& mu, const std::vector<Element>& F,
                    const Element& g);

// ---------------------------------------------------------------------------
// empirical measures and the test-function metric
// ---------------------------------------------------------------------------
struct EmpiricalMeasure {
    std::vector<Point> support; // sorted by coordinate order
    std::vector<double> weights;
};

struct TestFunction {
    std::string name;
    double lipschitz = 1.0;
    double sup_bound = 1.0;
    std::function<double(const Point&)> eval;
};

struct TestFunctionFamily {
    std::vector<TestFunction> fns;

    // real/imaginary parts of characters e^{2 pi i k.x} with |k|_inf <= kmax
    static TestFunctionFamily torus_characters(int torus_dim, int kmax);
    // min(1, d(., p)/r) for seeded landmark points p
    static TestFunctionFamily landmarks(const MetricSpace& space, int count, double radius,
                                        std::uint64_t seed);
};

EmpiricalMeasure empirical_measure(const ActionSystem& sys, const Point& x,
                                   const std::vector<Element>& F, const QuasiHaar& mu);

EmpiricalMeasure pushforward(const ActionSystem& sys, const EmpiricalMeasure& m, const Element& g);

double integral(const EmpiricalMeasure& m, const TestFunction& fn);

double folner_average(const ActionSystem& sys, const Point& x, const TestFunction& fn,
                      const std::vector<Element>& F, const QuasiHaar& mu);

// weak-* surrogate: max over the family of |int f dm1 - int f dm2|, normalized
// by max(1, sup|f|). (The declared Lipschitz constants are verified by tests
// but deliberately do not rescale the metric; see README.)
double bl_distance(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2,
                   const TestFunctionFamily& fam);

// ---------------------------------------------------------------------------
// Haar measures of finite commutative semigroups
// ---------------------------------------------------------------------------
struct InvariantMeasureSolution {
    std::vector<double> weights;       // probability vector over the carrier
    double residual = 0.0;             // max_g max_atom invariance violation
    std::size_t iterations = 0;
    std::vector<double> residual_history;
};

struct HaarOptions {
    std::vector<double> start;   // empty = uniform
    double tolerance = 1e-12;
    std::size_t max_iterations = 100000;
};

// averaging-operator iteration mu <- (1/|K|) sum_g mu o L_g^{-1}
InvariantMeasureSolution haar_solve_finite(const Semigroup& desc, const HaarOptions& opts = {});

// independent oracle: least-squares solve of the invariance constraints
std::vector<double> haar_linear_oracle(const Semigroup& desc);

// ---------------------------------------------------------------------------
// unique ergodicity / uniform convergence probes
// ---------------------------------------------------------------------------
struct UniqueErgodicityReport {
    std::vector<std::int64_t> schedule;
    std::vector<double> diameters;             // weak-* diameter over basepoints per n
    std::vector<std::vector<double>> averages; // [n index][fn * basepoints] raw values
    bool consistent = false;
    std::string verdict;
};

UniqueErgodicityReport unique_ergodicity_probe(const ActionSystem& sys,
                                               const std::vector<Point>& basepoints,
                                               const FolnerSequence& folner,
                                               const TestFunctionFamily& fam,
                                               const std::vector<std::int64_t>& schedule,
                                               double tolerance);

struct UniformConvergenceSeries {
    std::vector<std::int64_t> schedule;
    std::vector<double> deviations;            // max over basepoints per n
    std::vector<std::vector<double>> values;   // [n index][basepoint]
};

UniformConvergenceSeries uniform_convergence_probe(const ActionSystem& sys,
                                                   const std::vector<Point>& basepoints,
                                                   const FolnerSequence& folner,
                                                   const TestFunction& fn, double target,
                                                   const std::vector<std::int64_t>& schedule);

// ---------------------------------------------------------------------------
// Shulman condition diagnostics (computed in the enveloping group Z^d)
// ---------------------------------------------------------------------------
struct ShulmanReport {
    std::vector<std::int64_t> ns;
    std::vector<double> constants; // c_n = lambda(U_{k<n} F_k^{-1} F_n) / lambda(F_n)
    bool bounded_looking = false;
    double bound_threshold = 4.0;
};

ShulmanReport shulman_constant(const FolnerSequence& folner, std::int64_t n_max,
                               double bound_threshold = 4.0);

} // namespace bohrlab
