#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bohrlab/space_action.hpp"

namespace bohrlab {

// ---------------------------------------------------------------------------
// eps-error period sets and syndeticity witnesses at finite resolution
// ---------------------------------------------------------------------------
struct EpsilonPeriodSet {
    double eps = 0.0;
    WindowSpec window;            // defect window
    WindowSpec candidate_window;  // candidates scanned
    std::vector<Element> members;
    std::vector<double> defects;  // parallel to members; exact maxima
};

struct SyndeticityWitness {
    bool success = false;
    std::int64_t gauge = 0;       // box/prefix size l
    bool whole_semigroup = false; // compact G: L = G is the (trivial) witness
    std::int64_t covered_bound = 0;
    std::optional<Element> uncovered;
};

enum class CertStatus : std::uint8_t {
    CertifiedAtResolution,
    RefutedAtResolution,
    Inconclusive,
};

std::string to_string(CertStatus s);

struct PointPairRecord {
    Point a, b;
    double initial = 0.0;
    double propagated = 0.0;
};

struct EquicontinuityEstimate {
    double eps = 0.0;
    double delta_hat = 0.0;
    std::int64_t window = 0;
    std::size_t pair_count = 0;
    PointPairRecord worst;
};

struct BohrCertificate {
    CertStatus status = CertStatus::Inconclusive;
    double eps = 0.0;
    std::vector<std::int64_t> windows;
    std::vector<SyndeticityWitness> witnesses;
    std::vector<std::size_t> member_counts;
    double final_delta_hat = 0.0;
    std::string detail;
};

struct CertifyOptions {
    std::int64_t gauge_bound = 256;
    std::uint64_t seed = 1;
    // equicontinuity probe: window/net caps and the collapse threshold factor
    std::int64_t probe_window_cap = 4096;
    double collapse_factor = 0x1.0p-20;
    bool run_probe = true;
};

struct EquicontinuityOptions {
    int ladder_depth = 40;
    std::size_t max_net_pairs = 2048;
    int companions_per_scale = 2;
    std::uint64_t seed = 1;
};

struct CauchyProductReport {
    bool precondition_ok = true;
    double tail_defect_t = 0.0; // Cauchy defect of (pi(t_n, y))) beyond `tail`
    double tail_defect_s = 0.0;
    int failing_sequence = -1;  // 0 = t, 1 = s when the precondition fails
    double product_tail_defect = 0.0;
};

// max over the window of d(pi(g,x), pi(tau o g, x)); exact (no sampling)
double period_defect(const ActionSystem& sys, const Point& x, const Element& tau,
                     const WindowSpec& window);

// all candidates with period_defect < eps, with their exact defects
EpsilonPeriodSet epsilon_period_set(const ActionSystem& sys, const Point& x, double eps,
                                    const WindowSpec& window, const WindowSpec& candidate_window);

// smallest family gauge L (box [0,l)^d, prefix-plus-inf for Zbar+) with
// members o L covering the window shrunken by l; compact families fall back
// to the whole-semigroup witness L = G.
SyndeticityWitness syndeticity_witness(const EpsilonPeriodSet& pset, const Semigroup& desc,
                                       const WindowSpec& window,
                                       std::int64_t gauge_bound = 256);

// enumeration recheck of a successful witness (test oracle)
bool verify_syndeticity_by_enumeration(const EpsilonPeriodSet& pset, const Semigroup& desc,
                                       const WindowSpec& window, const SyndeticityWitness& wit);

BohrCertificate certify_bohr(const ActionSystem& sys, const Point& x, double eps,
                             const std::vector<std::int64_t>& window_schedule,
                             const CertifyOptions& opts = {});

// largest delta from the ladder eps*2^-j such that every probed pair within
// delta propagates through the window to <= eps. `net` is an orbit net (see
// orbit_algebra / epsilon_net); synthetic near pairs are added for systems
// with dense orbit closures so that expansion below the net resolution is
// still visible.
EquicontinuityEstimate equicontinuity_modulus(const ActionSystem& sys,
                                              const std::vector<Point>& net, double eps,
                                              const WindowSpec& window,
                                              const EquicontinuityOptions& opts = {});

CauchyProductReport cauchy_product_check(const ActionSystem& sys, const Point& y,
                                         const std::vector<Element>& seq_t,
                                         const std::vector<Element>& seq_s, std::size_t tail,
                                         double cauchy_threshold);

} // namespace bohrlab
