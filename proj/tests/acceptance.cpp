// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here in code; nothing defers to later tuning.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bohrlab/almost_periodicity.hpp"
#include "bohrlab/ergodic.hpp"
#include "bohrlab/experiment.hpp"
#include "bohrlab/orbit_algebra.hpp"
#include "bohrlab/rng.hpp"

using namespace bohrlab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

ActionSystem golden() {
    return ActionSystem::torus_translation(Semigroup::zplus(1), 1,
                                           ActionSystem::default_alphas(1, 1));
}

Element zp(std::int64_t v) { return Element::make(Family::ZPlusD, {v}); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Def. A.1: certification of the golden rotation plus the pinned period table
void criterion_1() {
    ActionSystem sys = golden();
    Point zero = Point::torus1(0.0);
    std::vector<std::int64_t> schedule = {1024, 2048, 4096, 8192, 16384};

    bool ok = true;
    std::string detail;
    for (double eps : {0.2, 0.1, 0.05}) {
        auto cert = certify_bohr(sys, zero, eps, schedule);
        bool certified = cert.status == CertStatus::CertifiedAtResolution;
        bool stable = true;
        for (std::size_t i = 1; i < cert.witnesses.size(); ++i)
            stable = stable && cert.witnesses[i].gauge == cert.witnesses[0].gauge;
        ok = ok && certified && stable;
        detail += "eps=" + fmt(eps) + ":" + to_string(cert.status) +
                  ",l=" + std::to_string(cert.witnesses.back().gauge) + " ";
    }

    // pinned brute-force |n alpha| member table, eps = 0.4, candidates [0,14)
    auto pset = epsilon_period_set(sys, zero, 0.4, WindowSpec::box(100), WindowSpec::box(14));
    std::vector<std::int64_t> expect = {0, 1, 2, 3, 5, 6, 7, 8, 10, 11, 13};
    bool members_ok = pset.members.size() == expect.size();
    for (std::size_t i = 0; members_ok && i < expect.size(); ++i)
        members_ok = pset.members[i] == zp(expect[i]);
    ok = ok && members_ok;
    detail += members_ok ? "period set pinned" : "period set MISMATCH";

    criterion(1, "Bohr certification of the golden rotation", ok, detail);
}

// 2. equicontinuity: nonshrinking moduli for certified systems, torus exact,
//    doubling collapse
void criterion_2() {
    bool ok = true;
    std::string detail;
    std::vector<std::int64_t> windows = {1024, 2048, 4096, 8192, 16384};

    ActionSystem torus = golden();
    auto tsample = torus.orbit(Point::torus1(0.0), WindowSpec::box(2048));
    ActionSystem zbar = ActionSystem::zbar_self_action(1000);
    auto zsample = zbar.orbit(Point::zbar(0), WindowSpec::box(1000));

    for (double eps : {0.2, 0.1, 0.05}) {
        auto tnet = epsilon_net(torus.space(), tsample.points, eps / 4.0);
        auto znet = epsilon_net(zbar.space(), zsample.points, eps / 4.0);
        double tprev = -1, zprev = -1;
        for (std::int64_t w : windows) {
            auto test = equicontinuity_modulus(torus, tnet, eps, WindowSpec::box(w));
            auto zest = equicontinuity_modulus(zbar, znet, eps, WindowSpec::box(w));
            ok = ok && (tprev < 0 || test.delta_hat >= tprev) &&
                 (zprev < 0 || zest.delta_hat >= zprev);
            tprev = test.delta_hat;
            zprev = zest.delta_hat;
            ok = ok && test.delta_hat == eps; // isometry: the ladder top, exactly
        }
        detail += "eps=" + fmt(eps) + ":torus=" + fmt(tprev) + ",zbar=" + fmt(zprev) + " ";
    }

    ActionSystem dbl = ActionSystem::doubling(1);
    auto dsample = dbl.orbit(dbl.default_basepoint(), WindowSpec::box(1024));
    auto dnet = epsilon_net(dbl.space(), dsample.points, 0.025);
    auto dest = equicontinuity_modulus(dbl, dnet, 0.1, WindowSpec::box(20));
    ok = ok && dest.delta_hat < 1e-3;
    detail += "doubling@20=" + fmt(dest.delta_hat);

    criterion(2, "equicontinuity moduli", ok, detail);
}

// 3. Cauchy products along Fibonacci times
void criterion_3() {
    ActionSystem sys = golden();
    std::vector<Element> t, s;
    std::int64_t fa = 1, fb = 1;
    for (int i = 0; i < 30; ++i) {
        t.push_back(zp(fa));
        s.push_back(zp(fb));
        std::int64_t fc = fa + fb;
        fa = fb;
        fb = fc;
    }
    auto rep = cauchy_product_check(sys, Point::torus1(0.0), t, s, 20, 1e-3);
    bool ok = rep.precondition_ok && rep.product_tail_defect <= 1e-3;
    criterion(3, "Fibonacci Cauchy products", ok,
              "tail defect=" + fmt(rep.product_tail_defect));
}

// 4. the diamond operation on orbit closures
void criterion_4() {
    ActionSystem sys = golden();
    Point zero = Point::torus1(0.0);
    OrbitClosureNet net = build_orbit_net(sys, zero, 0.1, WindowSpec::box(10000));
    AlgebraReport rep = algebra_check(sys, build_diamond_table(sys, net));
    bool ok = rep.commutativity <= 1e-12 && rep.associativity <= 1e-12 && rep.identity <= 1e-12;
    std::string detail = "torus defects=" + fmt(rep.commutativity) + "/" +
                         fmt(rep.associativity) + "/" + fmt(rep.identity);

    ActionSystem zbar = ActionSystem::zbar_self_action(1000);
    OrbitClosureNet znet = build_orbit_net(zbar, Point::zbar(0), 0.05, WindowSpec::box(1000));
    SplitMix64 rng(2);
    double worst = 0.0;
    std::vector<Element> gs = {Element::make(Family::ZbarPlus, {kInf})};
    for (int i = 0; i < 8; ++i)
        gs.push_back(Element::make(Family::ZbarPlus,
                                   {static_cast<std::int64_t>(rng.next_below(2000))}));
    for (const Element& g : gs)
        for (const Point& p : znet.points)
            worst = std::max(worst, translation_consistency(zbar, znet, g, p));
    ok = ok && worst <= 2 * 0.05;
    detail += " zbar translation=" + fmt(worst);

    double a = 0.61803398874989484820;
    Point got = diamond(sys, net, Point::torus1(std::fmod(2 * a, 1.0)),
                        Point::torus1(std::fmod(3 * a, 1.0)));
    long double five = 5.0L * 0.61803398874989484820L;
    double expect = static_cast<double>(five - std::floor(five));
    bool fixture = std::abs(got.x[0] - expect) <= 1e-12;
    ok = ok && fixture;
    detail += fixture ? " 2a<>3a=5a" : " diamond fixture MISMATCH";

    criterion(4, "orbit-closure diamond algebra", ok, detail);
}

// 5. Haar measures of finite commutative semigroups, two independent routes
void criterion_5() {
    bool ok = true;
    std::string detail;
    struct Case {
        Semigroup g;
        std::size_t atom;    // index of the expected point mass, or npos for uniform
        const char* label;
    };
    const std::size_t uniform = static_cast<std::size_t>(-1);
    std::vector<Case> cases = {{Semigroup::cyclic(5), uniform, "Z5"},
                               {Semigroup::truncated_addition(7), 7, "truncadd"},
                               {Semigroup::truncated_zbar(6), 7, "zbartrunc"}};
    for (const Case& c : cases) {
        auto sol = haar_solve_finite(c.g);
        auto oracle = haar_linear_oracle(c.g);
        double gap = 0;
        for (std::size_t i = 0; i < oracle.size(); ++i)
            gap = std::max(gap, std::abs(sol.weights[i] - oracle[i]));
        bool shape = true;
        if (c.atom == uniform) {
            for (double w : sol.weights)
                shape = shape && std::abs(w - 1.0 / sol.weights.size()) <= 1e-10;
        } else {
            shape = std::abs(sol.weights[c.atom] - 1.0) <= 1e-10;
        }
        SplitMix64 rng(11);
        double start_gap = 0;
        for (int s = 0; s < 5; ++s) {
            HaarOptions opts;
            opts.start.resize(c.g.carrier_size());
            for (double& w : opts.start) w = rng.next_unit() + 1e-3;
            auto restart = haar_solve_finite(c.g, opts);
            for (std::size_t i = 0; i < oracle.size(); ++i)
                start_gap = std::max(start_gap, std::abs(sol.weights[i] - restart.weights[i]));
        }
        ok = ok && gap <= 1e-10 && shape && start_gap <= 1e-10;
        detail += std::string(c.label) + ":gap=" + fmt(gap) + ",starts=" + fmt(start_gap) + " ";
    }
    criterion(5, "finite Haar solver against the linear oracle", ok, detail);
}

// 6. unique ergodicity probes
void criterion_6() {
    ActionSystem sys = golden();
    SplitMix64 rng(21);
    std::vector<Point> bps;
    for (int i = 0; i < 10; ++i) bps.push_back(sys.space().sample(rng));
    auto fam = TestFunctionFamily::torus_characters(1, 8);
    FolnerSequence cubes = FolnerSequence::cubes(sys.semigroup());
    auto rep = unique_ergodicity_probe(sys, bps, cubes, fam, {100, 1000, 10000}, 1e-2);
    bool ok = rep.diameters.back() <= 1e-2;
    std::string detail = "golden diameter@1e4=" + fmt(rep.diameters.back());

    ActionSystem dbl = ActionSystem::doubling(1);
    FolnerSequence dcubes = FolnerSequence::cubes(dbl.semigroup());
    auto drep = unique_ergodicity_probe(dbl, {Point::torus1(0.0), dbl.default_basepoint()}, dcubes,
                                        fam, {100, 1000, 10000}, 1e-2);
    bool separated = true;
    for (double d : drep.diameters) separated = separated && d > 0.5;
    ok = ok && separated;
    detail += " doubling min diameter=" +
              fmt(*std::min_element(drep.diameters.begin(), drep.diameters.end()));

    criterion(6, "unique ergodicity probe", ok, detail);
}

// 7. uniform Folner convergence along cubes and the JR sequence
void criterion_7() {
    ActionSystem sys = golden();
    SplitMix64 rng(22);
    std::vector<Point> bps;
    for (int i = 0; i < 100; ++i) bps.push_back(sys.space().sample(rng));
    auto fam = TestFunctionFamily::torus_characters(1, 1);
    bool ok = true;
    std::string detail;
    for (FolnerSequence f : {FolnerSequence::cubes(sys.semigroup()),
                             FolnerSequence::jr(sys.semigroup())}) {
        auto series = uniform_convergence_probe(sys, bps, f, fam.fns[0], 0.0, {100, 1000, 10000});
        bool mono = true;
        for (std::size_t i = 1; i < series.deviations.size(); ++i)
            mono = mono && series.deviations[i] <= series.deviations[i - 1];
        ok = ok && mono && series.deviations.back() <= 1e-3;
        detail += f.name() + "=" + fmt(series.deviations.back()) + (mono ? " mono " : " NOT-mono ");
    }
    criterion(7, "uniform Folner convergence of cos averages", ok, detail);
}

// 8. JR ratio identity and the Shulman dichotomy
void criterion_8() {
    Semigroup z1 = Semigroup::zplus(1);
    QuasiHaar mu = QuasiHaar::counting();
    FolnerSequence jr = FolnerSequence::jr(z1);
    bool ratios = true;
    for (std::int64_t n = 1; n <= 1000; ++n)
        ratios = ratios &&
                 folner_ratio(z1, mu, jr.set(n), zp(1)) == 2.0 / static_cast<double>(n + 1);

    auto cubes = shulman_constant(FolnerSequence::cubes(z1), 200);
    bool cube_bounded = true;
    for (double c : cubes.constants) cube_bounded = cube_bounded && c <= 2.0 + 1e-12;

    auto jrep = shulman_constant(jr, 50);
    bool jr_grows = jrep.constants[49] > 10.0;

    bool ok = ratios && cube_bounded && jr_grows;
    criterion(8, "JR Folner ratios and Shulman constants", ok,
              std::string(ratios ? "ratios exact" : "ratio MISMATCH") +
                  ", cube max=" + fmt(*std::max_element(cubes.constants.begin(),
                                                        cubes.constants.end())) +
                  ", jr c50=" + fmt(jrep.constants[49]));
}

// 9. the counting-measure regression: quasi-Haar is not Haar
void criterion_9() {
    Semigroup z1 = Semigroup::zplus(1);
    QuasiHaar counting = QuasiHaar::counting();
    std::vector<Element> s = {zp(0), zp(1), zp(2)};
    double forward = counting.mass(s);
    double preimage = translate_preimage_mass(z1, counting, zp(1), s, WindowSpec::box(16));
    bool ok = forward == 3.0 && preimage == 2.0;
    criterion(9, "counting measure shift regression", ok,
              "mass=" + fmt(forward) + " preimage=" + fmt(preimage));
}

// 10. determinism: every experiment, run twice with the same seed, writes
//     byte-identical outputs; the thread budget changes nothing
void criterion_10() {
    std::vector<std::pair<std::string, std::string>> cases = {
        {"certify", "experiment = certify\naction = torus:k=1,alpha=golden\neps = 0.1\n"
                    "windows = 256,512,1024\nseed = 5\n"},
        {"equicontinuity", "experiment = equicontinuity\naction = torus:k=1,alpha=golden\n"
                           "eps = 0.1\nwindows = 256,1024\nnet_window = 1024\nseed = 5\n"},
        {"diamond", "experiment = diamond\naction = torus:k=1,alpha=golden\neps = 0.1\n"
                    "window = 2000\nseed = 5\n"},
        {"haar", "experiment = haar\nsemigroup = zbartrunc:N=6\nseed = 5\n"},
        {"unique-ergodicity", "experiment = unique-ergodicity\naction = doubling\n"
                              "basepoints = 0;generic\nschedule = 100,1000\n"
                              "family = chars:kmax=8\nseed = 5\n"},
        {"folner-uniform", "experiment = folner-uniform\naction = torus:k=1,alpha=golden\n"
                           "basepoints = sample:20\nschedule = 100,1000\nphi = cos:1\n"
                           "target = 0\nseed = 5\n"},
        {"shulman-jr", "experiment = shulman-jr\nnmax = 60\nseed = 5\n"},
    };

    bool ok = true;
    std::string detail;
    fs::path base = fs::temp_directory_path() / "bohrlab_acceptance";
    fs::remove_all(base);
    for (const auto& [name, text] : cases) {
        ExperimentConfig cfg = ExperimentConfig::from_string(text);
        fs::path a = base / (name + "_a");
        fs::path b = base / (name + "_b");
        auto ra = run_experiment(cfg, a.string());
        run_experiment(cfg, b.string());

        ExperimentConfig threaded = cfg;
        threaded.kv["threads"] = "1";
        fs::path c = base / (name + "_t");
        run_experiment(threaded, c.string());

        bool same = true;
        for (const std::string& f : ra.files) {
            std::string bytes = slurp(a / f);
            same = same && !bytes.empty() && bytes == slurp(b / f) && bytes == slurp(c / f);
        }
        ok = ok && same;
        if (!same) detail += name + " DIFFERS ";
    }
    if (detail.empty()) detail = std::to_string(cases.size()) + " experiments byte-identical";
    criterion(10, "determinism of experiment outputs", ok, detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
