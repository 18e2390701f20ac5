// Benchmark comparing the serial reference kernels against the OpenMP ones.
// Outputs must agree bit for bit; timings show the speedup.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bohrlab/almost_periodicity.hpp"
#include "bohrlab/ergodic.hpp"
#include "bohrlab/orbit_algebra.hpp"
#include "bohrlab/kernels.hpp"

using namespace bohrlab;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_ms(F&& f) {
    double t0 = now_ms();
    f();
    return now_ms() - t0;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    const std::int64_t W = quick ? 1024 : 8192;
    int exit_code = 0;

    ActionSystem golden = ActionSystem::torus_translation(
        Semigroup::zplus(1), 1, ActionSystem::default_alphas(1, 1));
    Point zero = Point::torus1(0.0);

    { // defect scan
        WindowSpec win = WindowSpec::box(W);
        auto candidates = golden.semigroup().enumerate_window(win);
        std::vector<double> a, b;
        double ts = time_ms([&] { a = kernels::defect_scan_serial(golden, zero, win, candidates, 0.2); });
        double tp = time_ms([&] { b = kernels::defect_scan_parallel(golden, zero, win, candidates, 0.2); });
        bool same = bits_equal(a, b);
        report("defect_scan", ts, tp, same);
        if (!same) exit_code = 1;
    }

    { // pair propagation
        auto sample = golden.orbit(zero, WindowSpec::box(1024));
        auto net = epsilon_net(golden.space(), sample.points, 0.02);
        std::vector<kernels::PointPair> pairs;
        for (std::size_t i = 0; i < net.size(); ++i)
            for (std::size_t j = i + 1; j < net.size(); ++j)
                if (golden.space().distance(net[i], net[j]) < 0.1) pairs.emplace_back(net[i], net[j]);
        WindowSpec win = WindowSpec::box(W / 2);
        std::vector<double> a, b;
        double ts = time_ms([&] { a = kernels::pair_propagation_serial(golden, pairs, win); });
        double tp = time_ms([&] { b = kernels::pair_propagation_parallel(golden, pairs, win); });
        bool same = bits_equal(a, b);
        report("pair_propagation", ts, tp, same);
        if (!same) exit_code = 1;
    }

    { // diamond cells
        OrbitClosureNet net = build_orbit_net(golden, zero, quick ? 0.02 : 0.005,
                                              WindowSpec::box(quick ? 2000 : 20000));
        std::vector<Point> a, b;
        double ts = time_ms([&] { a = kernels::diamond_cells_serial(golden, net.reps, zero); });
        double tp = time_ms([&] { b = kernels::diamond_cells_parallel(golden, net.reps, zero); });
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i] == b[i];
        report("diamond_cells", ts, tp, same);
        if (!same) exit_code = 1;
    }

    { // Folner averages
        SplitMix64 rng(11);
        std::vector<Point> basepoints;
        for (int i = 0; i < (quick ? 16 : 100); ++i) basepoints.push_back(golden.space().sample(rng));
        auto F = FolnerSequence::cubes(golden.semigroup()).set(quick ? 2000 : 20000);
        QuasiHaar mu = QuasiHaar::counting();
        auto phi = [](const Point& p) { return std::cos(6.283185307179586 * p.x[0]); };
        std::vector<double> a, b;
        double ts = time_ms(
            [&] { a = kernels::folner_average_batch_serial(golden, basepoints, phi, F, mu); });
        double tp = time_ms(
            [&] { b = kernels::folner_average_batch_parallel(golden, basepoints, phi, F, mu); });
        bool same = bits_equal(a, b);
        report("folner_average_batch", ts, tp, same);
        if (!same) exit_code = 1;
    }

    return exit_code;
}
