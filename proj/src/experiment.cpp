#include "bohrlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bohrlab/almost_periodicity.hpp"
#include "bohrlab/ergodic.hpp"
#include "bohrlab/io.hpp"
#include "bohrlab/kernels.hpp"
#include "bohrlab/orbit_algebra.hpp"

namespace bohrlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
    return out;
}

// "name:key1=v1,key2=v2" -> (name, {key: value})
std::pair<std::string, std::map<std::string, std::string>> parse_tag(const std::string& tag) {
    auto colon = tag.find(':');
    std::string name = trim(colon == std::string::npos ? tag : tag.substr(0, colon));
    std::map<std::string, std::string> params;
    if (colon != std::string::npos) {
        for (const std::string& part : split(tag.substr(colon + 1), ',')) {
            auto eq = part.find('=');
            if (eq == std::string::npos)
                params[""] = part; // positional payload such as a file path
            else
                params[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
        }
    }
    return {name, params};
}

} // namespace

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig c;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line with empty key");
        c.kv[key] = value;
    }
    if (!c.has("experiment")) throw ConfigError("config misses 'experiment'");
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

std::string ExperimentConfig::require(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("config misses required key '" + key + "'");
    return it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (...) {
        throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
}

std::vector<std::int64_t> ExperimentConfig::get_schedule(
    const std::string& key, const std::vector<std::int64_t>& fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::vector<std::int64_t> out;
    for (const std::string& part : split(it->second, ','))
        if (!part.empty()) out.push_back(std::stoll(part));
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty schedule");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1])
            throw ConfigError("config key '" + key + "' must be strictly increasing");
    return out;
}

// ---------------------------------------------------------------------------
// tagged builders
// ---------------------------------------------------------------------------

Semigroup make_semigroup(const std::string& tag) {
    auto [name, params] = parse_tag(tag);
    auto param_int = [&](const std::string& key, std::int64_t fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : std::stoll(it->second);
    };
    if (name == "zplus") return Semigroup::zplus(static_cast<int>(param_int("d", 1)));
    if (name == "rplusgrid") {
        auto it = params.find("h");
        double h = it == params.end() ? 0x1.0p-6 : std::stod(it->second);
        return Semigroup::rplus_grid(h);
    }
    if (name == "zbarplus") return Semigroup::zbarplus();
    if (name == "matnn") return Semigroup::nonneg_int_matrix(static_cast<int>(param_int("n", 2)));
    if (name == "cyclic") return Semigroup::cyclic(static_cast<int>(param_int("n", 5)));
    if (name == "truncadd")
        return Semigroup::truncated_addition(static_cast<int>(param_int("m", 7)));
    if (name == "zbartrunc") return Semigroup::truncated_zbar(static_cast<int>(param_int("N", 6)));
    if (name == "finite") {
        auto it = params.find("");
        if (it == params.end()) throw ConfigError("finite semigroup tag needs a csv path");
        return Semigroup::finite_from_csv(it->second);
    }
    throw ConfigError("unknown semigroup tag: " + tag);
}

ActionSystem make_action(const std::string& action_tag, const std::string& semigroup_tag,
                         std::uint64_t seed) {
    auto [name, params] = parse_tag(action_tag);
    if (name == "torus") {
        int k = 1;
        if (auto it = params.find("k"); it != params.end()) k = std::stoi(it->second);
        Semigroup g = make_semigroup(semigroup_tag.empty() ? "zplus:d=1" : semigroup_tag);
        int d = g.family() == Family::ZPlusD ? g.dim() : 1;
        std::vector<std::vector<double>> rows;
        std::string alpha = "golden";
        if (auto it = params.find("alpha"); it != params.end()) alpha = it->second;
        if (alpha == "golden") {
            rows = ActionSystem::default_alphas(d, k);
        } else {
            for (const std::string& row : split(alpha, ';')) {
                std::vector<double> r;
                for (const std::string& cell : split(row, '|')) r.push_back(std::stod(cell));
                rows.push_back(std::move(r));
            }
        }
        return ActionSystem::torus_translation(std::move(g), k, std::move(rows));
    }
    if (name == "zbarplus-self" || name == "zbarplus-space") {
        std::int64_t n = 100;
        if (auto it = params.find("N"); it != params.end()) n = std::stoll(it->second);
        return ActionSystem::zbar_self_action(n);
    }
    if (name == "doubling") return ActionSystem::doubling(seed);
    if (name == "finite") {
        // finite:<op table csv>|<action table csv>
        auto it = params.find("");
        if (it == params.end()) throw ConfigError("finite action tag needs csv paths");
        auto paths = split(it->second, '|');
        if (paths.size() != 2)
            throw ConfigError("finite action tag: expected '<op csv>|<action csv>'");
        Semigroup g = Semigroup::finite_from_csv(paths[0]);

        std::ifstream in(paths[1]);
        if (!in) throw ConfigError("cannot open action table " + paths[1]);
        std::string line;
        if (!std::getline(in, line)) throw ConfigError("empty action table");
        auto points = split(line, ',');
        auto point_index = [&](const std::string& s) -> std::int32_t {
            for (std::size_t i = 0; i < points.size(); ++i)
                if (points[i] == s) return static_cast<std::int32_t>(i);
            throw ConfigError("action table: unknown point '" + s + "'");
        };
        std::vector<std::int32_t> table(g.carrier_size() * points.size(), -1);
        while (std::getline(in, line)) {
            auto cells = split(line, ',');
            if (cells.empty() || cells[0].empty()) continue;
            if (cells.size() != points.size() + 1)
                throw ConfigError("action table: row width mismatch");
            std::int64_t gi = -1;
            for (std::size_t i = 0; i < g.carrier_size(); ++i)
                if (g.table().names[i] == cells[0]) gi = static_cast<std::int64_t>(i);
            if (gi < 0) throw ConfigError("action table: unknown element '" + cells[0] + "'");
            for (std::size_t c = 0; c < points.size(); ++c)
                table[static_cast<std::size_t>(gi) * points.size() + c] = point_index(cells[c + 1]);
        }
        for (std::int32_t v : table)
            if (v < 0) throw ConfigError("action table: missing rows");
        return ActionSystem::finite_action(std::move(g), static_cast<std::int64_t>(points.size()),
                                           std::move(table));
    }
    throw ConfigError("unknown action tag: " + action_tag);
}

Point parse_basepoint(const ActionSystem& sys, const std::string& spec, std::uint64_t seed) {
    std::string s = trim(spec);
    if (s.empty() || s == "default") return sys.default_basepoint();
    if (s == "generic") {
        SplitMix64 rng(seed ^ 0x9d4cf3a1ULL);
        return sys.generic_point(rng);
    }
    switch (sys.space().tag()) {
    case SpaceTag::Torus: {
        Point p;
        auto coords = split(s, ',');
        if (static_cast<int>(coords.size()) != sys.space().torus_dim())
            throw ConfigError("basepoint: expected " + std::to_string(sys.space().torus_dim()) +
                              " torus coordinates");
        p.nx = static_cast<std::uint8_t>(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) {
            double v = std::stod(coords[i]);
            v -= std::floor(v);
            p.x[i] = v;
        }
        return p;
    }
    case SpaceTag::ZbarPlusSpace:
        return Point::zbar(s == "inf" ? kInf : std::stoll(s));
    case SpaceTag::FiniteSpace:
        return Point::finite(std::stoll(s));
    case SpaceTag::Product:
        throw ConfigError("basepoint parsing for product spaces is not supported");
    }
    throw ConfigError("basepoint: unknown space");
}

std::vector<Point> parse_basepoints(const ActionSystem& sys, const std::string& spec,
                                    std::uint64_t seed) {
    std::string s = trim(spec);
    if (s.rfind("sample:", 0) == 0) {
        std::int64_t count = std::stoll(s.substr(7));
        if (count < 1) throw ConfigError("basepoints: sample count must be positive");
        SplitMix64 rng(seed ^ 0x51ab3cd7ULL);
        std::vector<Point> out;
        out.reserve(static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < count; ++i) out.push_back(sys.generic_point(rng));
        return out;
    }
    std::vector<Point> out;
    for (const std::string& part : split(s, ';'))
        if (!part.empty()) out.push_back(parse_basepoint(sys, part, seed));
    if (out.empty()) throw ConfigError("basepoints: empty list");
    return out;
}

// ---------------------------------------------------------------------------
// experiment implementations
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

struct Sink {
    std::filesystem::path dir;
    std::vector<std::string> files;

    std::string path(const std::string& name) {
        files.push_back(name);
        return (dir / name).string();
    }
};


std::vector<std::string> point_cells(const Point& p) {
    std::vector<std::string> cells;
    for (int i = 0; i < p.nx; ++i) cells.push_back(io::format_double(p.x[i]));
    for (int i = 0; i < p.ni; ++i)
        cells.push_back(p.iv[i] == kInf ? "inf" : std::to_string(p.iv[i]));
    return cells;
}

std::vector<std::string> element_cells(const Semigroup& g, const Element& e) {
    std::vector<std::string> cells;
    if (g.family() == Family::FiniteTable) {
        cells.push_back(g.describe(e));
        return cells;
    }
    for (int i = 0; i < e.size; ++i)
        cells.push_back(e.v[i] == kInf ? "inf" : std::to_string(e.v[i]));
    return cells;
}

FolnerSequence make_folner(const std::string& kind, const Semigroup& g) {
    if (kind == "cube") return FolnerSequence::cubes(g);
    if (kind == "gridcube") return FolnerSequence::grid_cubes(g);
    if (kind == "jr") return FolnerSequence::jr(g);
    throw ConfigError("unknown folner kind: " + kind);
}

TestFunctionFamily make_family(const std::string& tag, const ActionSystem& sys,
                               std::uint64_t seed) {
    auto [name, params] = parse_tag(tag);
    if (name == "chars") {
        if (sys.space().tag() != SpaceTag::Torus)
            throw ConfigError("character family needs a torus space");
        int kmax = 8;
        if (auto it = params.find("kmax"); it != params.end()) kmax = std::stoi(it->second);
        return TestFunctionFamily::torus_characters(sys.space().torus_dim(), kmax);
    }
    if (name == "landmarks") {
        int count = 8;
        double r = 0.25;
        if (auto it = params.find("count"); it != params.end()) count = std::stoi(it->second);
        if (auto it = params.find("r"); it != params.end()) r = std::stod(it->second);
        return TestFunctionFamily::landmarks(sys.space(), count, r, seed ^ 0x77aa11ULL);
    }
    throw ConfigError("unknown test family tag: " + tag);
}

TestFunction make_test_function(const std::string& tag, const ActionSystem& sys,
                                std::uint64_t seed) {
    auto [name, params] = parse_tag(tag);
    if (name == "one") return {"one", 0.0, 1.0, [](const Point&) { return 1.0; }};
    if (name == "cos" || name == "sin") {
        int k = std::stoi(params.count("") ? params.at("") : "1");
        auto fam = TestFunctionFamily::torus_characters(sys.space().torus_dim(), std::max(1, k));
        for (const auto& fn : fam.fns)
            if (fn.name == name + ":" + std::to_string(k)) return fn;
        throw ConfigError("test function not found: " + tag);
    }
    if (name == "dist-to-inf") {
        MetricSpace sp = sys.space();
        return {"dist-to-inf", 1.0, 1.0,
                [sp](const Point& p) { return sp.distance(p, Point::zbar(kInf)); }};
    }
    if (name == "arc") {
        // indicator of [lo, hi) on the circle: bounded, discontinuous only at
        // the two endpoints (a null set for the rotation-invariant limits)
        if (sys.space().tag() != SpaceTag::Torus || sys.space().torus_dim() != 1)
            throw ConfigError("arc indicators are defined on the 1-torus");
        auto payload = params.count("") ? params.at("") : "";
        auto bounds = split(payload, ';');
        if (bounds.size() != 2) throw ConfigError("arc test function: expected 'arc:lo;hi'");
        double lo = std::stod(bounds[0]), hi = std::stod(bounds[1]);
        if (!(0.0 <= lo && lo < hi && hi <= 1.0))
            throw ConfigError("arc test function: need 0 <= lo < hi <= 1");
        return {"arc:" + bounds[0] + ";" + bounds[1],
                std::numeric_limits<double>::infinity(), 1.0,
                [lo, hi](const Point& p) { return lo <= p.x[0] && p.x[0] < hi ? 1.0 : 0.0; }};
    }
    (void)seed;
    throw ConfigError("unknown test function tag: " + tag);
}

// ---- certify ---------------------------------------------------------------

json run_certify(const ExperimentConfig& cfg, const ActionSystem& sys, Sink& sink) {
    const double eps = cfg.get_double("eps", 0.1);
    const auto windows = cfg.get_schedule("windows", {1024, 2048, 4096, 8192, 16384});
    CertifyOptions opts;
    opts.gauge_bound = cfg.get_int("gauge_bound", 256);
    opts.seed = cfg.seed();
    Point x = parse_basepoint(sys, cfg.get("basepoint", "default"), cfg.seed());

    BohrCertificate cert = certify_bohr(sys, x, eps, windows, opts);

    {
        io::CsvWriter csv(sink.path("gauges.csv"),
                          {"window", "gauge", "whole_semigroup", "members"});
        for (std::size_t i = 0; i < cert.windows.size(); ++i)
            csv.write_row({std::to_string(cert.windows[i]), std::to_string(cert.witnesses[i].gauge),
                           cert.witnesses[i].whole_semigroup ? "1" : "0",
                           std::to_string(cert.member_counts[i])});
    }
    json members = json::array();
    json defects = json::array();
    {
        WindowSpec win = WindowSpec::box(windows.back());
        auto pset = epsilon_period_set(sys, x, eps, win, win);
        io::CsvWriter csv(sink.path("members.csv"), {"tau", "defect"});
        for (std::size_t i = 0; i < pset.members.size(); ++i) {
            csv.write_row({sys.semigroup().describe(pset.members[i]),
                           io::format_double(pset.defects[i])});
            json coords = json::array();
            for (int c = 0; c < pset.members[i].size; ++c) {
                if (pset.members[i].v[c] == kInf)
                    coords.push_back("inf");
                else
                    coords.push_back(pset.members[i].v[c]);
            }
            members.push_back(coords);
            defects.push_back(pset.defects[i]);
        }
    }

    json j;
    j["status"] = to_string(cert.status);
    j["eps"] = eps;
    j["windows"] = cert.windows;
    json gauges = json::array();
    for (const auto& w : cert.witnesses) gauges.push_back(w.whole_semigroup ? -1 : w.gauge);
    j["gauges"] = gauges;
    j["member_counts"] = cert.member_counts;
    j["members"] = members;
    j["defects"] = defects;
    j["delta_hat"] = cert.final_delta_hat;
    if (!cert.detail.empty()) j["detail"] = cert.detail;
    return j;
}

// ---- equicontinuity ---------------------------------------------------------

json run_equicontinuity(const ExperimentConfig& cfg, const ActionSystem& sys, Sink& sink) {
    const double eps = cfg.get_double("eps", 0.1);
    const auto windows = cfg.get_schedule("windows", {1024, 4096, 16384});
    Point x = parse_basepoint(sys, cfg.get("basepoint", "default"), cfg.seed());

    auto sample = sys.orbit(x, WindowSpec::box(cfg.get_int("net_window", 2048)));
    auto net = epsilon_net(sys.space(), sample.points, cfg.get_double("net_eps", eps / 4.0));

    EquicontinuityOptions opts;
    opts.seed = cfg.seed();

    json per_window = json::array();
    io::CsvWriter csv(sink.path("delta.csv"),
                      {"window", "delta_hat", "pairs", "worst_initial", "worst_propagated"});
    bool nonshrinking = true;
    double prev = -1.0;
    for (std::int64_t w : windows) {
        auto est = equicontinuity_modulus(sys, net, eps, WindowSpec::box(w), opts);
        csv.write_row({std::to_string(w), io::format_double(est.delta_hat),
                       std::to_string(est.pair_count), io::format_double(est.worst.initial),
                       io::format_double(est.worst.propagated)});
        json row;
        row["window"] = w;
        row["delta_hat"] = est.delta_hat;
        per_window.push_back(row);
        if (prev >= 0 && est.delta_hat < prev) nonshrinking = false;
        prev = est.delta_hat;
    }

    json j;
    j["eps"] = eps;
    j["series"] = per_window;
    j["nonshrinking"] = nonshrinking;
    j["net_size"] = net.size();
    return j;
}

// ---- diamond ----------------------------------------------------------------

json run_diamond(const ExperimentConfig& cfg, const ActionSystem& sys, Sink& sink) {
    const double eps = cfg.get_double("eps", 0.1);
    const std::int64_t window = cfg.get_int("window", 10000);
    Point y = parse_basepoint(sys, cfg.get("basepoint", "default"), cfg.seed());

    OrbitClosureNet net = build_orbit_net(sys, y, eps, WindowSpec::box(window));
    DiamondTable table = build_diamond_table(sys, net);
    AlgebraReport algebra = algebra_check(sys, table);

    auto point_header = [&](std::vector<std::string> head, const std::string& label) {
        std::size_t coords = point_cells(net.points.front()).size();
        for (std::size_t c = 0; c < coords; ++c)
            head.push_back(coords == 1 ? label : label + "_" + std::to_string(c));
        return head;
    };
    {
        std::vector<std::string> head;
        std::size_t gcells = element_cells(sys.semigroup(), net.reps.front()).size();
        for (std::size_t c = 0; c < gcells; ++c)
            head.push_back(gcells == 1 ? "g" : "g_" + std::to_string(c));
        io::CsvWriter csv(sink.path("net.csv"), point_header(std::move(head), "point"));
        for (std::size_t i = 0; i < net.points.size(); ++i) {
            std::vector<std::string> row = element_cells(sys.semigroup(), net.reps[i]);
            auto pc = point_cells(net.points[i]);
            row.insert(row.end(), pc.begin(), pc.end());
            csv.write_row(row);
        }
    }
    {
        std::vector<std::string> head = point_header({"i", "j"}, "product");
        head.push_back("defect");
        io::CsvWriter csv(sink.path("table.csv"), head);
        const std::size_t n = net.points.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<std::string> row = {std::to_string(i), std::to_string(j)};
                auto pc = point_cells(table.cells[i * n + j]);
                row.insert(row.end(), pc.begin(), pc.end());
                row.push_back(io::format_double(table.cell_defects[i * n + j]));
                csv.write_row(row);
            }
    }

    // translation characterization over all net points and sampled g
    std::vector<Element> gs;
    auto window_elems = sys.semigroup().enumerate_window(
        WindowSpec::box(std::min<std::int64_t>(window, 64)));
    SplitMix64 rng(cfg.seed() ^ 0xd1a30ULL);
    for (int i = 0; i < 8 && !window_elems.empty(); ++i)
        gs.push_back(window_elems[static_cast<std::size_t>(
            rng.next_below(window_elems.size()))]);
    if (sys.semigroup().family() == Family::ZbarPlus)
        gs.push_back(Element::make(Family::ZbarPlus, {kInf}));

    double worst_translation = 0.0;
    for (const Element& g : gs)
        for (const Point& p : net.points)
            worst_translation = std::max(worst_translation, translation_consistency(sys, net, g, p));

    // defects are never silently accepted: the report carries an explicit
    // verdict against the configured threshold
    double threshold = cfg.get_double("defect_threshold", std::max(1e-9, 2.5 * eps));
    bool within = algebra.commutativity <= threshold && algebra.associativity <= threshold &&
                  algebra.identity <= threshold;

    json j;
    j["eps"] = eps;
    j["window"] = window;
    j["net_size"] = net.points.size();
    j["commutativity_defect"] = algebra.commutativity;
    j["associativity_defect"] = algebra.associativity;
    j["identity_defect"] = algebra.identity;
    j["translation_consistency_max"] = worst_translation;
    j["defect_threshold"] = threshold;
    j["defects_within_threshold"] = within;
    return j;
}

// ---- haar -------------------------------------------------------------------

json run_haar(const ExperimentConfig& cfg, Sink& sink) {
    Semigroup g = make_semigroup(cfg.require("semigroup"));
    HaarOptions opts;
    opts.tolerance = cfg.get_double("tolerance", 1e-12);

    InvariantMeasureSolution sol = haar_solve_finite(g, opts);
    std::vector<double> oracle = haar_linear_oracle(g);

    double oracle_gap = 0.0;
    for (std::size_t i = 0; i < sol.weights.size(); ++i)
        oracle_gap = std::max(oracle_gap, std::abs(sol.weights[i] - oracle[i]));

    // independence of the starting distribution
    SplitMix64 rng(cfg.seed() ^ 0xaULL);
    double start_gap = 0.0;
    for (int s = 0; s < 5; ++s) {
        HaarOptions alt = opts;
        alt.start.resize(g.carrier_size());
        for (double& w : alt.start) w = rng.next_unit() + 1e-3;
        auto other = haar_solve_finite(g, alt);
        for (std::size_t i = 0; i < sol.weights.size(); ++i)
            start_gap = std::max(start_gap, std::abs(sol.weights[i] - other.weights[i]));
    }

    {
        io::CsvWriter csv(sink.path("weights.csv"), {"element", "weight", "oracle_weight"});
        for (std::size_t i = 0; i < sol.weights.size(); ++i)
            csv.write_row({g.table().names[i], io::format_double(sol.weights[i]),
                           io::format_double(oracle[i])});
    }
    {
        io::CsvWriter csv(sink.path("residuals.csv"), {"iteration", "residual"});
        for (std::size_t i = 0; i < sol.residual_history.size(); ++i)
            csv.write_row({std::to_string(i), io::format_double(sol.residual_history[i])});
    }

    json j;
    j["semigroup"] = g.tag();
    j["residual"] = sol.residual;
    j["iterations"] = sol.iterations;
    j["oracle_gap"] = oracle_gap;
    j["start_independence_gap"] = start_gap;
    j["weights"] = sol.weights;
    return j;
}

// ---- unique ergodicity --------------------------------------------------------

json run_unique_ergodicity(const ExperimentConfig& cfg, const ActionSystem& sys, Sink& sink) {
    auto basepoints = parse_basepoints(sys, cfg.get("basepoints", "sample:10"), cfg.seed());
    FolnerSequence folner = make_folner(cfg.get("folner", "cube"), sys.semigroup());
    TestFunctionFamily fam = make_family(cfg.get("family", "chars:kmax=8"), sys, cfg.seed());
    auto schedule = cfg.get_schedule("schedule", {100, 1000, 10000});
    double tol = cfg.get_double("tolerance", 1e-2);

    auto rep = unique_ergodicity_probe(sys, basepoints, folner, fam, schedule, tol);

    {
        io::CsvWriter csv(sink.path("diameter.csv"), {"n", "diameter"});
        for (std::size_t i = 0; i < schedule.size(); ++i)
            csv.write_row({std::to_string(schedule[i]), io::format_double(rep.diameters[i])});
    }
    {
        io::CsvWriter csv(sink.path("averages.csv"), {"n", "function", "basepoint", "value"});
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            const auto& flat = rep.averages[i];
            for (std::size_t f = 0; f < fam.fns.size(); ++f)
                for (std::size_t b = 0; b < basepoints.size(); ++b)
                    csv.write_row({std::to_string(schedule[i]), fam.fns[f].name, std::to_string(b),
                                   io::format_double(flat[f * basepoints.size() + b])});
        }
    }

    json j;
    j["verdict"] = rep.verdict;
    j["consistent"] = rep.consistent;
    j["diameters"] = rep.diameters;
    j["schedule"] = schedule;
    j["tolerance"] = tol;
    j["basepoints"] = basepoints.size();
    return j;
}

// ---- folner uniform convergence ------------------------------------------------

json run_folner_uniform(const ExperimentConfig& cfg, const ActionSystem& sys, Sink& sink) {
    auto basepoints = parse_basepoints(sys, cfg.get("basepoints", "sample:100"), cfg.seed());
    FolnerSequence folner = make_folner(cfg.get("folner", "cube"), sys.semigroup());
    TestFunction fn = make_test_function(cfg.get("phi", "cos:1"), sys, cfg.seed());
    double target = cfg.get_double("target", 0.0);
    auto schedule = cfg.get_schedule("schedule", {100, 1000, 10000});

    auto series = uniform_convergence_probe(sys, basepoints, folner, fn, target, schedule);

    {
        io::CsvWriter csv(sink.path("deviation.csv"), {"n", "deviation"});
        for (std::size_t i = 0; i < schedule.size(); ++i)
            csv.write_row({std::to_string(schedule[i]), io::format_double(series.deviations[i])});
    }
    {
        io::CsvWriter csv(sink.path("series.csv"), {"n", "basepoint", "value"});
        for (std::size_t i = 0; i < schedule.size(); ++i)
            for (std::size_t b = 0; b < basepoints.size(); ++b)
                csv.write_row({std::to_string(schedule[i]), std::to_string(b),
                               io::format_double(series.values[i][b])});
    }

    bool nonincreasing = true;
    for (std::size_t i = 1; i < series.deviations.size(); ++i)
        nonincreasing = nonincreasing && series.deviations[i] <= series.deviations[i - 1];

    json j;
    j["phi"] = fn.name;
    j["target"] = target;
    j["folner"] = folner.name();
    j["schedule"] = schedule;
    j["deviations"] = series.deviations;
    j["nonincreasing"] = nonincreasing;
    j["final_deviation"] = series.deviations.back();
    return j;
}

// ---- shulman ------------------------------------------------------------------

json run_shulman(const ExperimentConfig& cfg, Sink& sink) {
    Semigroup g = make_semigroup(cfg.get("semigroup", "zplus:d=1"));
    std::int64_t n_max = cfg.get_int("nmax", 200);
    double threshold = cfg.get_double("bound_threshold", 4.0);

    auto cubes = shulman_constant(FolnerSequence::cubes(g), n_max, threshold);
    auto jr = shulman_constant(FolnerSequence::jr(g), n_max, threshold);

    {
        io::CsvWriter csv(sink.path("shulman.csv"), {"n", "c_cube", "c_jr"});
        for (std::size_t i = 0; i < cubes.ns.size(); ++i)
            csv.write_row({std::to_string(cubes.ns[i]), io::format_double(cubes.constants[i]),
                           io::format_double(jr.constants[i])});
    }

    json j;
    j["nmax"] = n_max;
    j["cube_bounded"] = cubes.bounded_looking;
    j["jr_bounded"] = jr.bounded_looking;
    j["cube_max"] = *std::max_element(cubes.constants.begin(), cubes.constants.end());
    j["jr_max"] = *std::max_element(jr.constants.begin(), jr.constants.end());
    return j;
}

} // namespace

// ---------------------------------------------------------------------------
// runner
// ---------------------------------------------------------------------------

RunReport run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();

    Sink sink;
    sink.dir = out_dir;
    std::filesystem::create_directories(sink.dir);

    kernels::set_max_threads(static_cast<int>(cfg.get_int("threads", 0)));

    const std::string name = cfg.require("experiment");
    json body;
    if (name == "haar") {
        body = run_haar(cfg, sink);
    } else if (name == "shulman-jr") {
        body = run_shulman(cfg, sink);
    } else {
        ActionSystem sys =
            make_action(cfg.get("action", "torus:k=1,alpha=golden"), cfg.get("semigroup", ""),
                        cfg.seed());
        if (name == "certify")
            body = run_certify(cfg, sys, sink);
        else if (name == "equicontinuity")
            body = run_equicontinuity(cfg, sys, sink);
        else if (name == "diamond")
            body = run_diamond(cfg, sys, sink);
        else if (name == "unique-ergodicity")
            body = run_unique_ergodicity(cfg, sys, sink);
        else if (name == "folner-uniform")
            body = run_folner_uniform(cfg, sys, sink);
        else
            throw ConfigError("unknown experiment: " + name);
        body["system"] = sys.tag_string();
    }

    RunReport out;
    out.report["experiment"] = name;
    out.report["seed"] = cfg.seed();
    json echo;
    for (const auto& [k, v] : cfg.kv)
        if (k != "threads" && k != "out") echo[k] = v; // thread count must never reach outputs
    out.report["config"] = echo;
    out.report["result"] = body;

    {
        std::ofstream rep(sink.dir / "report.json");
        rep << out.report.dump(2) << '\n';
    }
    sink.files.push_back("report.json");
    out.files = sink.files;
    out.report["files"] = sink.files;
    // rewrite with the manifest included
    {
        std::ofstream rep(sink.dir / "report.json");
        rep << out.report.dump(2) << '\n';
    }

    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string list_systems() {
    std::string out;
    out += "semigroups:\n";
    out += "  cyclic:n=<n>\n";
    out += "  finite:<op-table.csv>\n";
    out += "  matnn:n=<n>\n";
    out += "  rplusgrid:h=<step>\n";
    out += "  truncadd:m=<m>\n";
    out += "  zbarplus\n";
    out += "  zbartrunc:N=<n>\n";
    out += "  zplus:d=<d>\n";
    out += "actions:\n";
    out += "  doubling\n";
    out += "  finite:<op-table.csv>|<action-table.csv>\n";
    out += "  torus:k=1,alpha=golden\n";
    out += "  zbarplus-self:N=<cutoff>\n";
    out += "folner kinds:\n";
    out += "  cube\n";
    out += "  gridcube\n";
    out += "  jr\n";
    out += "test families:\n";
    out += "  chars:kmax=<k>\n";
    out += "  landmarks:count=<n>,r=<radius>\n";
    out += "test functions (phi):\n";
    out += "  arc:<lo>;<hi>\n";
    out += "  cos:<k>  sin:<k>\n";
    out += "  dist-to-inf\n";
    out += "  one\n";
    out += "experiments:\n";
    out += "  certify equicontinuity diamond haar unique-ergodicity folner-uniform shulman-jr\n";
    return out;
}

} // namespace bohrlab
