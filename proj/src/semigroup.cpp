#include "bohrlab/semigroup.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bohrlab/numeric.hpp"

namespace bohrlab {

namespace {

std::int64_t det_i64(const std::int64_t* m, int n) {
    // Bareiss fraction-free elimination; exact for the small matrices we ship
    std::array<std::int64_t, Element::kMaxPayload> a{};
    std::copy(m, m + n * n, a.begin());
    std::int64_t prev = 1;
    std::int64_t sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k * n + k] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i * n + k] != 0) { swap = i; break; }
            if (swap < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            a[i * n + k] = 0;
        }
        prev = a[k * n + k];
    }
    return sign * a[(n - 1) * n + (n - 1)];
}

void require_same_family(const Element& g, const Element& h) {
    if (g.family != h.family || g.size != h.size)
        throw InvalidInputError("compose: elements from different families");
}

} // namespace

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

Semigroup Semigroup::zplus(int d) {
    if (d < 1 || d > Element::kMaxPayload) throw InvalidInputError("zplus: bad dimension");
    Semigroup s;
    s.family_ = Family::ZPlusD;
    s.dim_ = d;
    s.abelian_ = true;
    s.compact_ = false;
    Element e;
    e.family = Family::ZPlusD;
    e.size = static_cast<std::uint8_t>(d);
    s.identity_ = e;
    s.tag_ = "zplus:d=" + std::to_string(d);
    return s;
}

Semigroup Semigroup::rplus_grid(double step) {
    if (!(step > 0)) throw InvalidInputError("rplus_grid: step must be positive");
    Semigroup s;
    s.family_ = Family::RPlusGrid;
    s.dim_ = 1;
    s.step_ = step;
    s.abelian_ = true;
    s.identity_ = Element::make(Family::RPlusGrid, {0});
    s.tag_ = "rplusgrid:h=" + std::to_string(step);
    return s;
}

Semigroup Semigroup::zbarplus() {
    Semigroup s;
    s.family_ = Family::ZbarPlus;
    s.abelian_ = true;
    s.compact_ = true;
    s.identity_ = Element::make(Family::ZbarPlus, {0});
    s.tag_ = "zbarplus";
    return s;
}

Semigroup Semigroup::nonneg_int_matrix(int n) {
    if (n < 1 || n * n > Element::kMaxPayload)
        throw InvalidInputError("nonneg_int_matrix: size out of range");
    Semigroup s;
    s.family_ = Family::NonnegIntMatrix;
    s.dim_ = n;
    s.abelian_ = false; // matrix multiplication; a witness pair is reported by check_commutative
    Element e;
    e.family = Family::NonnegIntMatrix;
    e.size = static_cast<std::uint8_t>(n * n);
    for (int i = 0; i < n; ++i) e.v[i * n + i] = 1;
    s.identity_ = e;
    s.tag_ = "matnn:n=" + std::to_string(n);
    return s;
}

Semigroup Semigroup::finite_table(FiniteTableData data) {
    const std::size_t n = data.names.size();
    if (n == 0 || data.op.size() != n * n)
        throw InvalidInputError("finite_table: malformed operation table");
    for (std::int32_t idx : data.op)
        if (idx < 0 || static_cast<std::size_t>(idx) >= n)
            throw InvalidInputError("finite_table: cell index out of range");
    if (!data.weights.empty()) {
        if (data.weights.size() != n)
            throw InvalidInputError("finite_table: weight count mismatch");
        bool positive = false;
        for (double w : data.weights) {
            if (w < 0) throw InvalidInputError("finite_table: negative weight");
            positive = positive || w > 0;
        }
        if (!positive) throw InvalidInputError("finite_table: needs at least one positive weight");
    }

    Semigroup s;
    s.family_ = Family::FiniteTable;
    s.compact_ = true;
    s.table_ = std::move(data);

    // locate the two-sided identity
    int id = -1;
    const auto& op = s.table_.op;
    for (std::size_t e = 0; e < n; ++e) {
        bool ok = true;
        for (std::size_t g = 0; g < n && ok; ++g)
            ok = op[e * n + g] == static_cast<std::int32_t>(g) &&
                 op[g * n + e] == static_cast<std::int32_t>(g);
        if (ok) { id = static_cast<int>(e); break; }
    }
    if (id < 0) throw InvalidInputError("finite_table: no identity element");
    s.identity_ = Element::make(Family::FiniteTable, {id});

    // associativity and commutativity by exhaustion (carrier is the window)
    s.abelian_ = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (op[a * n + b] != op[b * n + a]) s.abelian_ = false;
            for (std::size_t c = 0; c < n; ++c)
                if (op[op[a * n + b] * n + c] != op[a * n + op[b * n + c]])
                    throw InvalidInputError("finite_table: operation is not associative");
        }
    s.tag_ = "finite:" + std::to_string(n);
    return s;
}

Semigroup Semigroup::cyclic(int n) {
    if (n < 1) throw InvalidInputError("cyclic: n must be positive");
    FiniteTableData d;
    d.names.reserve(n);
    for (int i = 0; i < n; ++i) d.names.push_back(std::to_string(i));
    d.op.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.op[static_cast<std::size_t>(i) * n + j] = (i + j) % n;
    Semigroup s = finite_table(std::move(d));
    s.tag_ = "cyclic:n=" + std::to_string(n);
    return s;
}

Semigroup Semigroup::truncated_addition(int m) {
    if (m < 0) throw InvalidInputError("truncated_addition: m must be >= 0");
    const int n = m + 1;
    FiniteTableData d;
    for (int i = 0; i < n; ++i) d.names.push_back(std::to_string(i));
    d.op.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d.op[static_cast<std::size_t>(i) * n + j] = std::min(i + j, m);
    Semigroup s = finite_table(std::move(d));
    s.tag_ = "truncadd:m=" + std::to_string(m);
    return s;
}

Semigroup Semigroup::truncated_zbar(int n) {
    if (n < 0) throw InvalidInputError("truncated_zbar: n must be >= 0");
    const int c = n + 2; // {0..n} plus inf
    FiniteTableData d;
    for (int i = 0; i <= n; ++i) d.names.push_back(std::to_string(i));
    d.names.push_back("inf");
    d.op.resize(static_cast<std::size_t>(c) * c);
    auto cell = [&](int i, int j) -> std::int32_t {
        if (i == n + 1 || j == n + 1) return n + 1;
        return i + j <= n ? i + j : n + 1;
    };
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) d.op[static_cast<std::size_t>(i) * c + j] = cell(i, j);
    Semigroup s = finite_table(std::move(d));
    s.tag_ = "zbartrunc:N=" + std::to_string(n);
    return s;
}

Semigroup Semigroup::finite_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("finite_from_csv: cannot open " + path);
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            // trim
            std::size_t a = cell.find_first_not_of(" \t\r");
            std::size_t b = cell.find_last_not_of(" \t\r");
            out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
        }
        return out;
    };

    std::string line;
    if (!std::getline(in, line)) throw InvalidInputError("finite_from_csv: empty file");
    FiniteTableData d;
    d.names = split(line);
    const std::size_t n = d.names.size();
    auto index_of = [&](const std::string& name) -> std::int32_t {
        for (std::size_t i = 0; i < n; ++i)
            if (d.names[i] == name) return static_cast<std::int32_t>(i);
        throw InvalidInputError("finite_from_csv: unknown element name '" + name + "'");
    };
    for (std::size_t r = 0; r < n; ++r) {
        if (!std::getline(in, line))
            throw InvalidInputError("finite_from_csv: table body has too few rows");
        auto cells = split(line);
        if (cells.size() != n)
            throw InvalidInputError("finite_from_csv: row width mismatch");
        for (std::size_t c = 0; c < n; ++c) d.op.push_back(index_of(cells[c]));
    }
    return finite_table(std::move(d));
}

// ---------------------------------------------------------------------------
// composition
// ---------------------------------------------------------------------------

Element Semigroup::compose(const Element& g, const Element& h) const {
    require_same_family(g, h);
    if (g.family != family_) throw InvalidInputError("compose: element not from this semigroup");
    Element r = g;
    switch (family_) {
    case Family::ZPlusD:
    case Family::RPlusGrid:
        for (int i = 0; i < g.size; ++i) r.v[i] = g.v[i] + h.v[i];
        return r;
    case Family::ZbarPlus:
        r.v[0] = (g.v[0] == kInf || h.v[0] == kInf) ? kInf : g.v[0] + h.v[0];
        return r;
    case Family::NonnegIntMatrix: {
        const int n = dim_;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::int64_t acc = 0;
                for (int k = 0; k < n; ++k) acc += g.v[i * n + k] * h.v[k * n + j];
                r.v[i * n + j] = acc;
            }
        return r;
    }
    case Family::FiniteTable: {
        const std::size_t n = table_.names.size();
        r.v[0] = table_.op[static_cast<std::size_t>(g.v[0]) * n + static_cast<std::size_t>(h.v[0])];
        return r;
    }
    }
    throw InvalidInputError("compose: unknown family");
}

bool Semigroup::valid_element(const Element& e) const {
    if (e.family != family_) return false;
    switch (family_) {
    case Family::ZPlusD: {
        if (e.size != dim_) return false;
        for (int i = 0; i < e.size; ++i)
            if (e.v[i] < 0) return false;
        return true;
    }
    case Family::RPlusGrid:
        return e.size == 1 && e.v[0] >= 0;
    case Family::ZbarPlus:
        return e.size == 1 && (e.v[0] >= 0 || e.v[0] == kInf);
    case Family::NonnegIntMatrix: {
        if (e.size != dim_ * dim_) return false;
        for (int i = 0; i < e.size; ++i)
            if (e.v[i] < 0) return false;
        return det_i64(e.v.data(), dim_) != 0;
    }
    case Family::FiniteTable:
        return e.size == 1 && e.v[0] >= 0 &&
               static_cast<std::size_t>(e.v[0]) < table_.names.size();
    }
    return false;
}

// ---------------------------------------------------------------------------
// window enumeration (lexicographic, deterministic)
// ---------------------------------------------------------------------------

std::vector<Element> Semigroup::enumerate_window(const WindowSpec& w) const {
    if (!w.explicit_elems.empty()) {
        for (const Element& e : w.explicit_elems)
            if (e.family != family_) throw InvalidInputError("window: element family mismatch");
        auto out = w.explicit_elems;
        if (std::find(out.begin(), out.end(), identity_) == out.end())
            throw InvalidInputError("window: explicit window must contain the identity");
        return out;
    }

    switch (family_) {
    case Family::ZPlusD: {
        if (w.bound <= 0) throw InvalidInputError("window: bound must be positive");
        double total = 1;
        for (int i = 0; i < dim_; ++i) total *= static_cast<double>(w.bound);
        if (total > static_cast<double>(max_window_elems))
            throw ResourceError("window: box exceeds configured maximum size");
        std::vector<Element> out;
        out.reserve(static_cast<std::size_t>(total));
        Element e = identity_;
        // odometer over [0, W)^d, last coordinate fastest (lexicographic)
        while (true) {
            out.push_back(e);
            int i = dim_ - 1;
            while (i >= 0 && e.v[i] == w.bound - 1) { e.v[i] = 0; --i; }
            if (i < 0) break;
            ++e.v[i];
        }
        return out;
    }
    case Family::RPlusGrid: {
        if (w.bound <= 0) throw InvalidInputError("window: bound must be positive");
        if (static_cast<std::size_t>(w.bound) > max_window_elems)
            throw ResourceError("window: grid exceeds configured maximum size");
        std::vector<Element> out;
        out.reserve(static_cast<std::size_t>(w.bound));
        for (std::int64_t i = 0; i < w.bound; ++i)
            out.push_back(Element::make(Family::RPlusGrid, {i}));
        return out;
    }
    case Family::ZbarPlus: {
        if (w.bound <= 0) throw InvalidInputError("window: bound must be positive");
        if (static_cast<std::size_t>(w.bound) + 1 > max_window_elems)
            throw ResourceError("window: cutoff exceeds configured maximum size");
        std::vector<Element> out;
        out.reserve(static_cast<std::size_t>(w.bound) + 1);
        for (std::int64_t i = 0; i < w.bound; ++i)
            out.push_back(Element::make(Family::ZbarPlus, {i}));
        out.push_back(Element::make(Family::ZbarPlus, {kInf}));
        return out;
    }
    case Family::NonnegIntMatrix: {
        // entries in [0, bound), nonsingular only; lexicographic by entries
        if (w.bound <= 0) throw InvalidInputError("window: bound must be positive");
        const int cells = dim_ * dim_;
        double total = 1;
        for (int i = 0; i < cells; ++i) total *= static_cast<double>(w.bound);
        if (total > static_cast<double>(max_window_elems))
            throw ResourceError("window: matrix box exceeds configured maximum size");
        std::vector<Element> out;
        Element e = identity_;
        for (int i = 0; i < cells; ++i) e.v[i] = 0;
        while (true) {
            if (det_i64(e.v.data(), dim_) != 0) out.push_back(e);
            int i = cells - 1;
            while (i >= 0 && e.v[i] == w.bound - 1) { e.v[i] = 0; --i; }
            if (i < 0) break;
            ++e.v[i];
        }
        return out;
    }
    case Family::FiniteTable: {
        std::vector<Element> out;
        out.reserve(table_.names.size());
        for (std::size_t i = 0; i < table_.names.size(); ++i)
            out.push_back(Element::make(Family::FiniteTable, {static_cast<std::int64_t>(i)}));
        return out;
    }
    }
    throw InvalidInputError("window: unknown family");
}

std::string Semigroup::describe(const Element& e) const {
    switch (family_) {
    case Family::ZPlusD: {
        std::string s = "(";
        for (int i = 0; i < e.size; ++i) s += (i ? "," : "") + std::to_string(e.v[i]);
        return s + ")";
    }
    case Family::RPlusGrid:
        return std::to_string(static_cast<double>(e.v[0]) * step_);
    case Family::ZbarPlus:
        return e.v[0] == kInf ? "inf" : std::to_string(e.v[0]);
    case Family::NonnegIntMatrix: {
        std::string s = "[";
        for (int i = 0; i < dim_; ++i) {
            s += i ? ";" : "";
            for (int j = 0; j < dim_; ++j) s += (j ? "," : "") + std::to_string(e.v[i * dim_ + j]);
        }
        return s + "]";
    }
    case Family::FiniteTable:
        return table_.names.at(static_cast<std::size_t>(e.v[0]));
    }
    return "?";
}

// ---------------------------------------------------------------------------
// exhaustive law checks
// ---------------------------------------------------------------------------

LawReport Semigroup::check_associative(const WindowSpec& w) const {
    auto elems = enumerate_window(w);
    for (const Element& a : elems)
        for (const Element& b : elems) {
            Element ab = compose(a, b);
            for (const Element& c : elems) {
                if (compose(ab, c) != compose(a, compose(b, c)))
                    return {false, a, b, c};
            }
        }
    return {};
}

LawReport Semigroup::check_commutative(const WindowSpec& w) const {
    auto elems = enumerate_window(w);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i + 1; j < elems.size(); ++j)
            if (compose(elems[i], elems[j]) != compose(elems[j], elems[i]))
                return {false, elems[i], elems[j], identity_};
    return {};
}

LawReport Semigroup::check_identity(const WindowSpec& w) const {
    for (const Element& g : enumerate_window(w))
        if (compose(identity_, g) != g || compose(g, identity_) != g)
            return {false, g, identity_, identity_};
    return {};
}

InjectivityReport Semigroup::check_left_injective(const WindowSpec& w) const {
    auto elems = enumerate_window(w);
    for (const Element& g : elems) {
        std::vector<Element> images;
        images.reserve(elems.size());
        for (const Element& t : elems) images.push_back(compose(g, t));
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j)
                if (images[i] == images[j])
                    return {false, g, elems[i], elems[j]};
    }
    return {};
}

// ---------------------------------------------------------------------------
// quasi-Haar measures
// ---------------------------------------------------------------------------

QuasiHaar QuasiHaar::counting() {
    QuasiHaar m;
    m.kind_ = MeasureKind::Counting;
    return m;
}

QuasiHaar QuasiHaar::grid_lebesgue(double step, int dim) {
    if (!(step > 0) || dim < 1) throw InvalidInputError("grid_lebesgue: bad parameters");
    QuasiHaar m;
    m.kind_ = MeasureKind::GridLebesgue;
    m.step_ = step;
    m.dim_ = dim;
    return m;
}

QuasiHaar QuasiHaar::finite_weights(std::vector<double> weights) {
    bool positive = false;
    for (double w : weights) {
        if (w < 0) throw InvalidInputError("finite_weights: negative weight");
        positive = positive || w > 0;
    }
    if (!positive) throw InvalidInputError("finite_weights: needs at least one positive weight");
    QuasiHaar m;
    m.kind_ = MeasureKind::FiniteWeights;
    m.weights_ = std::move(weights);
    return m;
}

std::vector<Element> canonical_set(std::vector<Element> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return elems;
}

double QuasiHaar::atom(const Element& e) const {
    switch (kind_) {
    case MeasureKind::Counting:
        return 1.0;
    case MeasureKind::GridLebesgue: {
        double m = 1.0;
        for (int i = 0; i < dim_; ++i) m *= step_;
        return m;
    }
    case MeasureKind::FiniteWeights:
        return weights_.at(static_cast<std::size_t>(e.v[0]));
    }
    return 0.0;
}

double QuasiHaar::mass(const std::vector<Element>& set) const {
    auto s = canonical_set(set);
    NeumaierSum acc;
    for (const Element& e : s) acc.add(atom(e));
    return acc.value();
}

double translate_preimage_mass(const Semigroup& desc, const QuasiHaar& mu,
                               const Element& g, const std::vector<Element>& set,
                               const WindowSpec& enclosing) {
    auto target = canonical_set(set);
    auto window = desc.enumerate_window(enclosing);

    // the window must be able to contain the whole preimage; for the shipped
    // injective families it suffices that it dominates the set coordinatewise
    if (desc.family() == Family::ZPlusD || desc.family() == Family::RPlusGrid) {
        std::int64_t max_coord = 0;
        for (const Element& e : target)
            for (int i = 0; i < e.size; ++i) max_coord = std::max(max_coord, e.v[i]);
        if (enclosing.bound <= max_coord)
            throw ResolutionError("translate_preimage_mass: window too small to hold the preimage");
    }

    std::vector<Element> pre;
    for (const Element& t : window) {
        Element image = desc.compose(g, t);
        if (std::binary_search(target.begin(), target.end(), image)) pre.push_back(t);
    }
    return mu.mass(pre);
}

} // namespace bohrlab
