#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bohrlab/errors.hpp"

namespace bohrlab {

// the compactification point of Zbar+ (and a general "infinity" payload marker)
inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

enum class Family : std::uint8_t {
    ZPlusD,          // (Z_+^d, +)
    RPlusGrid,       // uniform grid h*Z_+ inside (R_+, +)
    ZbarPlus,        // one-point compactification Z_+ u {inf}, s o t = s + t
    NonnegIntMatrix, // nonsingular nonnegative integer n x n matrices, product
    FiniteTable,     // explicit finite operation table
};

// A semigroup element is a flat integer payload interpreted by its family:
// ZPlusD: d coordinates; RPlusGrid: grid multiple; ZbarPlus: value or kInf;
// NonnegIntMatrix: n*n entries row-major; FiniteTable: carrier index.
struct Element {
    static constexpr int kMaxPayload = 9;

    Family family = Family::ZPlusD;
    std::uint8_t size = 0;
    std::array<std::int64_t, kMaxPayload> v{};

    static Element make(Family f, std::initializer_list<std::int64_t> payload) {
        Element e;
        e.family = f;
        e.size = static_cast<std::uint8_t>(payload.size());
        int i = 0;
        for (std::int64_t p : payload) e.v[i++] = p;
        return e;
    }

    friend bool operator==(const Element& a, const Element& b) {
        if (a.family != b.family || a.size != b.size) return false;
        for (int i = 0; i < a.size; ++i)
            if (a.v[i] != b.v[i]) return false;
        return true;
    }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
    friend bool operator<(const Element& a, const Element& b) {
        for (int i = 0; i < a.size && i < b.size; ++i) {
            if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
        }
        return a.size < b.size;
    }
};

// Finite window over a (possibly noncompact) semigroup. The meaning of
// `bound` is family-specific: box radius W for ZPlusD ([0,W)^d), number of
// grid steps T for RPlusGrid, cutoff N for ZbarPlus ({0..N-1} u {inf}).
// Matrix and finite-table windows list their elements explicitly (finite
// tables default to the whole carrier).
struct WindowSpec {
    std::int64_t bound = 0;
    std::vector<Element> explicit_elems;

    static WindowSpec box(std::int64_t w) { return WindowSpec{w, {}}; }
    static WindowSpec elems(std::vector<Element> es) { return WindowSpec{0, std::move(es)}; }
};

struct FiniteTableData {
    std::vector<std::string> names;       // carrier, in table order
    std::vector<std::int32_t> op;         // row-major: op[i*n+j] = index of i o j
    std::vector<double> weights;          // optional quasi-Haar weights (empty = counting)
};

struct InjectivityReport {
    bool injective = true;
    Element translator;       // the g whose left translation collided
    Element witness_a, witness_b;
};

struct LawReport {
    bool holds = true;
    Element a, b, c; // witness triple/pair when violated
};

// ---------------------------------------------------------------------------
// Semigroup: a concrete family with composition, identity, window
// enumeration and (declared) commutativity. Values are immutable.
// ---------------------------------------------------------------------------
class Semigroup {
public:
    static Semigroup zplus(int d);
    static Semigroup rplus_grid(double step);
    static Semigroup zbarplus();
    static Semigroup nonneg_int_matrix(int n);
    static Semigroup finite_table(FiniteTableData data);

    // built-in finite families used throughout the test corpus
    static Semigroup cyclic(int n);                // Z_n
    static Semigroup truncated_addition(int m);    // {0..m}, s o t = min(s+t, m)
    static Semigroup truncated_zbar(int n);        // {0..n, inf}, inf absorbing
    static Semigroup finite_from_csv(const std::string& path);

    Family family() const { return family_; }
    int dim() const { return dim_; }
    double grid_step() const { return step_; }
    int matrix_size() const { return dim_; }
    bool declared_abelian() const { return abelian_; }
    bool compact() const { return compact_; }
    bool finite() const { return family_ == Family::FiniteTable; }
    std::size_t carrier_size() const { return table_.names.size(); }
    const FiniteTableData& table() const { return table_; }

    Element identity() const { return identity_; }
    Element compose(const Element& g, const Element& h) const;

    // structural invariants: nonnegative coordinates, nonzero determinant for
    // matrices, in-range carrier indices
    bool valid_element(const Element& e) const;

    // deterministic (lexicographic) enumeration; always contains the identity
    std::vector<Element> enumerate_window(const WindowSpec& w) const;

    std::string describe(const Element& e) const;
    std::string tag() const { return tag_; }

    // exhaustive checks on an enumerated window
    LawReport check_associative(const WindowSpec& w) const;
    LawReport check_commutative(const WindowSpec& w) const;
    LawReport check_identity(const WindowSpec& w) const;
    InjectivityReport check_left_injective(const WindowSpec& w) const;

    std::size_t max_window_elems = 1u << 22;

private:
    Semigroup() = default;

    Family family_ = Family::ZPlusD;
    int dim_ = 1;          // d for ZPlusD, n for matrices
    double step_ = 1.0;    // grid step for RPlusGrid
    bool abelian_ = true;
    bool compact_ = false;
    Element identity_;
    FiniteTableData table_;
    std::string tag_;
};

// ---------------------------------------------------------------------------
// Quasi-Haar measures: translation-invariant on windows (counting / grid
// Lebesgue), or explicit finite weights.
// ---------------------------------------------------------------------------
enum class MeasureKind : std::uint8_t { Counting, GridLebesgue, FiniteWeights };

class QuasiHaar {
public:
    static QuasiHaar counting();
    static QuasiHaar grid_lebesgue(double step, int dim = 1);
    static QuasiHaar finite_weights(std::vector<double> weights);

    MeasureKind kind() const { return kind_; }

    // mass of a finite element SET (duplicates in the input are ignored)
    double mass(const std::vector<Element>& set) const;
    // mass of a single atom {e}
    double atom(const Element& e) const;

private:
    MeasureKind kind_ = MeasureKind::Counting;
    double step_ = 1.0;
    int dim_ = 1;
    std::vector<double> weights_;
};

// lambda(L_g^{-1} S) computed by enumerating the given enclosing window.
// Throws ResolutionError when the window cannot contain the full preimage.
double translate_preimage_mass(const Semigroup& desc, const QuasiHaar& mu,
                               const Element& g, const std::vector<Element>& set,
                               const WindowSpec& enclosing);

// convenience: canonical set form (sorted, deduplicated)
std::vector<Element> canonical_set(std::vector<Element> elems);

} // namespace bohrlab
