#ifndef FKMORSE_HOMOLOGY_HPP
#define FKMORSE_HOMOLOGY_HPP

#include "fkmorse/flow.hpp"

#include <optional>
#include <vector>

namespace fkmorse {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

struct SnfResult {
    std::size_t rank = 0;
    // Nonzero diagonal entries, positive, each dividing the next.
    std::vector<Integer> invariant_factors;
    // With certificates: left * m * right == diagonal.
    std::optional<IntMatrix> left;
    std::optional<IntMatrix> right;
    std::optional<IntMatrix> diagonal;
};

// Exact Smith normal form over the integers. With certify set the unimodular
// transforms are returned and the product is re-checked before returning.
SnfResult smith_normal_form(const IntMatrix& m, bool certify = false);

// Morse boundary from critical degree-cells (rows) to critical
// (degree-1)-cells (columns), both restricted to word length <= max_length.
struct MorseSlice {
    int degree = 0;
    std::vector<Simplex> basis_lo;
    std::vector<Simplex> basis_hi;
    IntMatrix matrix;
    Scope scope;
};

// Critical cells of one dimension up to a word length, in lex order. In
// normalized mode degenerate cells are left out.
std::vector<Simplex> critical_cells(const FlowContext& ctx, int dim, int max_length);

// Needs ctx.scope().max_dim >= degree + 1 and max_length <= ctx.scope().max_length.
MorseSlice morse_slice(const FlowContext& ctx, int degree, int max_length);

struct HomologyGroup {
    int degree = 0;
    long long betti = 0;
    std::vector<Integer> torsion;

    friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

// H_d from the slices at degrees d and d+1. Throws DomainError if the middle
// bases differ and InvariantViolation if the two boundaries do not compose to 0.
HomologyGroup homology_of_slices(const MorseSlice& lo, const MorseSlice& hi);

struct StabilityEntry {
    int bound = 0;
    HomologyGroup group;
};

struct StabilityReport {
    int degree = 0;
    std::vector<StabilityEntry> entries;
    // First bound from which every later answer in the range agrees.
    std::optional<int> stable_from;
};

struct ScanOptions {
    PairingFlags flags;
    ChainMode mode = ChainMode::Unnormalized;
};

HomologyGroup homology_at(int degree, int max_length, const ScanOptions& options = {});

StabilityReport stability_scan(int degree, int first_bound, int last_bound, const ScanOptions& options = {});

} // namespace fkmorse

#endif
