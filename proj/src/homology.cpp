#include "fkmorse/homology.hpp"

#include "fkmorse/errors.hpp"

#include <algorithm>
#include <utility>

namespace fkmorse {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw DomainError("ragged matrix literal");
        for (long long v : r)
            data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v.is_zero(); });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows())
        throw DomainError("matrix product shape mismatch: " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " times " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Integer& x = a(i, k);
            if (x.is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += x * b(k, j);
        }
    }
    return out;
}

namespace {

// Elementary operations applied to the working matrix and, when tracked, to
// the matching transform.
struct SnfState {
    IntMatrix d;
    std::optional<IntMatrix> u;
    std::optional<IntMatrix> v;

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < d.cols(); ++j)
            std::swap(d(a, j), d(b, j));
        if (u) {
            for (std::size_t j = 0; j < u->cols(); ++j)
                std::swap((*u)(a, j), (*u)(b, j));
        }
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < d.rows(); ++i)
            std::swap(d(i, a), d(i, b));
        if (v) {
            for (std::size_t i = 0; i < v->rows(); ++i)
                std::swap((*v)(i, a), (*v)(i, b));
        }
    }

    // row[dst] -= q * row[src]
    void sub_row(std::size_t dst, std::size_t src, const Integer& q)
    {
        for (std::size_t j = 0; j < d.cols(); ++j)
            d(dst, j) -= q * d(src, j);
        if (u) {
            for (std::size_t j = 0; j < u->cols(); ++j)
                (*u)(dst, j) -= q * (*u)(src, j);
        }
    }

    void sub_col(std::size_t dst, std::size_t src, const Integer& q)
    {
        for (std::size_t i = 0; i < d.rows(); ++i)
            d(i, dst) -= q * d(i, src);
        if (v) {
            for (std::size_t i = 0; i < v->rows(); ++i)
                (*v)(i, dst) -= q * (*v)(i, src);
        }
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t j = 0; j < d.cols(); ++j)
            d(r, j) = -d(r, j);
        if (u) {
            for (std::size_t j = 0; j < u->cols(); ++j)
                (*u)(r, j) = -(*u)(r, j);
        }
    }
};

bool smaller_nonzero(const Integer& x, const Integer& best, bool have)
{
    if (x.is_zero())
        return false;
    return !have || abs(x) < abs(best);
}

} // namespace

SnfResult smith_normal_form(const IntMatrix& m, bool certify)
{
    SnfState st{m, std::nullopt, std::nullopt};
    if (certify) {
        st.u = IntMatrix::identity(m.rows());
        st.v = IntMatrix::identity(m.cols());
    }
    IntMatrix& d = st.d;
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    const std::size_t limit = std::min(rows, cols);

    std::size_t t = 0;
    for (; t < limit; ++t) {
        // Smallest nonzero entry of the remaining block goes to the pivot.
        bool have = false;
        std::size_t pr = t, pc = t;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (smaller_nonzero(d(i, j), d(pr, pc), have)) {
                    pr = i;
                    pc = j;
                    have = true;
                }
            }
        }
        if (!have)
            break;
        st.swap_rows(t, pr);
        st.swap_cols(t, pc);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (d(i, t).is_zero())
                    continue;
                st.sub_row(i, t, Integer(d(i, t) / d(t, t)));
                if (!d(i, t).is_zero())
                    clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (d(t, j).is_zero())
                    continue;
                st.sub_col(j, t, Integer(d(t, j) / d(t, t)));
                if (!d(t, j).is_zero())
                    clean = false;
            }
            if (!clean) {
                // A remainder smaller than the pivot is left in row or column t.
                std::size_t best_r = t, best_c = t;
                for (std::size_t i = t + 1; i < rows; ++i) {
                    if (smaller_nonzero(d(i, t), d(best_r, best_c), true)) {
                        best_r = i;
                        best_c = t;
                    }
                }
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (smaller_nonzero(d(t, j), d(best_r, best_c), true)) {
                        best_r = t;
                        best_c = j;
                    }
                }
                st.swap_rows(t, best_r);
                st.swap_cols(t, best_c);
                continue;
            }
            // Pivot must divide the rest of the block; fold in an offending row.
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (Integer(d(i, j) % d(t, t)) != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad == rows)
                break;
            st.sub_row(t, bad, Integer(-1));
        }
        if (d(t, t) < 0)
            st.negate_row(t);
    }

    SnfResult out;
    out.rank = t;
    for (std::size_t i = 0; i < t; ++i)
        out.invariant_factors.push_back(d(i, i));
    for (std::size_t i = 1; i < t; ++i) {
        if (Integer(out.invariant_factors[i] % out.invariant_factors[i - 1]) != 0)
            throw InvariantViolation("Smith normal form lost the divisibility chain");
    }
    if (certify) {
        if ((*st.u) * m * (*st.v) != d)
            throw InvariantViolation("Smith normal form certificate does not reproduce the diagonal");
        out.left = std::move(st.u);
        out.right = std::move(st.v);
        out.diagonal = std::move(d);
    }
    return out;
}

std::vector<Simplex> critical_cells(const FlowContext& ctx, int dim, int max_length)
{
    if (dim < 0 || max_length < 0)
        throw DomainError("critical cells need a nonnegative dimension and length bound");
    if (max_length > ctx.scope().max_length)
        throw TruncationError("length bound " + std::to_string(max_length) + " exceeds the flow scope (" +
                              std::to_string(ctx.scope().max_length) + ")");
    std::vector<Simplex> out;
    for (int len = 0; len <= max_length; ++len) {
        for_each_in_stratum(StratumKey(dim, len), [&](const Simplex& x) {
            if (ctx.mode() == ChainMode::Normalized && is_degenerate(x))
                return true;
            if (ctx.is_critical(x))
                out.push_back(x);
            return true;
        });
    }
    return out;
}

MorseSlice morse_slice(const FlowContext& ctx, int degree, int max_length)
{
    if (degree < 0)
        throw DomainError("degree must be nonnegative");
    if (degree + 1 > ctx.scope().max_dim)
        throw TruncationError("degree " + std::to_string(degree) + " needs a flow scope of dimension at least " +
                              std::to_string(degree + 1));
    MorseSlice s;
    s.degree = degree;
    s.scope = Scope{ctx.scope().max_dim, max_length};
    s.basis_hi = critical_cells(ctx, degree, max_length);
    if (degree > 0)
        s.basis_lo = critical_cells(ctx, degree - 1, max_length);
    s.matrix = IntMatrix(s.basis_hi.size(), s.basis_lo.size());

    std::unordered_map<Simplex, std::size_t, SimplexHash> column;
    for (std::size_t j = 0; j < s.basis_lo.size(); ++j)
        column.emplace(s.basis_lo[j], j);
    for (std::size_t i = 0; i < s.basis_hi.size(); ++i) {
        const Chain row = morse_boundary(ctx, s.basis_hi[i]);
        for (const auto& [x, a] : row.terms()) {
            auto it = column.find(x);
            // Faces never lengthen words, so every term has a column.
            if (it == column.end())
                throw InvariantViolation("Morse boundary of " + to_text(s.basis_hi[i]) +
                                         " reaches a cell outside the basis: " + to_text(x));
            s.matrix(i, it->second) = a;
        }
    }
    return s;
}

HomologyGroup homology_of_slices(const MorseSlice& lo, const MorseSlice& hi)
{
    if (hi.degree != lo.degree + 1)
        throw DomainError("slices must have consecutive degrees");
    if (lo.basis_hi != hi.basis_lo)
        throw DomainError("slices disagree on the degree-" + std::to_string(lo.degree) + " basis");
    if (hi.matrix.rows() && lo.matrix.cols() && !(hi.matrix * lo.matrix).is_zero())
        throw InvariantViolation("Morse boundaries do not compose to zero at degree " + std::to_string(lo.degree));

    const std::size_t rank_out = smith_normal_form(lo.matrix).rank;
    const SnfResult in = smith_normal_form(hi.matrix);

    HomologyGroup g;
    g.degree = lo.degree;
    g.betti = static_cast<long long>(lo.basis_hi.size()) - static_cast<long long>(rank_out) -
              static_cast<long long>(in.rank);
    for (const Integer& f : in.invariant_factors) {
        if (f > 1)
            g.torsion.push_back(f);
    }
    return g;
}

HomologyGroup homology_at(int degree, int max_length, const ScanOptions& options)
{
    if (degree < 0 || max_length < 0)
        throw DomainError("homology needs a nonnegative degree and length bound");
    BuildResult built = build_matching(degree + 2, std::max(max_length, 1), options.flags);
    FlowContext ctx(std::move(built.matching), options.mode);
    return homology_of_slices(morse_slice(ctx, degree, max_length), morse_slice(ctx, degree + 1, max_length));
}

StabilityReport stability_scan(int degree, int first_bound, int last_bound, const ScanOptions& options)
{
    StabilityReport r;
    r.degree = degree;
    if (first_bound > last_bound)
        return r;
    if (degree < 0 || first_bound < 0)
        throw DomainError("stability scan needs a nonnegative degree and bounds");
    BuildResult built = build_matching(degree + 2, std::max(last_bound, 1), options.flags);
    FlowContext ctx(std::move(built.matching), options.mode);
    for (int b = first_bound; b <= last_bound; ++b) {
        HomologyGroup g = homology_of_slices(morse_slice(ctx, degree, b), morse_slice(ctx, degree + 1, b));
        r.entries.push_back({b, std::move(g)});
    }
    std::size_t k = r.entries.size() - 1;
    while (k > 0 && r.entries[k - 1].group == r.entries.back().group)
        --k;
    r.stable_from = r.entries[k].bound;
    return r;
}

} // namespace fkmorse
