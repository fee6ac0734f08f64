#include "fkmorse/simplicial.hpp"

#include "fkmorse/errors.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace fkmorse {

namespace {

std::string describe(int dim, int index)
{
    return "alpha_" + std::to_string(index) + "^(" + std::to_string(dim) + ")";
}

// Index of d_i(alpha_k^(n)) in dimension n-1, or 0 for the identity.
// Out-of-range results (index 0 or index n) are the basepoint, i.e. e.
int face_index(int n, int k, int i)
{
    int r = (i <= n - k) ? k : k - 1;
    return (r == 0 || r > n - 1) ? 0 : r;
}

int degeneracy_index(int n, int k, int j)
{
    return (j <= n - k) ? k : k + 1;
}

} // namespace

Generator::Generator(int dim, int index) : dim_(dim), index_(index)
{
    if (dim < 1 || dim > kMaxDim || index < 1 || index > dim)
        throw DomainError("no generator " + describe(dim, index));
}

Simplex::Simplex(int dim, std::vector<Letter> word) : dim_(dim), word_(std::move(word))
{
    if (dim < 0 || dim > kMaxDim)
        throw DomainError("simplex dimension out of range: " + std::to_string(dim));
    for (Letter l : word_) {
        if (l < 1 || l > dim)
            throw DomainError("letter " + std::to_string(int(l)) + " not a generator in dimension " +
                              std::to_string(dim));
    }
}

Simplex Simplex::identity(int dim)
{
    return Simplex(dim, {});
}

std::strong_ordering operator<=>(const Simplex& a, const Simplex& b)
{
    if (auto c = a.dim_ <=> b.dim_; c != 0)
        return c;
    if (auto c = a.word_.size() <=> b.word_.size(); c != 0)
        return c;
    return a.word_ <=> b.word_;
}

std::size_t SimplexHash::operator()(const Simplex& x) const noexcept
{
    // FNV-1a over (dim, word).
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(x.dim()));
    for (Letter l : x.word())
        mix(l);
    return static_cast<std::size_t>(h);
}

StratumKey::StratumKey(int d, int l) : dim(d), length(l)
{
    if (d < 0 || l < 0)
        throw DomainError("stratum key must be nonnegative");
}

std::optional<Generator> face_generator(Generator g, int i)
{
    const int n = g.dim();
    if (i < 0 || i > n)
        throw DomainError("face index " + std::to_string(i) + " out of range for " + describe(n, g.index()));
    int r = face_index(n, g.index(), i);
    if (r == 0)
        return std::nullopt;
    return Generator(n - 1, r);
}

Simplex face(const Simplex& x, int i)
{
    const int n = x.dim();
    if (n == 0)
        throw DomainError("a 0-simplex has no faces");
    if (i < 0 || i > n)
        throw DomainError("face index " + std::to_string(i) + " out of range in dimension " + std::to_string(n));
    std::vector<Letter> out;
    out.reserve(x.word_.size());
    for (Letter k : x.word_) {
        int r = face_index(n, k, i);
        if (r != 0)
            out.push_back(static_cast<Letter>(r));
    }
    return Simplex(n - 1, std::move(out), Simplex::Unchecked{});
}

Generator degeneracy_generator(Generator g, int j)
{
    const int n = g.dim();
    if (j < 0 || j > n)
        throw DomainError("degeneracy index " + std::to_string(j) + " out of range for " + describe(n, g.index()));
    return Generator(n + 1, degeneracy_index(n, g.index(), j));
}

Simplex degeneracy(const Simplex& x, int j)
{
    const int n = x.dim();
    if (j < 0 || j > n)
        throw DomainError("degeneracy index " + std::to_string(j) + " out of range in dimension " +
                          std::to_string(n));
    if (n + 1 > kMaxDim)
        throw DomainError("dimension limit reached");
    std::vector<Letter> out;
    out.reserve(x.word_.size());
    for (Letter k : x.word_)
        out.push_back(static_cast<Letter>(degeneracy_index(n, k, j)));
    return Simplex(n + 1, std::move(out), Simplex::Unchecked{});
}

Simplex concat(const Simplex& a, const Simplex& b)
{
    if (a.dim() != b.dim())
        throw DomainError("cannot multiply simplices of different dimensions");
    std::vector<Letter> w = a.word_;
    w.insert(w.end(), b.word_.begin(), b.word_.end());
    return Simplex(a.dim(), std::move(w), Simplex::Unchecked{});
}

std::optional<DegeneracyWitness> degeneracy_witness(const Simplex& x)
{
    for (int j = 0; j < x.dim(); ++j) {
        Simplex pre = face(x, j);
        if (degeneracy(pre, j) == x)
            return DegeneracyWitness{j, std::move(pre)};
    }
    return std::nullopt;
}

bool is_degenerate(const Simplex& x)
{
    return degeneracy_witness(x).has_value();
}

std::strong_ordering lex_compare(const Simplex& a, const Simplex& b)
{
    if (a.dim() != b.dim())
        throw DomainError("lex_compare across dimensions " + std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()));
    return a <=> b;
}

std::uint64_t stratum_size(StratumKey key)
{
    if (key.length == 0)
        return 1;
    if (key.dim == 0)
        return 0;
    std::uint64_t n = 1;
    for (int i = 0; i < key.length; ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(key.dim))
            throw ResourceLimitError("stratum (" + std::to_string(key.dim) + "," + std::to_string(key.length) +
                                     ") is too large to count");
        n *= static_cast<std::uint64_t>(key.dim);
    }
    return n;
}

void for_each_in_stratum(StratumKey key, const std::function<bool(const Simplex&)>& visit)
{
    if (key.dim > kMaxDim)
        throw DomainError("dimension out of range");
    if (key.length > 0 && key.dim == 0)
        return;
    // Odometer over letters 1..dim, rightmost fastest: lexicographic order.
    std::vector<Letter> w(static_cast<std::size_t>(key.length), Letter{1});
    while (true) {
        if (!visit(Simplex(key.dim, w)))
            return;
        int pos = key.length - 1;
        while (pos >= 0 && w[pos] == key.dim) {
            w[pos] = 1;
            --pos;
        }
        if (pos < 0)
            return;
        ++w[pos];
    }
}

std::vector<Simplex> enumerate_stratum(StratumKey key)
{
    std::vector<Simplex> out;
    out.reserve(static_cast<std::size_t>(stratum_size(key)));
    for_each_in_stratum(key, [&out](const Simplex& x) {
        out.push_back(x);
        return true;
    });
    return out;
}

std::string to_text(const Simplex& x)
{
    if (x.is_identity())
        return "e";
    std::string s;
    for (std::size_t i = 0; i < x.length(); ++i) {
        if (i)
            s += '.';
        s += 'a';
        s += std::to_string(int(x.word()[i]));
    }
    return s;
}

namespace {

int parse_int(std::string_view s, std::string_view whole)
{
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw ParseError("bad integer '" + std::string(s) + "' in simplex '" + std::string(whole) + "'");
    return v;
}

} // namespace

Simplex parse_simplex(std::string_view text, int dim)
{
    if (text == "e")
        return Simplex::identity(dim);
    std::vector<Letter> word;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t dot = text.find('.', start);
        std::string_view tok = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (tok.size() < 2 || tok[0] != 'a')
            throw ParseError("bad generator token '" + std::string(tok) + "' in '" + std::string(text) + "'");
        std::string_view body = tok.substr(1);
        int power = 1;
        if (auto caret = body.find('^'); caret != std::string_view::npos) {
            power = parse_int(body.substr(caret + 1), text);
            body = body.substr(0, caret);
        }
        int index = parse_int(body, text);
        if (index < 1 || index > dim || power < 0)
            throw ParseError("generator '" + std::string(tok) + "' invalid in dimension " + std::to_string(dim));
        word.insert(word.end(), static_cast<std::size_t>(power), static_cast<Letter>(index));
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return Simplex(dim, std::move(word));
}

} // namespace fkmorse
