#ifndef FKMORSE_TESTS_ORACLES_HPP
#define FKMORSE_TESTS_ORACLES_HPP

// Reference models kept apart from the library. A letter of dimension n is a
// nonconstant monotone map [n] -> [1], stored as its values f(0..n); a word is
// a list of such maps. Faces delete a point of the domain, degeneracies
// double one, and constant maps collapse to the identity.

#include "fkmorse/chain.hpp"
#include "fkmorse/simplicial.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using fkmorse::Simplex;

using Map = std::vector<int>;

struct Word {
    int dim = 0;
    std::vector<Map> maps;

    friend bool operator==(const Word&, const Word&) = default;
};

inline Map letter_map(int n, int k)
{
    Map f(static_cast<std::size_t>(n + 1), 0);
    for (int i = n + 1 - k; i <= n; ++i)
        f[static_cast<std::size_t>(i)] = 1;
    return f;
}

inline bool constant(const Map& f)
{
    return std::all_of(f.begin(), f.end(), [&](int v) { return v == f.front(); });
}

inline Word from_simplex(const Simplex& x)
{
    Word w{x.dim(), {}};
    for (auto l : x.word())
        w.maps.push_back(letter_map(x.dim(), l));
    return w;
}

inline Simplex to_simplex(const Word& w)
{
    std::vector<fkmorse::Letter> word;
    for (const Map& f : w.maps) {
        int ones = static_cast<int>(std::count(f.begin(), f.end(), 1));
        if (ones < 1 || ones > w.dim || f != letter_map(w.dim, ones))
            std::abort();
        word.push_back(static_cast<fkmorse::Letter>(ones));
    }
    return Simplex(w.dim, word);
}

inline Word face(const Word& w, int i)
{
    Word out{w.dim - 1, {}};
    for (Map f : w.maps) {
        f.erase(f.begin() + i);
        if (!constant(f))
            out.maps.push_back(std::move(f));
    }
    return out;
}

inline Word degeneracy(const Word& w, int j)
{
    Word out{w.dim + 1, {}};
    for (Map f : w.maps) {
        f.insert(f.begin() + j, f[static_cast<std::size_t>(j)]);
        out.maps.push_back(std::move(f));
    }
    return out;
}

inline Simplex face(const Simplex& x, int i)
{
    return to_simplex(face(from_simplex(x), i));
}

inline Simplex degeneracy(const Simplex& x, int j)
{
    return to_simplex(degeneracy(from_simplex(x), j));
}

// x is an s_j-image iff every letter takes equal values at j and j+1.
inline std::optional<int> degenerate_index(const Simplex& x)
{
    Word w = from_simplex(x);
    for (int j = 0; j < x.dim(); ++j) {
        bool all = true;
        for (const Map& f : w.maps)
            all = all && f[static_cast<std::size_t>(j)] == f[static_cast<std::size_t>(j + 1)];
        if (all)
            return j;
    }
    return std::nullopt;
}

// Same question answered by search: is x = s_j(v) for some v of length <= |x|?
inline bool degenerate_by_search(const Simplex& x);

// Every word of a stratum, lex order, by plain counting.
inline std::vector<Simplex> stratum(int dim, int length)
{
    std::vector<Simplex> out;
    if (dim == 0) {
        if (length == 0)
            out.push_back(Simplex(0, {}));
        return out;
    }
    std::vector<fkmorse::Letter> w(static_cast<std::size_t>(length), 1);
    for (;;) {
        out.push_back(Simplex(dim, w));
        int p = length - 1;
        while (p >= 0 && w[static_cast<std::size_t>(p)] == dim)
            w[static_cast<std::size_t>(p--)] = 1;
        if (p < 0)
            break;
        ++w[static_cast<std::size_t>(p)];
    }
    return out;
}

inline bool degenerate_by_search(const Simplex& x)
{
    if (x.dim() == 0)
        return false;
    for (int len = 0; len <= static_cast<int>(x.length()); ++len) {
        for (const Simplex& v : stratum(x.dim() - 1, len)) {
            for (int j = 0; j < x.dim(); ++j) {
                if (oracle::degeneracy(v, j) == x)
                    return true;
            }
        }
    }
    return false;
}

// alpha_k^(n) = s_{a_1} ... s_{a_{n-1}} y with subscript string 0..0 1..1
// (k-1 ones). Applying s_j prepends j; the relation s_i s_j = s_{j+1} s_i
// (i <= j) read right to left rewrites any descent (a, b), a > b, into
// (b, a-1) until the string is nondecreasing.
inline int degeneracy_by_subscripts(int n, int k, int j)
{
    std::vector<int> s;
    s.push_back(j);
    for (int i = 0; i < n - 1; ++i)
        s.push_back(i < n - k ? 0 : 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p + 1 < s.size(); ++p) {
            if (s[p] > s[p + 1]) {
                int a = s[p], b = s[p + 1];
                s[p] = b;
                s[p + 1] = a - 1;
                changed = true;
            }
        }
    }
    for (int v : s) {
        if (v < 0 || v > 1)
            std::abort();
    }
    return 1 + static_cast<int>(std::count(s.begin(), s.end(), 1));
}

inline int face_hits(const Simplex& tau, const Simplex& sigma)
{
    int hits = 0;
    for (int i = 0; i <= tau.dim(); ++i)
        hits += oracle::face(tau, i) == sigma;
    return hits;
}

inline std::vector<Simplex> regular_cofaces(const Simplex& sigma)
{
    std::vector<Simplex> out;
    for (const Simplex& tau : stratum(sigma.dim() + 1, static_cast<int>(sigma.length()))) {
        if (face_hits(tau, sigma) == 1)
            out.push_back(tau);
    }
    return out;
}

// Restricted steepness partner under the default reading: least regular
// coface, every other same-length face below sigma, then both members must be
// nondegenerate.
inline std::optional<Simplex> steepness(const Simplex& sigma)
{
    std::vector<Simplex> up = oracle::regular_cofaces(sigma);
    if (up.empty())
        return std::nullopt;
    const Simplex& tau = up.front();
    for (int i = 0; i <= tau.dim(); ++i) {
        Simplex f = oracle::face(tau, i);
        if (f.length() == sigma.length() && f != sigma && !(f.word() < sigma.word()))
            return std::nullopt;
    }
    if (degenerate_index(sigma) || degenerate_index(tau))
        return std::nullopt;
    return tau;
}

inline fkmorse::Chain boundary(const Simplex& x)
{
    fkmorse::Chain c(x.dim() - 1);
    for (int i = 0; i <= x.dim(); ++i)
        c.add(oracle::face(x, i), i % 2 ? -1 : 1);
    return c;
}

inline std::uint64_t seed()
{
    if (const char* s = std::getenv("FKMORSE_TEST_SEED"))
        return std::strtoull(s, nullptr, 10);
    return 20261016;
}

inline Simplex random_simplex(std::mt19937_64& rng, int min_dim, int max_dim, int max_length)
{
    int dim = std::uniform_int_distribution<int>(min_dim, max_dim)(rng);
    int len = std::uniform_int_distribution<int>(0, max_length)(rng);
    std::vector<fkmorse::Letter> w(static_cast<std::size_t>(len));
    for (auto& l : w)
        l = static_cast<fkmorse::Letter>(std::uniform_int_distribution<int>(1, std::max(dim, 1))(rng));
    if (dim == 0)
        w.clear();
    return Simplex(dim, w);
}

} // namespace oracle

#endif
