#ifndef FKMORSE_SIMPLICIAL_HPP
#define FKMORSE_SIMPLICIAL_HPP

// Milnor's free simplicial monoid F+K on the minimal simplicial circle K.
//
// In dimension n the monoid is free on n generators alpha_1 .. alpha_n, where
// alpha_k is the iterated degeneracy of the 1-simplex y whose degeneracy
// string is 0...01...1 with k-1 ones. A simplex is a word in these
// generators; the empty word is the identity e_n.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fkmorse {

using Letter = std::uint8_t;

inline constexpr int kMaxDim = 250;

class Generator {
public:
    // Throws DomainError unless 1 <= index <= dim.
    Generator(int dim, int index);

    int dim() const { return dim_; }
    int index() const { return index_; }

    friend bool operator==(const Generator&, const Generator&) = default;

private:
    int dim_;
    int index_;
};

class Simplex {
public:
    Simplex() = default;
    // Throws DomainError if any letter lies outside 1..dim.
    Simplex(int dim, std::vector<Letter> word);

    static Simplex identity(int dim);

    int dim() const { return dim_; }
    std::size_t length() const { return word_.size(); }
    const std::vector<Letter>& word() const { return word_; }
    bool is_identity() const { return word_.empty(); }

    friend bool operator==(const Simplex&, const Simplex&) = default;

    // Container order: dimension, then the word-length/lexicographic order.
    friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b);

private:
    struct Unchecked {};
    Simplex(int dim, std::vector<Letter> word, Unchecked) : dim_(dim), word_(std::move(word)) {}

    int dim_ = 0;
    std::vector<Letter> word_;

    friend Simplex face(const Simplex& x, int i);
    friend Simplex degeneracy(const Simplex& x, int j);
    friend Simplex concat(const Simplex& a, const Simplex& b);
};

struct SimplexHash {
    std::size_t operator()(const Simplex& x) const noexcept;
};

struct StratumKey {
    int dim = 0;
    int length = 0;

    StratumKey() = default;
    StratumKey(int d, int l);

    friend bool operator==(const StratumKey&, const StratumKey&) = default;
    friend auto operator<=>(const StratumKey&, const StratumKey&) = default;
};

inline StratumKey stratum_of(const Simplex& x) { return {x.dim(), static_cast<int>(x.length())}; }

// d_i of a generator; std::nullopt is the identity (the letter is absorbed).
std::optional<Generator> face_generator(Generator g, int i);

Simplex face(const Simplex& x, int i);

Generator degeneracy_generator(Generator g, int j);

Simplex degeneracy(const Simplex& x, int j);

// Word concatenation; both factors must share a dimension.
Simplex concat(const Simplex& a, const Simplex& b);

struct DegeneracyWitness {
    int j;
    Simplex preimage;
};

// Least j with s_j(d_j x) == x, if any. Dimension-0 cells are nondegenerate.
std::optional<DegeneracyWitness> degeneracy_witness(const Simplex& x);

bool is_degenerate(const Simplex& x);

// Word length first, then lexicographic by generator index. Throws DomainError
// when dimensions differ.
std::strong_ordering lex_compare(const Simplex& a, const Simplex& b);

// dim^length, throwing ResourceLimitError on overflow of 64 bits.
std::uint64_t stratum_size(StratumKey key);

// All words of the stratum in lexicographic order.
std::vector<Simplex> enumerate_stratum(StratumKey key);

// Streaming form of enumerate_stratum. The callback sees each simplex once,
// in order; returning false stops the walk.
void for_each_in_stratum(StratumKey key, const std::function<bool(const Simplex&)>& visit);

// Canonical text: "e" or "a3.a2.a2". The dimension is carried separately.
std::string to_text(const Simplex& x);

// Accepts the canonical syntax plus "aK^p" powers. Throws ParseError.
Simplex parse_simplex(std::string_view text, int dim);

} // namespace fkmorse

#endif
