#ifndef FKMORSE_CHAIN_HPP
#define FKMORSE_CHAIN_HPP

#include "fkmorse/simplicial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>

namespace fkmorse {

using Integer = boost::multiprecision::cpp_int;

// Unnormalized chains keep every simplex (degenerate ones and identities
// included) as a basis element. Normalized chains drop degenerate simplices.
enum class ChainMode { Unnormalized, Normalized };

// Finite integer combination of simplices of one dimension. Terms are kept in
// the word-length/lexicographic order and never carry a zero coefficient.
class Chain {
public:
    explicit Chain(int dim = 0);

    static Chain unit(const Simplex& x, const Integer& coef = 1);

    int dim() const { return dim_; }
    const std::map<Simplex, Integer>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Longest word in the support; 0 for the empty chain.
    std::size_t max_length() const;

    Integer coefficient(const Simplex& x) const;

    void add(const Simplex& x, const Integer& coef);

    Chain& operator+=(const Chain& other);
    Chain& operator-=(const Chain& other);
    Chain& operator*=(const Integer& scalar);

    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
    friend Chain operator-(Chain a) { return a *= -1; }
    friend Chain operator*(const Integer& s, Chain a) { return a *= s; }

    friend bool operator==(const Chain&, const Chain&) = default;

private:
    void require_dim(int d) const;

    int dim_;
    std::map<Simplex, Integer> terms_;
};

Chain boundary(const Chain& c, ChainMode mode = ChainMode::Unnormalized);
Chain boundary(const Simplex& x, ChainMode mode = ChainMode::Unnormalized);

// Coefficient of x in c. Throws DomainError on dimension mismatch.
Integer inner(const Chain& c, const Simplex& x);

// Signed count of face indices i with d_i(tau) == sigma.
int incidence(const Simplex& tau, const Simplex& sigma);

} // namespace fkmorse

#endif
