#include "fkmorse/chain.hpp"

#include "fkmorse/errors.hpp"

namespace fkmorse {

Chain::Chain(int dim) : dim_(dim)
{
    if (dim < 0)
        throw DomainError("chain dimension must be nonnegative");
}

Chain Chain::unit(const Simplex& x, const Integer& coef)
{
    Chain c(x.dim());
    c.add(x, coef);
    return c;
}

void Chain::require_dim(int d) const
{
    if (d != dim_)
        throw DomainError("dimension " + std::to_string(d) + " does not match chain dimension " +
                          std::to_string(dim_));
}

std::size_t Chain::max_length() const
{
    // Map order is length-major, so the last key is the longest word.
    return terms_.empty() ? 0 : terms_.rbegin()->first.length();
}

Integer Chain::coefficient(const Simplex& x) const
{
    require_dim(x.dim());
    auto it = terms_.find(x);
    return it == terms_.end() ? Integer(0) : it->second;
}

void Chain::add(const Simplex& x, const Integer& coef)
{
    require_dim(x.dim());
    if (coef == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(x, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Chain& Chain::operator+=(const Chain& other)
{
    require_dim(other.dim_);
    for (const auto& [x, a] : other.terms_)
        add(x, a);
    return *this;
}

Chain& Chain::operator-=(const Chain& other)
{
    require_dim(other.dim_);
    for (const auto& [x, a] : other.terms_)
        add(x, -a);
    return *this;
}

Chain& Chain::operator*=(const Integer& scalar)
{
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [x, a] : terms_)
        a *= scalar;
    return *this;
}

Chain boundary(const Simplex& x, ChainMode mode)
{
    if (x.dim() == 0)
        throw DomainError("boundary of a 0-chain is undefined");
    Chain out(x.dim() - 1);
    for (int i = 0; i <= x.dim(); ++i) {
        Simplex f = face(x, i);
        if (mode == ChainMode::Normalized && is_degenerate(f))
            continue;
        out.add(f, (i % 2 == 0) ? 1 : -1);
    }
    return out;
}

Chain boundary(const Chain& c, ChainMode mode)
{
    if (c.dim() == 0)
        throw DomainError("boundary of a 0-chain is undefined");
    Chain out(c.dim() - 1);
    for (const auto& [x, a] : c.terms()) {
        for (int i = 0; i <= x.dim(); ++i) {
            Simplex f = face(x, i);
            if (mode == ChainMode::Normalized && is_degenerate(f))
                continue;
            out.add(f, (i % 2 == 0) ? a : Integer(-a));
        }
    }
    return out;
}

Integer inner(const Chain& c, const Simplex& x)
{
    return c.coefficient(x);
}

int incidence(const Simplex& tau, const Simplex& sigma)
{
    if (tau.dim() != sigma.dim() + 1)
        throw DomainError("incidence needs dim(tau) = dim(sigma) + 1");
    int n = 0;
    for (int i = 0; i <= tau.dim(); ++i) {
        if (face(tau, i) == sigma)
            n += (i % 2 == 0) ? 1 : -1;
    }
    return n;
}

} // namespace fkmorse
