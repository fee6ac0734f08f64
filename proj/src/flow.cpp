#include "fkmorse/flow.hpp"

#include "fkmorse/errors.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace fkmorse {

struct FlowContext::Memo {
    std::mutex mutex;
    std::unordered_map<Simplex, std::optional<Simplex>, SimplexHash> up;
    std::unordered_map<Simplex, std::optional<Simplex>, SimplexHash> down;
};

FlowContext::FlowContext(Scope scope, PairingFlags flags, ChainMode mode)
    : scope_(scope), flags_(flags), mode_(mode), memo_(std::make_shared<Memo>())
{
}

FlowContext::FlowContext(Matching matching, ChainMode mode)
    : scope_(matching.scope()), flags_(matching.flags()), mode_(mode)
{
    Verdict v = validate_matching(matching, scope_);
    if (!v.valid)
        throw InvariantViolation("flow context needs a Morse matching: " + v.issues.front().detail);
    matching_ = std::make_shared<const Matching>(std::move(matching));
}

FlowContext FlowContext::on_demand(Scope scope, const PairingFlags& flags, ChainMode mode)
{
    if (scope.max_dim < 1 || scope.max_length < 0)
        throw DomainError("on-demand flow context needs max_dim >= 1");
    return FlowContext(scope, flags, mode);
}

namespace {

std::string where(const Simplex& x)
{
    return to_text(x) + " (dim " + std::to_string(x.dim()) + ")";
}

} // namespace

std::optional<Simplex> FlowContext::face_partner(const Simplex& tau) const
{
    if (!scope_.contains(tau))
        throw TruncationError(where(tau) + " lies outside the flow scope");
    if (matching_) {
        const Simplex* s = matching_->face_partner(tau);
        return s ? std::optional<Simplex>(*s) : std::nullopt;
    }
    {
        std::lock_guard lock(memo_->mutex);
        if (auto it = memo_->down.find(tau); it != memo_->down.end())
            return it->second;
    }
    std::optional<Simplex> found;
    if (tau.dim() > 0) {
        std::vector<Simplex> faces;
        for (int i = 0; i <= tau.dim(); ++i)
            faces.push_back(face(tau, i));
        for (int i = 0; i <= tau.dim(); ++i) {
            const Simplex& f = faces[i];
            if (f.length() != tau.length() || std::count(faces.begin(), faces.end(), f) != 1)
                continue;
            if (steepness_pair(f, flags_) == tau) {
                if (found)
                    throw InvariantViolation(where(tau) + " is the steepness partner of both " + to_text(*found) +
                                             " and " + to_text(f));
                found = f;
            }
        }
    }
    std::lock_guard lock(memo_->mutex);
    memo_->down.emplace(tau, found);
    return found;
}

std::optional<Simplex> FlowContext::coface_partner(const Simplex& sigma) const
{
    if (sigma.dim() + 1 > scope_.max_dim || static_cast<int>(sigma.length()) > scope_.max_length)
        throw TruncationError("cofaces of " + where(sigma) + " lie outside the flow scope");
    if (matching_) {
        const Simplex* t = matching_->coface_partner(sigma);
        return t ? std::optional<Simplex>(*t) : std::nullopt;
    }
    {
        std::lock_guard lock(memo_->mutex);
        if (auto it = memo_->up.find(sigma); it != memo_->up.end())
            return it->second;
    }
    std::optional<Simplex> tau = steepness_pair(sigma, flags_);
    if (tau) {
        if (auto below = face_partner(sigma))
            throw InvariantViolation(where(sigma) + " is paired both below (with " + to_text(*below) +
                                     ") and above (with " + to_text(*tau) + ")");
        face_partner(*tau); // throws if tau is claimed twice
    }
    std::lock_guard lock(memo_->mutex);
    memo_->up.emplace(sigma, tau);
    return tau;
}

bool FlowContext::is_critical(const Simplex& x) const
{
    return !coface_partner(x) && !face_partner(x);
}

Chain apply_V(const FlowContext& ctx, const Chain& c)
{
    Chain out(c.dim() + 1);
    for (const auto& [sigma, a] : c.terms()) {
        if (ctx.mode() == ChainMode::Normalized && is_degenerate(sigma))
            continue;
        auto tau = ctx.coface_partner(sigma);
        if (!tau)
            continue;
        if (ctx.mode() == ChainMode::Normalized && is_degenerate(*tau))
            continue;
        out.add(*tau, -incidence(*tau, sigma) * a);
    }
    return out;
}

Chain apply_flow(const FlowContext& ctx, const Chain& c)
{
    Chain out = c;
    Chain vc = apply_V(ctx, c);
    if (!vc.empty())
        out += boundary(vc, ctx.mode());
    if (c.dim() > 0)
        out += apply_V(ctx, boundary(c, ctx.mode()));
    return out;
}

Stabilized stabilize(const FlowContext& ctx, const Chain& c)
{
    Chain cur = c;
    for (std::size_t it = 0; it < ctx.iteration_cap; ++it) {
        Chain next = apply_flow(ctx, cur);
        if (next == cur)
            return {std::move(cur), it};
        cur = std::move(next);
    }
    Chain last = apply_flow(ctx, cur);
    std::string orbit;
    for (const auto& [x, a] : last.terms())
        orbit += " " + a.str() + "*" + to_text(x);
    throw InvariantViolation("flow did not stabilize within " + std::to_string(ctx.iteration_cap) +
                             " iterations; last iterate:" + orbit);
}

Chain morse_boundary(const FlowContext& ctx, const Simplex& c)
{
    if (c.dim() == 0)
        return Chain(0);
    const Chain down_first = stabilize(ctx, boundary(c, ctx.mode())).chain;
    const Chain flow_first = boundary(stabilize(ctx, Chain::unit(c)).chain, ctx.mode());

    auto counts = [&ctx](const Simplex& x) {
        if (ctx.mode() == ChainMode::Normalized && is_degenerate(x))
            return false;
        return ctx.is_critical(x);
    };

    Chain out(c.dim() - 1);
    for (const auto& [x, a] : down_first.terms()) {
        if (counts(x))
            out.add(x, a);
    }
    for (const auto& [x, a] : flow_first.terms()) {
        if (counts(x) && out.coefficient(x) != a)
            throw InvariantViolation("Morse boundary of " + where(c) + " disagrees at " + to_text(x) + ": " +
                                     out.coefficient(x).str() + " vs " + a.str());
    }
    for (const auto& [x, a] : out.terms()) {
        if (flow_first.coefficient(x) != a)
            throw InvariantViolation("Morse boundary of " + where(c) + " disagrees at " + to_text(x) + ": " +
                                     a.str() + " vs " + flow_first.coefficient(x).str());
    }
    return out;
}

Integer morse_boundary_entry(const FlowContext& ctx, const Simplex& c, const Simplex& sigma)
{
    if (c.dim() != sigma.dim() + 1)
        throw DomainError("Morse boundary entry needs dim(c) = dim(sigma) + 1");
    if (!ctx.is_critical(c))
        throw DomainError(where(c) + " is not critical");
    if (!ctx.is_critical(sigma))
        throw DomainError(where(sigma) + " is not critical");
    return morse_boundary(ctx, c).coefficient(sigma);
}

Simplex expand(const NamedCell& cell)
{
    auto need = [](bool ok, const char* what) {
        if (!ok)
            throw DomainError(std::string("named cell parameter out of range: ") + what);
    };
    const int k = cell.k;
    switch (cell.kind) {
    case CellKind::Sigma:
    case CellKind::Tau: {
        need(k >= 0 && k <= kMaxDim, "index");
        if (k == 0)
            return Simplex::identity(0);
        if (k == 1)
            return Simplex(1, {1});
        std::vector<Letter> w;
        if (cell.kind == CellKind::Sigma) {
            for (int i = k; i >= 1; --i)
                w.push_back(static_cast<Letter>(i));
        } else {
            for (int i = k; i >= 3; --i)
                w.push_back(static_cast<Letter>(i));
            w.push_back(2);
            w.push_back(2);
        }
        return Simplex(k, std::move(w));
    }
    case CellKind::SigmaTilde:
    case CellKind::TauTilde: {
        need(k >= (cell.kind == CellKind::SigmaTilde ? 2 : 3), "tilde index");
        Simplex base = expand({cell.kind == CellKind::SigmaTilde ? CellKind::Sigma : CellKind::Tau, k});
        std::vector<Letter> w = base.word();
        std::swap(w[0], w[1]);
        return Simplex(k, std::move(w));
    }
    case CellKind::Beta: {
        need(k >= 1 && k + 1 <= kMaxDim && cell.s >= 1 && cell.s <= k, "beta");
        std::vector<Letter> w;
        for (int i = k + 1; i >= 1; --i) {
            if (i != cell.s)
                w.push_back(static_cast<Letter>(i));
        }
        return Simplex(k + 1, std::move(w));
    }
    case CellKind::YPower:
        need(k >= 0, "exponent");
        return Simplex(1, std::vector<Letter>(static_cast<std::size_t>(k), Letter{1}));
    case CellKind::Identity:
        need(k >= 0 && k <= kMaxDim, "dimension");
        return Simplex::identity(k);
    }
    throw DomainError("unknown named cell");
}

} // namespace fkmorse
