#ifndef FKMORSE_FLOW_HPP
#define FKMORSE_FLOW_HPP

// Discrete vector field V of a Morse matching, the flow id + dV + Vd, its
// stabilization, and the Morse boundary between critical cells.

#include "fkmorse/chain.hpp"
#include "fkmorse/pairing.hpp"

#include <memory>
#include <optional>

namespace fkmorse {

class FlowContext {
public:
    // Uses a prebuilt matching. Validates it first; throws InvariantViolation
    // if it is not a Morse matching.
    explicit FlowContext(Matching matching, ChainMode mode = ChainMode::Unnormalized);

    // Evaluates the restricted steepness pairing cell by cell, memoized. Meant
    // for scopes too large to materialize; every lookup still cross-checks
    // that no cell lands in two pairs.
    static FlowContext on_demand(Scope scope, const PairingFlags& flags = {},
                                 ChainMode mode = ChainMode::Unnormalized);

    const Scope& scope() const { return scope_; }
    const PairingFlags& flags() const { return flags_; }
    ChainMode mode() const { return mode_; }
    bool materialized() const { return matching_ != nullptr; }

    // Throws TruncationError when the cofaces of sigma fall outside scope.
    std::optional<Simplex> coface_partner(const Simplex& sigma) const;
    // Throws TruncationError when tau falls outside scope.
    std::optional<Simplex> face_partner(const Simplex& tau) const;
    bool is_critical(const Simplex& x) const;

    std::size_t iteration_cap = 10'000;

private:
    struct Memo;

    FlowContext(Scope scope, PairingFlags flags, ChainMode mode);

    Scope scope_;
    PairingFlags flags_;
    ChainMode mode_;
    std::shared_ptr<const Matching> matching_;
    std::shared_ptr<Memo> memo_;
};

Chain apply_V(const FlowContext& ctx, const Chain& c);

Chain apply_flow(const FlowContext& ctx, const Chain& c);

struct Stabilized {
    Chain chain;
    std::size_t iterations = 0;
};

// Iterates the flow to its fixed point. Throws InvariantViolation (carrying
// the last iterates) if ctx.iteration_cap is reached.
Stabilized stabilize(const FlowContext& ctx, const Chain& c);

// The Morse boundary of a critical cell, as a combination of critical cells
// one dimension down. Computed as Phi^inf(dc) and cross-checked against
// d(Phi^inf c) on every critical cell; a mismatch throws InvariantViolation.
Chain morse_boundary(const FlowContext& ctx, const Simplex& c);

// <morse boundary of c, sigma>. Both cells must be critical.
Integer morse_boundary_entry(const FlowContext& ctx, const Simplex& c, const Simplex& sigma);

enum class CellKind { Sigma, Tau, SigmaTilde, TauTilde, Beta, YPower, Identity };

// Named cells: sigma_k, tau_k, their transposed variants, beta_s^(k+1)
// (sigma_{k+1} with alpha_s removed), y^r and e_n.
struct NamedCell {
    CellKind kind;
    int k = 0; // sigma/tau index, beta's k, y exponent, identity dimension
    int s = 0; // beta only

    static NamedCell sigma(int k) { return {CellKind::Sigma, k}; }
    static NamedCell tau(int k) { return {CellKind::Tau, k}; }
    static NamedCell sigma_tilde(int r) { return {CellKind::SigmaTilde, r}; }
    static NamedCell tau_tilde(int r) { return {CellKind::TauTilde, r}; }
    static NamedCell beta(int k, int s) { return {CellKind::Beta, k, s}; }
    static NamedCell y_power(int r) { return {CellKind::YPower, r}; }
    static NamedCell identity(int n) { return {CellKind::Identity, n}; }
};

Simplex expand(const NamedCell& cell);

} // namespace fkmorse

#endif
