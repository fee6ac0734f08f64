#ifndef FKMORSE_PAIRING_HPP
#define FKMORSE_PAIRING_HPP

// Restricted steepness pairing on F+K and a Morse-matching validator.
//
// A pair {sigma < tau} joins a simplex with a coface of the same word length
// in which it occurs exactly once. The steepness rule pairs sigma with tau when
// tau is the lex-least same-length coface containing sigma regularly and sigma
// is the lex-greatest same-length face of tau.

#include "fkmorse/simplicial.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fkmorse {

// Which faces of tau must lie below sigma.
enum class FaceScope {
    All,     // every same-length face, regular or not (default)
    Regular  // only faces occurring once in tau
};

// Which cofaces of sigma must lie above tau.
enum class CofaceScope {
    Regular, // cofaces containing sigma exactly once (default)
    All      // every same-length coface containing sigma
};

enum class DegeneratePolicy {
    Critical, // degenerate cells never enter a pair but still block others
    Pairable  // degenerate cells are treated like any other cell
};

struct PairingFlags {
    FaceScope face_scope = FaceScope::All;
    CofaceScope coface_scope = CofaceScope::Regular;
    DegeneratePolicy degenerate = DegeneratePolicy::Critical;

    friend bool operator==(const PairingFlags&, const PairingFlags&) = default;
};

std::string to_string(FaceScope s);
std::string to_string(CofaceScope s);
std::string to_string(DegeneratePolicy p);

struct Scope {
    int max_dim = 0;
    int max_length = 0;

    bool contains(const Simplex& x) const
    {
        return x.dim() <= max_dim && static_cast<int>(x.length()) <= max_length;
    }

    friend bool operator==(const Scope&, const Scope&) = default;
};

struct RegularCoface {
    Simplex tau;
    int index;

    friend bool operator==(const RegularCoface&, const RegularCoface&) = default;
};

// Same-length (dim+1)-simplices containing sigma as a face at exactly one
// index, sorted lexicographically. Computed by inverting the generator face
// maps letter by letter.
std::vector<RegularCoface> regular_cofaces(const Simplex& sigma);

// Same as above; throws DomainError unless scope covers sigma's coface stratum.
std::vector<RegularCoface> regular_cofaces(const Simplex& sigma, const Scope& scope);

// Every same-length (dim+1)-simplex having sigma as a face, sorted.
std::vector<Simplex> same_length_cofaces(const Simplex& sigma);

// Conditions (1)-(3) of the steepness rule, ignoring the degenerate policy.
std::optional<Simplex> steepness_candidate(const Simplex& sigma, const PairingFlags& flags = {});

// The steepness partner of sigma, or nullopt when sigma is not the lower
// member of a pair.
std::optional<Simplex> steepness_pair(const Simplex& sigma, const PairingFlags& flags = {});
std::optional<Simplex> steepness_pair(const Simplex& sigma, const Scope& scope, const PairingFlags& flags = {});

struct MatchedPair {
    Simplex sigma;
    Simplex tau;

    StratumKey stratum() const { return stratum_of(sigma); }

    friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
    friend auto operator<=>(const MatchedPair&, const MatchedPair&) = default;
};

class Matching {
public:
    Matching() = default;
    Matching(Scope scope, PairingFlags flags, std::vector<MatchedPair> pairs);

    const Scope& scope() const { return scope_; }
    const PairingFlags& flags() const { return flags_; }
    const std::vector<MatchedPair>& pairs() const { return pairs_; }

    // tau with {sigma < tau}, if sigma is a lower member.
    const Simplex* coface_partner(const Simplex& sigma) const;
    // sigma with {sigma < tau}, if tau is an upper member.
    const Simplex* face_partner(const Simplex& tau) const;

    bool is_matched(const Simplex& x) const { return coface_partner(x) || face_partner(x); }

private:
    Scope scope_;
    PairingFlags flags_;
    std::vector<MatchedPair> pairs_;
    std::unordered_map<Simplex, std::size_t, SimplexHash> up_;
    std::unordered_map<Simplex, std::size_t, SimplexHash> down_;
};

struct CriticalCells {
    std::vector<Simplex> degenerate; // critical because degenerate (Critical policy)
    std::vector<Simplex> unmatched;  // everything else left unpaired
};

using CriticalReport = std::map<StratumKey, CriticalCells>;

struct BuildOptions {
    // Largest stratum the builder will walk before giving up.
    std::uint64_t max_stratum_cells = 20'000'000;
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct BuildResult {
    Matching matching;
    CriticalReport critical;
    // Pairs satisfying the steepness conditions that the degenerate policy
    // rejected. Diagnostic only.
    std::vector<MatchedPair> policy_rejected;
};

// Pairs every simplex of dimension < max_dim and length <= max_length with its
// steepness partner, then validates the result (throws InvariantViolation if
// the validator rejects it, ResourceLimitError if a stratum is too large).
BuildResult build_matching(int max_dim, int max_length, const PairingFlags& flags = {},
                           const BuildOptions& options = {});

enum class IssueKind { NotRegular, LengthMismatch, DimensionMismatch, Reused, Cycle };

std::string to_string(IssueKind k);

struct ValidationIssue {
    IssueKind kind;
    std::string detail;
};

struct Verdict {
    bool valid = true;
    std::vector<ValidationIssue> issues;
    // sigma_0, tau_0, sigma_1, tau_1, ..., sigma_0 when a V-path closes up.
    std::vector<Simplex> cycle;
    // Pairs never cross word lengths and faces never lengthen words, so
    // checking each (dim, length) stratum pair separately decides global
    // acyclicity and finiteness of V-paths.
    bool per_stratum_reduction = true;
    std::size_t strata_checked = 0;
};

// Checks regularity, injectivity and acyclicity. Throws DomainError if a pair
// lies outside scope.
Verdict validate_matching(const Matching& m, const Scope& scope);

} // namespace fkmorse

#endif
