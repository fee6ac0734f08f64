#include "fkmorse/pairing.hpp"

#include "fkmorse/errors.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

namespace fkmorse {

std::string to_string(FaceScope s)
{
    return s == FaceScope::All ? "all" : "regular";
}

std::string to_string(CofaceScope s)
{
    return s == CofaceScope::Regular ? "regular" : "all";
}

std::string to_string(DegeneratePolicy p)
{
    return p == DegeneratePolicy::Critical ? "critical" : "pairable";
}

std::string to_string(IssueKind k)
{
    switch (k) {
    case IssueKind::NotRegular:
        return "not-regular";
    case IssueKind::LengthMismatch:
        return "length-mismatch";
    case IssueKind::DimensionMismatch:
        return "dimension-mismatch";
    case IssueKind::Reused:
        return "reused";
    case IssueKind::Cycle:
        return "cycle";
    }
    return "?";
}

namespace {

std::string stratum_name(StratumKey k)
{
    return "(" + std::to_string(k.dim) + "," + std::to_string(k.length) + ")";
}

std::vector<Simplex> all_faces(const Simplex& x)
{
    std::vector<Simplex> out;
    out.reserve(static_cast<std::size_t>(x.dim()) + 1);
    for (int i = 0; i <= x.dim(); ++i)
        out.push_back(face(x, i));
    return out;
}

// Every same-length (dim+1)-word tau with d_i(tau) == sigma for some i.
// A letter k of sigma lifts through d_i to alpha_k when i <= n+1-k and to
// alpha_{k+1} when i >= n+1-k, where n = dim(sigma).
std::set<Simplex> lift_candidates(const Simplex& sigma)
{
    const int n = sigma.dim();
    if (n + 1 > kMaxDim)
        throw DomainError("dimension limit reached");
    std::set<Simplex> out;
    const auto& w = sigma.word();
    std::vector<Letter> base(w.size());
    std::vector<std::size_t> branching;
    for (int i = 0; i <= n + 1; ++i) {
        branching.clear();
        for (std::size_t p = 0; p < w.size(); ++p) {
            const int k = w[p];
            const bool keep = i <= n + 1 - k;
            const bool raise = i >= n + 1 - k;
            base[p] = static_cast<Letter>(keep ? k : k + 1);
            if (keep && raise)
                branching.push_back(p);
        }
        if (branching.size() > 24)
            throw ResourceLimitError("too many coface lifts for " + to_text(sigma));
        const std::uint32_t combos = 1u << branching.size();
        for (std::uint32_t mask = 0; mask < combos; ++mask) {
            std::vector<Letter> t = base;
            for (std::size_t b = 0; b < branching.size(); ++b) {
                if (mask & (1u << b))
                    ++t[branching[b]];
            }
            out.emplace(n + 1, std::move(t));
        }
    }
    return out;
}

void require_coface_scope(const Simplex& sigma, const Scope& scope)
{
    if (sigma.dim() + 1 > scope.max_dim || static_cast<int>(sigma.length()) > scope.max_length)
        throw DomainError("scope (" + std::to_string(scope.max_dim) + "," + std::to_string(scope.max_length) +
                          ") does not cover the cofaces of " + to_text(sigma) + " in dimension " +
                          std::to_string(sigma.dim()));
}

bool admitted(const Simplex& x, DegeneratePolicy policy)
{
    return policy == DegeneratePolicy::Pairable || !is_degenerate(x);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace

std::vector<RegularCoface> regular_cofaces(const Simplex& sigma)
{
    std::vector<RegularCoface> out;
    for (const Simplex& tau : lift_candidates(sigma)) {
        int hits = 0;
        int index = -1;
        for (int i = 0; i <= tau.dim() && hits < 2; ++i) {
            if (face(tau, i) == sigma) {
                ++hits;
                index = i;
            }
        }
        if (hits == 1)
            out.push_back({tau, index});
    }
    return out;
}

std::vector<RegularCoface> regular_cofaces(const Simplex& sigma, const Scope& scope)
{
    require_coface_scope(sigma, scope);
    return regular_cofaces(sigma);
}

std::vector<Simplex> same_length_cofaces(const Simplex& sigma)
{
    auto s = lift_candidates(sigma);
    return {s.begin(), s.end()};
}

std::optional<Simplex> steepness_candidate(const Simplex& sigma, const PairingFlags& flags)
{
    auto cofaces = regular_cofaces(sigma);
    if (cofaces.empty())
        return std::nullopt;
    const RegularCoface& best = cofaces.front();
    if (flags.coface_scope == CofaceScope::All) {
        // lift_candidates is sorted, and best is one of them.
        if (same_length_cofaces(sigma).front() != best.tau)
            return std::nullopt;
    }
    const auto faces = all_faces(best.tau);
    for (int j = 0; j <= best.tau.dim(); ++j) {
        if (j == best.index)
            continue;
        const Simplex& f = faces[j];
        if (f.length() != sigma.length())
            continue;
        if (flags.face_scope == FaceScope::Regular && std::count(faces.begin(), faces.end(), f) != 1)
            continue;
        if (!(f < sigma))
            return std::nullopt;
    }
    return best.tau;
}

std::optional<Simplex> steepness_pair(const Simplex& sigma, const PairingFlags& flags)
{
    if (!admitted(sigma, flags.degenerate))
        return std::nullopt;
    auto tau = steepness_candidate(sigma, flags);
    if (tau && !admitted(*tau, flags.degenerate))
        return std::nullopt;
    return tau;
}

std::optional<Simplex> steepness_pair(const Simplex& sigma, const Scope& scope, const PairingFlags& flags)
{
    require_coface_scope(sigma, scope);
    return steepness_pair(sigma, flags);
}

Matching::Matching(Scope scope, PairingFlags flags, std::vector<MatchedPair> pairs)
    : scope_(scope), flags_(flags), pairs_(std::move(pairs))
{
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        up_.try_emplace(pairs_[i].sigma, i);
        down_.try_emplace(pairs_[i].tau, i);
    }
}

const Simplex* Matching::coface_partner(const Simplex& sigma) const
{
    auto it = up_.find(sigma);
    return it == up_.end() ? nullptr : &pairs_[it->second].tau;
}

const Simplex* Matching::face_partner(const Simplex& tau) const
{
    auto it = down_.find(tau);
    return it == down_.end() ? nullptr : &pairs_[it->second].sigma;
}

BuildResult build_matching(int max_dim, int max_length, const PairingFlags& flags, const BuildOptions& options)
{
    if (max_dim < 1 || max_length < 1)
        throw DomainError("build_matching needs max_dim >= 1 and max_length >= 1");
    if (max_dim > kMaxDim)
        throw DomainError("max_dim out of range");

    std::vector<StratumKey> all;
    for (int n = 0; n <= max_dim; ++n) {
        for (int l = 0; l <= max_length; ++l) {
            StratumKey key(n, l);
            std::uint64_t size = 0;
            try {
                size = stratum_size(key);
            } catch (const ResourceLimitError&) {
                size = UINT64_MAX;
            }
            if (size > options.max_stratum_cells)
                throw ResourceLimitError("stratum " + stratum_name(key) + " has more than " +
                                         std::to_string(options.max_stratum_cells) + " cells");
            all.push_back(key);
        }
    }

    std::vector<StratumKey> lower;
    std::copy_if(all.begin(), all.end(), std::back_inserter(lower),
                 [max_dim](StratumKey k) { return k.dim < max_dim; });

    std::vector<std::vector<MatchedPair>> found(lower.size());
    std::vector<std::vector<MatchedPair>> rejected(lower.size());
    parallel_for(lower.size(), options.threads, [&](std::size_t t) {
        for_each_in_stratum(lower[t], [&](const Simplex& sigma) {
            if (flags.degenerate == DegeneratePolicy::Critical) {
                auto tau = steepness_candidate(sigma, flags);
                if (!tau)
                    return true;
                if (!is_degenerate(sigma) && !is_degenerate(*tau))
                    found[t].push_back({sigma, *tau});
                else
                    rejected[t].push_back({sigma, *tau});
            } else if (auto tau = steepness_pair(sigma, flags)) {
                found[t].push_back({sigma, *tau});
            }
            return true;
        });
    });

    std::vector<MatchedPair> pairs;
    std::vector<MatchedPair> policy_rejected;
    for (std::size_t t = 0; t < lower.size(); ++t) {
        pairs.insert(pairs.end(), found[t].begin(), found[t].end());
        policy_rejected.insert(policy_rejected.end(), rejected[t].begin(), rejected[t].end());
    }

    Matching matching(Scope{max_dim, max_length}, flags, std::move(pairs));
    Verdict verdict = validate_matching(matching, matching.scope());
    if (!verdict.valid) {
        std::string why = verdict.issues.empty() ? "unknown" : verdict.issues.front().detail;
        throw InvariantViolation("restricted steepness pairing failed validation: " + why);
    }

    std::vector<CriticalCells> cells(all.size());
    parallel_for(all.size(), options.threads, [&](std::size_t t) {
        for_each_in_stratum(all[t], [&](const Simplex& x) {
            if (matching.is_matched(x))
                return true;
            if (flags.degenerate == DegeneratePolicy::Critical && is_degenerate(x))
                cells[t].degenerate.push_back(x);
            else
                cells[t].unmatched.push_back(x);
            return true;
        });
    });

    BuildResult result{std::move(matching), {}, std::move(policy_rejected)};
    for (std::size_t t = 0; t < all.size(); ++t)
        result.critical.emplace(all[t], std::move(cells[t]));
    return result;
}

Verdict validate_matching(const Matching& m, const Scope& scope)
{
    Verdict v;
    auto flag = [&v](IssueKind kind, std::string detail) {
        v.valid = false;
        v.issues.push_back({kind, std::move(detail)});
    };

    for (const auto& p : m.pairs()) {
        if (!scope.contains(p.sigma) || !scope.contains(p.tau))
            throw DomainError("pair {" + to_text(p.sigma) + " < " + to_text(p.tau) + "} lies outside scope");
    }

    std::unordered_map<Simplex, int, SimplexHash> uses;
    for (const auto& p : m.pairs()) {
        ++uses[p.sigma];
        ++uses[p.tau];
        const std::string name = "{" + to_text(p.sigma) + " < " + to_text(p.tau) + "}";
        if (p.tau.dim() != p.sigma.dim() + 1) {
            flag(IssueKind::DimensionMismatch, name + ": dimensions " + std::to_string(p.sigma.dim()) + " and " +
                                                   std::to_string(p.tau.dim()));
            continue;
        }
        if (p.tau.length() != p.sigma.length())
            flag(IssueKind::LengthMismatch, name + ": word lengths differ");
        int hits = 0;
        for (int i = 0; i <= p.tau.dim(); ++i)
            hits += face(p.tau, i) == p.sigma;
        if (hits != 1)
            flag(IssueKind::NotRegular, name + ": sigma occurs " + std::to_string(hits) + " times among the faces");
    }
    std::vector<std::pair<Simplex, int>> reused;
    for (const auto& [x, n] : uses) {
        if (n > 1)
            reused.emplace_back(x, n);
    }
    std::sort(reused.begin(), reused.end());
    for (const auto& [x, n] : reused)
        flag(IssueKind::Reused, to_text(x) + " (dim " + std::to_string(x.dim()) + ") occurs in " +
                                    std::to_string(n) + " pairs");

    // V-paths sigma_0 < tau_0 > sigma_1 < tau_1 > ... stay inside one stratum
    // pair; a node per matched pair, an edge p -> q when sigma_q is another
    // same-length face of tau_p.
    std::map<StratumKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < m.pairs().size(); ++i) {
        const auto& p = m.pairs()[i];
        if (p.tau.dim() == p.sigma.dim() + 1 && p.tau.length() == p.sigma.length())
            groups[p.stratum()].push_back(i);
    }
    for (const auto& [key, members] : groups) {
        ++v.strata_checked;
        const std::size_t count = members.size();
        std::unordered_map<Simplex, std::size_t, SimplexHash> by_sigma;
        for (std::size_t a = 0; a < count; ++a)
            by_sigma.try_emplace(m.pairs()[members[a]].sigma, a);

        std::vector<std::vector<std::size_t>> next(count);
        std::vector<std::size_t> indegree(count, 0);
        for (std::size_t a = 0; a < count; ++a) {
            const auto& p = m.pairs()[members[a]];
            std::set<std::size_t> targets;
            for (int i = 0; i <= p.tau.dim(); ++i) {
                Simplex f = face(p.tau, i);
                if (f.length() != p.sigma.length() || f == p.sigma)
                    continue;
                if (auto it = by_sigma.find(f); it != by_sigma.end())
                    targets.insert(it->second);
            }
            for (std::size_t b : targets) {
                next[a].push_back(b);
                ++indegree[b];
            }
        }

        // Kahn's algorithm
        std::vector<std::size_t> stack;
        for (std::size_t a = 0; a < count; ++a) {
            if (indegree[a] == 0)
                stack.push_back(a);
        }
        std::size_t removed = 0;
        while (!stack.empty()) {
            std::size_t a = stack.back();
            stack.pop_back();
            ++removed;
            for (std::size_t b : next[a]) {
                if (--indegree[b] == 0)
                    stack.push_back(b);
            }
        }
        if (removed == count)
            continue;

        // Every leftover node has a leftover predecessor, so walking backwards
        // along leftover in-edges must revisit a node.
        std::vector<std::vector<std::size_t>> prev(count);
        for (std::size_t a = 0; a < count; ++a) {
            if (indegree[a] == 0)
                continue;
            for (std::size_t b : next[a]) {
                if (indegree[b] > 0)
                    prev[b].push_back(a);
            }
        }
        std::size_t start = 0;
        while (indegree[start] == 0)
            ++start;
        std::vector<std::size_t> walk;
        std::vector<int> seen(count, -1);
        std::size_t cur = start;
        while (seen[cur] < 0) {
            seen[cur] = static_cast<int>(walk.size());
            walk.push_back(cur);
            cur = prev[cur].front();
        }
        std::vector<std::size_t> loop(walk.begin() + seen[cur], walk.end());
        std::reverse(loop.begin(), loop.end());
        if (v.cycle.empty()) {
            for (std::size_t a : loop) {
                v.cycle.push_back(m.pairs()[members[a]].sigma);
                v.cycle.push_back(m.pairs()[members[a]].tau);
            }
            v.cycle.push_back(m.pairs()[members[loop.front()]].sigma);
        }
        flag(IssueKind::Cycle, "closed V-path of " + std::to_string(loop.size()) + " pairs in stratum " +
                                   stratum_name(key));
    }
    return v;
}

} // namespace fkmorse
