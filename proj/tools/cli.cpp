#include "cli.hpp"

#include "fkmorse/errors.hpp"
#include "fkmorse/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fkmorse::cli {

namespace {

struct RunConfig {
    int max_dim = 0;
    int max_length = 0;
    std::string chain_mode = "unnormalized";
    std::string face_scope = "all";
    std::string coface_scope = "regular";
    std::string degenerate_policy = "critical";
    std::string format = "text";
    std::string output;
    std::uint64_t seed = 20261016;
    unsigned threads = 0;

    PairingFlags flags() const
    {
        return {parse_face_scope(face_scope), parse_coface_scope(coface_scope),
                parse_degenerate_policy(degenerate_policy)};
    }
    ChainMode mode() const { return parse_chain_mode(chain_mode); }
};

// A validator or self-check said no; the report has already been written.
struct Rejected {
    std::string why;
};

bool verbose()
{
    const char* v = std::getenv("FKMORSE_VERBOSE");
    return v && *v && std::string(v) != "0";
}

class Timer {
public:
    Timer(std::ostream& err, std::string what) : err_(err), what_(std::move(what)) {}
    ~Timer()
    {
        if (!verbose())
            return;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
        err_ << "[fkmorse] " << what_ << ": " << ms.count() << " ms\n";
    }

private:
    std::ostream& err_;
    std::string what_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed)
{
    for (const char* f : allowed) {
        if (cfg.format == f)
            return;
    }
    std::string list;
    for (const char* f : allowed)
        list += std::string(list.empty() ? "" : ", ") + f;
    throw ParseError("format '" + cfg.format + "' not available here (use " + list + ")");
}

// Scope large enough for the request; explicit bounds may only widen it and
// must not cut it.
Scope scope_for(const RunConfig& cfg, int need_dim, int need_length)
{
    Scope s{std::max(need_dim, 1), std::max(need_length, 1)};
    if (cfg.max_dim > 0) {
        if (cfg.max_dim < need_dim)
            throw TruncationError("--max-dim " + std::to_string(cfg.max_dim) + " is below the required " +
                                  std::to_string(need_dim));
        s.max_dim = cfg.max_dim;
    }
    if (cfg.max_length > 0) {
        if (cfg.max_length < need_length)
            throw TruncationError("--max-length " + std::to_string(cfg.max_length) + " is below the required " +
                                  std::to_string(need_length));
        s.max_length = cfg.max_length;
    }
    return s;
}

FlowContext make_context(const RunConfig& cfg, Scope s, std::ostream& err)
{
    Timer t(err, "matching (" + std::to_string(s.max_dim) + "," + std::to_string(s.max_length) + ")");
    BuildOptions opts;
    opts.threads = cfg.threads;
    BuildResult built = build_matching(s.max_dim, s.max_length, cfg.flags(), opts);
    return FlowContext(std::move(built.matching), cfg.mode());
}

std::string cmd_enumerate(const RunConfig& cfg, int dim, int length)
{
    require_format(cfg, {"text", "json", "csv"});
    StratumKey key(dim, length);
    std::vector<Simplex> cells = enumerate_stratum(key);
    std::size_t nondeg = 0;
    for (const auto& x : cells)
        nondeg += !is_degenerate(x);

    std::ostringstream out;
    if (cfg.format == "json") {
        Json list = Json::array();
        for (std::size_t i = 0; i < cells.size(); ++i)
            list.push_back(Json{{"rank", i}, {"simplex", to_json(cells[i])}, {"degenerate", is_degenerate(cells[i])}});
        Json j{{"stratum", Json{{"dim", dim}, {"length", length}}},
               {"count", cells.size()},
               {"nondegenerate", nondeg},
               {"cells", list}};
        out << j.dump(2) << '\n';
    } else if (cfg.format == "csv") {
        out << "rank,simplex,degenerate\n";
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << i << ',' << to_text(cells[i]) << ',' << (is_degenerate(cells[i]) ? "yes" : "no") << '\n';
    } else {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << i << '\t' << to_text(cells[i]) << '\t' << (is_degenerate(cells[i]) ? "degenerate" : "nondegenerate")
                << '\n';
        out << cells.size() << " words, " << nondeg << " nondegenerate\n";
    }
    return out.str();
}

std::string cmd_pair(const RunConfig& cfg, std::ostream& err)
{
    require_format(cfg, {"text", "json", "csv", "dot"});
    if (cfg.max_dim < 1 || cfg.max_length < 1)
        throw ParseError("pair needs --max-dim and --max-length of at least 1");
    BuildOptions opts;
    opts.threads = cfg.threads;
    BuildResult built = [&] {
        Timer t(err, "build_matching");
        return build_matching(cfg.max_dim, cfg.max_length, cfg.flags(), opts);
    }();
    const Matching& m = built.matching;

    if (cfg.format == "json")
        return to_json(m).dump(2) + "\n";
    if (cfg.format == "csv")
        return critical_csv(built.critical, m.scope());
    if (cfg.format == "dot")
        return matching_dot(m);

    std::ostringstream out;
    out << "scope max_dim " << m.scope().max_dim << ", max_length " << m.scope().max_length << "; face scope "
        << cfg.face_scope << ", coface scope " << cfg.coface_scope << ", degenerate policy " << cfg.degenerate_policy
        << '\n';
    for (const auto& p : m.pairs()) {
        StratumKey k = p.stratum();
        out << "(" << k.dim << "," << k.length << ")  " << to_text(p.sigma) << " < " << to_text(p.tau) << '\n';
    }
    for (const auto& [k, cells] : built.critical) {
        if (cells.degenerate.empty() && cells.unmatched.empty())
            continue;
        out << "critical (" << k.dim << "," << k.length << "):";
        for (const auto& x : cells.unmatched)
            out << ' ' << to_text(x);
        if (!cells.degenerate.empty())
            out << (cells.unmatched.empty() ? " " : "  + ") << cells.degenerate.size() << " degenerate";
        out << '\n';
    }
    out << m.pairs().size() << " pairs\n";
    return out.str();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string cmd_validate(const RunConfig& cfg, const std::string& path)
{
    require_format(cfg, {"text", "json"});
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("matching file: ") + e.what());
    }
    Matching m = matching_from_json(j);
    Verdict v = validate_matching(m, m.scope());

    std::string text;
    if (cfg.format == "json") {
        text = to_json(v).dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << (v.valid ? "valid" : "invalid") << ": " << m.pairs().size() << " pairs, " << v.strata_checked
            << " strata checked\n";
        for (const auto& i : v.issues)
            out << to_string(i.kind) << ": " << i.detail << '\n';
        if (!v.cycle.empty()) {
            out << "cycle:";
            for (const auto& x : v.cycle)
                out << ' ' << to_text(x);
            out << '\n';
        }
        text = out.str();
    }
    if (!v.valid)
        throw Rejected{text};
    return text;
}

std::string cmd_flow(const RunConfig& cfg, const std::string& chain_text, int dim, std::ostream& err)
{
    require_format(cfg, {"text", "json"});
    Chain c = parse_chain(chain_text, dim >= 0 ? std::optional<int>(dim) : std::nullopt);
    FlowContext ctx = make_context(cfg, scope_for(cfg, c.dim() + 1, static_cast<int>(c.max_length())), err);
    Stabilized s = [&] {
        Timer t(err, "stabilize");
        return stabilize(ctx, c);
    }();
    if (cfg.format == "json")
        return Json{{"input", to_json(c)}, {"stable", to_json(s.chain)}, {"iterations", s.iterations}}.dump(2) + "\n";
    return format_chain(s.chain) + "\n";
}

std::string cmd_morse(const RunConfig& cfg, int degree, std::ostream& err)
{
    require_format(cfg, {"text", "json", "csv"});
    if (degree < 0)
        throw ParseError("--degree must be nonnegative");
    Scope s = scope_for(cfg, degree + 1, cfg.max_length);
    FlowContext ctx = make_context(cfg, s, err);
    MorseSlice slice = [&] {
        Timer t(err, "morse slice");
        return morse_slice(ctx, degree, s.max_length);
    }();

    if (cfg.format == "json")
        return to_json(slice).dump(2) + "\n";
    if (cfg.format == "csv")
        return slice_csv(slice);

    std::ostringstream out;
    out << "morse boundary, degree " << degree << ", max length " << s.max_length << ", " << cfg.chain_mode
        << " chains\n";
    out << "columns:";
    for (const auto& x : slice.basis_lo)
        out << ' ' << to_text(x);
    out << '\n';
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < slice.basis_hi.size(); ++i) {
        out << to_text(slice.basis_hi[i]) << ':';
        for (std::size_t j = 0; j < slice.basis_lo.size(); ++j) {
            out << ' ' << slice.matrix(i, j).str();
            nonzero += !slice.matrix(i, j).is_zero();
        }
        out << '\n';
    }
    out << slice.basis_hi.size() << " rows x " << slice.basis_lo.size() << " columns, ";
    if (nonzero == 0)
        out << "all entries zero\n";
    else
        out << nonzero << " nonzero entries\n";
    return out.str();
}

std::string homology_text(const HomologyGroup& g)
{
    std::ostringstream out;
    out << "H_" << g.degree << " = ";
    bool any = false;
    if (g.betti > 0) {
        out << (g.betti == 1 ? "Z" : "Z^" + std::to_string(g.betti));
        any = true;
    }
    for (const auto& t : g.torsion) {
        out << (any ? " + " : "") << "Z/" << t.str();
        any = true;
    }
    if (!any)
        out << "0";
    return out.str();
}

std::string cmd_homology(const RunConfig& cfg, int degree, std::ostream& err)
{
    require_format(cfg, {"text", "json"});
    if (degree < 0)
        throw ParseError("--degree must be nonnegative");
    Scope s = scope_for(cfg, degree + 2, cfg.max_length);
    FlowContext ctx = make_context(cfg, s, err);
    Timer t(err, "homology");
    HomologyGroup g =
        homology_of_slices(morse_slice(ctx, degree, s.max_length), morse_slice(ctx, degree + 1, s.max_length));
    if (cfg.format == "json")
        return to_json(g, s.max_length).dump() + "\n";
    return homology_text(g) + "  (word length <= " + std::to_string(s.max_length) + ")\n";
}

std::string cmd_scan(const RunConfig& cfg, int degree, int from, int to, std::ostream& err)
{
    require_format(cfg, {"text", "json"});
    Timer t(err, "stability scan");
    StabilityReport r = stability_scan(degree, from, to, ScanOptions{cfg.flags(), cfg.mode()});
    if (cfg.format == "json")
        return to_json(r).dump(2) + "\n";
    std::ostringstream out;
    for (const auto& e : r.entries)
        out << "L=" << e.bound << "  " << homology_text(e.group) << '\n';
    if (r.stable_from)
        out << "stable from L=" << *r.stable_from << '\n';
    else
        out << "empty range\n";
    return out.str();
}

Simplex random_simplex(std::mt19937_64& rng, int min_dim, int max_dim, int max_length)
{
    int dim = std::uniform_int_distribution<int>(min_dim, max_dim)(rng);
    int len = std::uniform_int_distribution<int>(0, max_length)(rng);
    std::uniform_int_distribution<int> letter(1, dim);
    std::vector<Letter> w(static_cast<std::size_t>(len));
    for (auto& l : w)
        l = static_cast<Letter>(letter(rng));
    return Simplex(dim, std::move(w));
}

std::string cmd_selfcheck(const RunConfig& cfg, int samples, std::ostream& err)
{
    require_format(cfg, {"text", "json"});
    if (samples < 0)
        throw ParseError("--samples must be nonnegative");
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::string> failures;
    std::size_t checks = 0;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 20)
            failures.push_back(what);
    };

    {
        Timer t(err, "simplicial checks");
        for (int k = 0; k < samples; ++k) {
            Simplex x = random_simplex(rng, 1, 7, 7);
            const int n = x.dim();
            if (n >= 2)
                expect(boundary(boundary(x, cfg.mode()), cfg.mode()).empty(), "dd != 0 on " + to_text(x));
            for (int j = 0; j <= n; ++j) {
                Simplex s = degeneracy(x, j);
                expect(face(s, j) == x && face(s, j + 1) == x, "d s_j != id on " + to_text(x));
                expect(is_degenerate(s), "s_j x not degenerate for " + to_text(x));
            }
            for (int i = 0; n >= 2 && i <= n; ++i) {
                for (int j = i + 1; j <= n; ++j)
                    expect(face(face(x, j), i) == face(face(x, i), j - 1), "d_i d_j identity on " + to_text(x));
            }
        }
    }

    {
        Timer t(err, "flow checks");
        RunConfig small = cfg;
        small.max_dim = 0;
        small.max_length = 0;
        FlowContext ctx = make_context(small, Scope{5, 4}, err);
        for (int k = 0; k < std::max(samples / 20, 1); ++k) {
            Chain c(std::uniform_int_distribution<int>(1, 3)(rng));
            int terms = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int i = 0; i < terms; ++i) {
                Simplex x = random_simplex(rng, c.dim(), c.dim(), 4);
                c.add(x, std::uniform_int_distribution<int>(-3, 3)(rng));
            }
            Chain lhs = boundary(apply_flow(ctx, c), ctx.mode());
            Chain rhs = apply_flow(ctx, boundary(c, ctx.mode()));
            expect(lhs == rhs, "flow does not commute with the boundary on " + format_chain(c));
            expect(apply_V(ctx, apply_V(ctx, c)).empty(), "VV != 0 on " + format_chain(c));
            Chain st = stabilize(ctx, c).chain;
            expect(apply_flow(ctx, st) == st, "stable chain moves under the flow: " + format_chain(c));
        }
    }

    std::string text;
    if (cfg.format == "json") {
        text = Json{{"seed", cfg.seed}, {"checks", checks}, {"failures", failures}}.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "seed " << cfg.seed << ": " << checks << " checks, " << failures.size() << " failures\n";
        for (const auto& f : failures)
            out << "  " << f << '\n';
        text = out.str();
    }
    if (!failures.empty())
        throw Rejected{text};
    return text;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out)
{
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + cfg.output);
    f << text;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Discrete Morse theory on the free simplicial monoid over the minimal circle"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--max-dim", cfg.max_dim, "Largest simplex dimension in scope")->check(CLI::PositiveNumber);
    app.add_option("--max-length", cfg.max_length, "Largest word length in scope")->check(CLI::PositiveNumber);
    app.add_option("--chain-mode", cfg.chain_mode, "unnormalized|normalized")
        ->check(CLI::IsMember({"unnormalized", "normalized"}));
    app.add_option("--face-scope", cfg.face_scope, "all|regular")->check(CLI::IsMember({"all", "regular"}));
    app.add_option("--coface-scope", cfg.coface_scope, "regular|all")->check(CLI::IsMember({"regular", "all"}));
    app.add_option("--degenerate-policy", cfg.degenerate_policy, "critical|pairable")
        ->check(CLI::IsMember({"critical", "pairable"}));
    app.add_option("--format", cfg.format, "text|json|csv|dot")->check(CLI::IsMember({"text", "json", "csv", "dot"}));
    app.add_option("--output", cfg.output, "Write the result to this file");
    app.add_option("--seed", cfg.seed, "Seed for randomized checks");
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    int dim = -1, length = -1, degree = -1, samples = 2000, from = 0, to = -1;
    std::string chain_text, matching_path;

    auto* enumerate = app.add_subcommand("enumerate", "List one (dim, length) stratum");
    enumerate->add_option("--dim", dim)->required()->check(CLI::NonNegativeNumber);
    enumerate->add_option("--length", length)->required()->check(CLI::NonNegativeNumber);

    auto* pair = app.add_subcommand("pair", "Build and export the restricted steepness pairing");

    auto* validate = app.add_subcommand("validate", "Validate a matching exported as JSON");
    validate->add_option("--matching", matching_path)->required();

    auto* flow = app.add_subcommand("flow", "Stabilize a chain under the discrete flow");
    flow->add_option("--chain", chain_text)->required();
    flow->add_option("--dim", dim, "Dimension for bare words and e")->check(CLI::NonNegativeNumber);

    auto* morse = app.add_subcommand("morse", "Morse boundary matrix at one degree");
    morse->add_option("--degree", degree)->required();

    auto* homology = app.add_subcommand("homology", "Homology of the truncated Morse complex");
    homology->add_option("--degree", degree)->required();

    auto* scan = app.add_subcommand("scan", "Homology across a range of length bounds");
    scan->add_option("--degree", degree)->required();
    scan->add_option("--from", from)->required();
    scan->add_option("--to", to)->required();

    auto* selfcheck = app.add_subcommand("selfcheck", "Seeded randomized consistency checks");
    selfcheck->add_option("--samples", samples);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        std::string text;
        if (*enumerate)
            text = cmd_enumerate(cfg, dim, length);
        else if (*pair)
            text = cmd_pair(cfg, err);
        else if (*validate)
            text = cmd_validate(cfg, matching_path);
        else if (*flow)
            text = cmd_flow(cfg, chain_text, dim, err);
        else if (*morse)
            text = cmd_morse(cfg, degree, err);
        else if (*homology)
            text = cmd_homology(cfg, degree, err);
        else if (*scan)
            text = cmd_scan(cfg, degree, from, to, err);
        else if (*selfcheck)
            text = cmd_selfcheck(cfg, samples, err);
        emit(cfg, text, out);
        return kOk;
    } catch (const Rejected& r) {
        try {
            emit(cfg, r.why, out);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
        }
        return kRejected;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const TruncationError& e) {
        err << "scope error: " << e.what() << '\n';
        return kScope;
    } catch (const ResourceLimitError& e) {
        err << "scope error: " << e.what() << '\n';
        return kScope;
    } catch (const InvariantViolation& e) {
        err << "invariant violated: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace fkmorse::cli
