#include "fkmorse/io.hpp"

#include "fkmorse/errors.hpp"

#include <cctype>
#include <limits>
#include <set>
#include <sstream>
#include <variant>

namespace fkmorse {

namespace {

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

int int_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_number_integer())
        throw ParseError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

} // namespace

Json to_json(const Simplex& x)
{
    Json word = Json::array();
    for (Letter l : x.word())
        word.push_back(int(l));
    return Json{{"dim", x.dim()}, {"word", word}};
}

Simplex simplex_from_json(const Json& j)
{
    const int dim = int_field(j, "dim");
    const Json& w = field(j, "word");
    if (!w.is_array())
        throw ParseError("'word' must be an array");
    std::vector<Letter> word;
    for (const Json& l : w) {
        if (!l.is_number_integer() || l.get<long long>() < 1 || l.get<long long>() > kMaxDim)
            throw ParseError("word letters must be integers in 1.." + std::to_string(kMaxDim));
        word.push_back(static_cast<Letter>(l.get<int>()));
    }
    try {
        return Simplex(dim, std::move(word));
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

Json to_json(const Integer& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return Json(v.convert_to<std::int64_t>());
    return Json(v.str());
}

Integer integer_from_json(const Json& j)
{
    if (j.is_number_integer())
        return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (start == s.size() || !std::all_of(s.begin() + start, s.end(), [](unsigned char c) { return std::isdigit(c); }))
            throw ParseError("bad integer string '" + s + "'");
        return Integer(s);
    }
    throw ParseError("coefficient must be an integer or a decimal string");
}

Json to_json(const Chain& c)
{
    Json terms = Json::array();
    for (const auto& [x, a] : c.terms()) {
        Json w = to_json(x).at("word");
        terms.push_back(Json{{"word", w}, {"coef", to_json(a)}});
    }
    return Json{{"dim", c.dim()}, {"terms", terms}};
}

Chain chain_from_json(const Json& j)
{
    const int dim = int_field(j, "dim");
    const Json& terms = field(j, "terms");
    if (!terms.is_array())
        throw ParseError("'terms' must be an array");
    Chain c(dim);
    std::set<Simplex> seen;
    for (const Json& t : terms) {
        Simplex x = simplex_from_json(Json{{"dim", dim}, {"word", field(t, "word")}});
        if (!seen.insert(x).second)
            throw ParseError("repeated term " + to_text(x));
        Integer a = integer_from_json(field(t, "coef"));
        if (a == 0)
            throw ParseError("zero coefficient on " + to_text(x));
        c.add(x, a);
    }
    return c;
}

Json to_json(const PairingFlags& f)
{
    return Json{{"face_scope", to_string(f.face_scope)},
                {"coface_scope", to_string(f.coface_scope)},
                {"degenerate_policy", to_string(f.degenerate)}};
}

PairingFlags flags_from_json(const Json& j)
{
    auto str = [&j](const char* key) {
        const Json& v = field(j, key);
        if (!v.is_string())
            throw ParseError(std::string("field '") + key + "' must be a string");
        return v.get<std::string>();
    };
    PairingFlags f;
    f.face_scope = parse_face_scope(str("face_scope"));
    f.coface_scope = parse_coface_scope(str("coface_scope"));
    f.degenerate = parse_degenerate_policy(str("degenerate_policy"));
    return f;
}

Json to_json(const Matching& m)
{
    Json pairs = Json::array();
    for (const auto& p : m.pairs()) {
        StratumKey k = p.stratum();
        pairs.push_back(Json{{"sigma", to_json(p.sigma)},
                             {"tau", to_json(p.tau)},
                             {"stratum", Json{{"dim", k.dim}, {"length", k.length}}}});
    }
    return Json{{"scope", Json{{"max_dim", m.scope().max_dim}, {"max_length", m.scope().max_length}}},
                {"flags", to_json(m.flags())},
                {"pairs", pairs}};
}

Matching matching_from_json(const Json& j)
{
    const Json& s = field(j, "scope");
    Scope scope{int_field(s, "max_dim"), int_field(s, "max_length")};
    PairingFlags flags = j.contains("flags") ? flags_from_json(j.at("flags")) : PairingFlags{};
    const Json& ps = field(j, "pairs");
    if (!ps.is_array())
        throw ParseError("'pairs' must be an array");
    std::vector<MatchedPair> pairs;
    for (const Json& p : ps) {
        MatchedPair mp{simplex_from_json(field(p, "sigma")), simplex_from_json(field(p, "tau"))};
        if (p.contains("stratum")) {
            const Json& k = p.at("stratum");
            if (StratumKey(int_field(k, "dim"), int_field(k, "length")) != mp.stratum())
                throw ParseError("stratum field disagrees with sigma " + to_text(mp.sigma));
        }
        pairs.push_back(std::move(mp));
    }
    return Matching(scope, flags, std::move(pairs));
}

Json to_json(const Verdict& v)
{
    Json issues = Json::array();
    for (const auto& i : v.issues)
        issues.push_back(Json{{"kind", to_string(i.kind)}, {"detail", i.detail}});
    Json cycle = Json::array();
    for (const auto& x : v.cycle)
        cycle.push_back(to_json(x));
    return Json{{"valid", v.valid},
                {"strata_checked", v.strata_checked},
                {"per_stratum_reduction", v.per_stratum_reduction},
                {"issues", issues},
                {"cycle", cycle}};
}

Json to_json(const MorseSlice& s)
{
    Json rows = Json::array();
    Json cols = Json::array();
    for (const auto& x : s.basis_hi)
        rows.push_back(to_json(x));
    for (const auto& x : s.basis_lo)
        cols.push_back(to_json(x));
    Json matrix = Json::array();
    for (std::size_t i = 0; i < s.matrix.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < s.matrix.cols(); ++j)
            row.push_back(to_json(s.matrix(i, j)));
        matrix.push_back(row);
    }
    return Json{{"degree", s.degree},
                {"scope", Json{{"max_dim", s.scope.max_dim}, {"max_length", s.scope.max_length}}},
                {"rows", rows},
                {"cols", cols},
                {"matrix", matrix}};
}

MorseSlice slice_from_json(const Json& j)
{
    MorseSlice s;
    s.degree = int_field(j, "degree");
    const Json& sc = field(j, "scope");
    s.scope = Scope{int_field(sc, "max_dim"), int_field(sc, "max_length")};
    for (const Json& x : field(j, "rows"))
        s.basis_hi.push_back(simplex_from_json(x));
    for (const Json& x : field(j, "cols"))
        s.basis_lo.push_back(simplex_from_json(x));
    const Json& m = field(j, "matrix");
    if (!m.is_array() || m.size() != s.basis_hi.size())
        throw ParseError("matrix row count does not match rows");
    s.matrix = IntMatrix(s.basis_hi.size(), s.basis_lo.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i].is_array() || m[i].size() != s.basis_lo.size())
            throw ParseError("matrix row " + std::to_string(i) + " does not match cols");
        for (std::size_t c = 0; c < m[i].size(); ++c)
            s.matrix(i, c) = integer_from_json(m[i][c]);
    }
    return s;
}

std::string slice_csv(const MorseSlice& s)
{
    std::ostringstream out;
    out << "cell";
    for (const auto& x : s.basis_lo)
        out << ',' << to_text(x);
    out << '\n';
    for (std::size_t i = 0; i < s.basis_hi.size(); ++i) {
        out << to_text(s.basis_hi[i]);
        for (std::size_t j = 0; j < s.basis_lo.size(); ++j)
            out << ',' << s.matrix(i, j).str();
        out << '\n';
    }
    return out.str();
}

Json to_json(const HomologyGroup& g, int max_length)
{
    Json torsion = Json::array();
    for (const auto& t : g.torsion)
        torsion.push_back(to_json(t));
    return Json{{"degree", g.degree}, {"scope", Json{{"max_length", max_length}}}, {"betti", g.betti}, {"torsion", torsion}};
}

Json to_json(const StabilityReport& r)
{
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back(to_json(e.group, e.bound));
    return Json{{"degree", r.degree},
                {"entries", entries},
                {"stable_from", r.stable_from ? Json(*r.stable_from) : Json(nullptr)}};
}

std::string critical_csv(const CriticalReport& report, const Scope& scope)
{
    std::ostringstream out;
    out << "dim,length,simplex,degenerate,reason\n";
    for (const auto& [key, cells] : report) {
        // Merge the two lists back into lex order.
        std::vector<std::pair<Simplex, bool>> rows;
        for (const auto& x : cells.degenerate)
            rows.emplace_back(x, true);
        for (const auto& x : cells.unmatched)
            rows.emplace_back(x, false);
        std::sort(rows.begin(), rows.end());
        for (const auto& [x, by_policy] : rows) {
            const char* reason = by_policy ? "degenerate" : key.dim == scope.max_dim ? "top-of-scope" : "unmatched";
            out << key.dim << ',' << key.length << ',' << to_text(x) << ',' << (is_degenerate(x) ? "yes" : "no")
                << ',' << reason << '\n';
        }
    }
    return out.str();
}

std::string matching_dot(const Matching& m)
{
    auto node = [](const Simplex& x) { return "\"" + std::to_string(x.dim()) + ":" + to_text(x) + "\""; };
    std::ostringstream out;
    out << "digraph matching {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
    const Scope& s = m.scope();
    for (int n = 0; n < s.max_dim; ++n) {
        for (int l = 0; l <= s.max_length; ++l) {
            out << "  subgraph \"cluster_" << n << '_' << l << "\" {\n";
            out << "    label=\"stratum (" << n << "," << l << ")\";\n";
            for_each_in_stratum(StratumKey(n, l), [&](const Simplex& x) {
                out << "    " << node(x) << (is_degenerate(x) ? " [style=dashed]" : "") << ";\n";
                return true;
            });
            for_each_in_stratum(StratumKey(n + 1, l), [&](const Simplex& tau) {
                out << "    " << node(tau) << (is_degenerate(tau) ? " [style=dashed]" : "") << ";\n";
                const Simplex* partner = m.face_partner(tau);
                std::map<Simplex, int> faces;
                for (int i = 0; i <= tau.dim(); ++i) {
                    Simplex f = face(tau, i);
                    if (f.length() == tau.length())
                        ++faces[f];
                }
                for (const auto& [f, count] : faces) {
                    std::string label = count > 1 ? " [label=\"x" + std::to_string(count) + "\"]" : "";
                    if (partner && *partner == f)
                        out << "    " << node(f) << " -> " << node(tau) << " [color=red, penwidth=2];\n";
                    else
                        out << "    " << node(tau) << " -> " << node(f) << label << ";\n";
                }
                return true;
            });
            out << "  }\n";
        }
    }
    out << "}\n";
    return out.str();
}

FaceScope parse_face_scope(std::string_view s)
{
    if (s == "all")
        return FaceScope::All;
    if (s == "regular")
        return FaceScope::Regular;
    throw ParseError("face scope must be all or regular, got '" + std::string(s) + "'");
}

CofaceScope parse_coface_scope(std::string_view s)
{
    if (s == "regular")
        return CofaceScope::Regular;
    if (s == "all")
        return CofaceScope::All;
    throw ParseError("coface scope must be regular or all, got '" + std::string(s) + "'");
}

DegeneratePolicy parse_degenerate_policy(std::string_view s)
{
    if (s == "critical")
        return DegeneratePolicy::Critical;
    if (s == "pairable")
        return DegeneratePolicy::Pairable;
    throw ParseError("degenerate policy must be critical or pairable, got '" + std::string(s) + "'");
}

ChainMode parse_chain_mode(std::string_view s)
{
    if (s == "unnormalized")
        return ChainMode::Unnormalized;
    if (s == "normalized")
        return ChainMode::Normalized;
    throw ParseError("chain mode must be unnormalized or normalized, got '" + std::string(s) + "'");
}

std::string to_string(ChainMode m)
{
    return m == ChainMode::Unnormalized ? "unnormalized" : "normalized";
}

namespace {

// A parsed cell whose dimension may still be open (bare words and e).
struct PendingWord {
    std::string text;
    int max_letter = 0;
};

using Atom = std::variant<Simplex, PendingWord>;

class ChainParser {
public:
    explicit ChainParser(std::string_view text) : text_(text) {}

    std::vector<std::pair<Integer, Atom>> parse()
    {
        std::vector<std::pair<Integer, Atom>> terms;
        skip_space();
        if (at_end())
            fail("empty chain");
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = peek() == '-';
            ++pos_;
        }
        for (;;) {
            auto [coef, atom] = term();
            terms.emplace_back(negative ? Integer(-coef) : coef, std::move(atom));
            skip_space();
            if (at_end())
                break;
            if (peek() != '+' && peek() != '-')
                fail("expected + or -");
            negative = peek() == '-';
            ++pos_;
        }
        return terms;
    }

private:
    std::pair<Integer, Atom> term()
    {
        skip_space();
        Integer coef = 1;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            coef = Integer(digits());
            skip_space();
            if (!at_end() && peek() == '*') {
                ++pos_;
            } else if (text_.substr(pos_, 2) == "\xC2\xB7") {
                pos_ += 2;
            }
            skip_space();
        }
        return {coef, atom()};
    }

    Atom atom()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '~' || peek() == '.' ||
                             peek() == '^'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name.empty())
            fail("expected a cell");

        if (name == "y" || name.rfind("y^", 0) == 0) {
            int power = name == "y" ? 1 : small_int(name.substr(2));
            return expand(NamedCell::y_power(power));
        }
        if (name == "sigma" || name == "tau" || name == "sigma~" || name == "tau~" || name == "beta") {
            std::vector<int> args = arguments();
            std::size_t want = name == "beta" ? 2 : 1;
            if (args.size() != want)
                fail(name + " takes " + std::to_string(want) + " argument" + (want > 1 ? "s" : ""));
            try {
                if (name == "sigma")
                    return expand(NamedCell::sigma(args[0]));
                if (name == "tau")
                    return expand(NamedCell::tau(args[0]));
                if (name == "sigma~")
                    return expand(NamedCell::sigma_tilde(args[0]));
                if (name == "tau~")
                    return expand(NamedCell::tau_tilde(args[0]));
                return expand(NamedCell::beta(args[0], args[1]));
            } catch (const DomainError& e) {
                fail(e.what());
            }
        }
        if (name == "e")
            return PendingWord{name, 0};
        if (name[0] != 'a')
            fail("unknown cell '" + name + "'");
        PendingWord w{name, 0};
        for (std::size_t i = 0; i < name.size(); ++i) {
            if (name[i] != 'a')
                continue;
            std::size_t j = i + 1;
            while (j < name.size() && std::isdigit(static_cast<unsigned char>(name[j])))
                ++j;
            if (j == i + 1)
                fail("bad generator in '" + name + "'");
            w.max_letter = std::max(w.max_letter, small_int(name.substr(i + 1, j - i - 1)));
        }
        return w;
    }

    std::vector<int> arguments()
    {
        skip_space();
        if (at_end() || peek() != '(')
            fail("expected '('");
        ++pos_;
        std::vector<int> args;
        for (;;) {
            skip_space();
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected an integer argument");
            args.push_back(small_int(digits()));
            skip_space();
            if (!at_end() && peek() == ',') {
                ++pos_;
                continue;
            }
            if (at_end() || peek() != ')')
                fail("expected ')'");
            ++pos_;
            return args;
        }
    }

    std::string digits()
    {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    int small_int(const std::string& s)
    {
        if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
            fail("bad integer '" + s + "'");
        return std::stoi(s);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Chain parse_chain(std::string_view text, std::optional<int> dim)
{
    auto terms = ChainParser(text).parse();

    std::optional<int> resolved = dim;
    if (!resolved) {
        for (const auto& [a, atom] : terms) {
            if (const Simplex* x = std::get_if<Simplex>(&atom)) {
                resolved = x->dim();
                break;
            }
        }
    }
    if (!resolved) {
        int top = 0;
        for (const auto& [a, atom] : terms)
            top = std::max(top, std::get<PendingWord>(atom).max_letter);
        if (top == 0)
            throw ParseError("cannot infer the dimension of '" + std::string(text) + "'; give it explicitly");
        resolved = top;
    }

    Chain c(*resolved);
    for (auto& [a, atom] : terms) {
        Simplex x = std::holds_alternative<Simplex>(atom)
                        ? std::get<Simplex>(atom)
                        : parse_simplex(std::get<PendingWord>(atom).text, *resolved);
        if (x.dim() != *resolved)
            throw ParseError("term " + to_text(x) + " has dimension " + std::to_string(x.dim()) + ", expected " +
                             std::to_string(*resolved));
        c.add(x, a);
    }
    return c;
}

std::string format_chain(const Chain& c)
{
    auto cell = [&c](const Simplex& x) {
        if (c.dim() == 1 && !x.is_identity())
            return x.length() == 1 ? std::string("y") : "y^" + std::to_string(x.length());
        return to_text(x);
    };
    if (c.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [x, a] : c.terms()) {
        Integer mag = abs(a);
        if (first)
            out += a < 0 ? "-" : "";
        else
            out += a < 0 ? " - " : " + ";
        if (mag != 1)
            out += mag.str() + "\xC2\xB7";
        out += cell(x);
        first = false;
    }
    return out;
}

} // namespace fkmorse
