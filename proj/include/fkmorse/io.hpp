#ifndef FKMORSE_IO_HPP
#define FKMORSE_IO_HPP

// JSON, CSV and DOT exchange formats, plus the chain text syntax used on the
// command line:
//
//   chain := ['-'] term (('+' | '-') term)*
//   term  := [integer ['*' | '·']] cell
//   cell  := y | y^k | e | a3.a2.a2 | sigma(k) | tau(k) | sigma~(k) | tau~(k) | beta(k,s)

#include "fkmorse/homology.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace fkmorse {

using Json = nlohmann::ordered_json;

Json to_json(const Simplex& x);
Simplex simplex_from_json(const Json& j);

// Coefficients fitting in 64 bits are numbers, larger ones decimal strings.
Json to_json(const Integer& v);
Integer integer_from_json(const Json& j);

Json to_json(const Chain& c);
Chain chain_from_json(const Json& j);

Json to_json(const PairingFlags& f);
PairingFlags flags_from_json(const Json& j);

Json to_json(const Matching& m);
Matching matching_from_json(const Json& j);

Json to_json(const Verdict& v);

Json to_json(const MorseSlice& s);
MorseSlice slice_from_json(const Json& j);
std::string slice_csv(const MorseSlice& s);

Json to_json(const HomologyGroup& g, int max_length);
Json to_json(const StabilityReport& r);

// One row per critical cell: dim,length,simplex,degenerate,reason.
std::string critical_csv(const CriticalReport& report, const Scope& scope);

// Modified Hasse diagram of every stratum pair (n,l) -> (n+1,l) in scope, one
// cluster per stratum, matched edges reversed and drawn bold.
std::string matching_dot(const Matching& m);

FaceScope parse_face_scope(std::string_view s);
CofaceScope parse_coface_scope(std::string_view s);
DegeneratePolicy parse_degenerate_policy(std::string_view s);
ChainMode parse_chain_mode(std::string_view s);
std::string to_string(ChainMode m);

// Parses the chain syntax above. Words like a3.a2 take their dimension from
// dim when given, otherwise from the other terms or the largest letter.
Chain parse_chain(std::string_view text, std::optional<int> dim = std::nullopt);

// 4·y, a3.a2.a2 - a2.a3.a2, 0. Dimension-1 words print as powers of y.
std::string format_chain(const Chain& c);

} // namespace fkmorse

#endif
