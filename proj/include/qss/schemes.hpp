#pragma once

// The named threshold schemes: player graph, dealer attachment and the
// direction in which a classical secret enters the labels.
//
// The dealer always has external id 0 (printed as `D`); players keep ids 1..n.

#include "qss/field.hpp"
#include "qss/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qss {

inline constexpr int kDealerId = 0;

enum class SchemeKind { CC, CQ, QQ };

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(const std::string& text);

struct Scheme {
    std::string name;        // tree, twothree, ring34, ring35
    std::uint32_t d = 3;
    std::size_t threshold = 0;
    LabelledGraph players;   // ids 1..n, all labels zero
    // CC labels are z = s * encoding. The dealer of the extended graph is
    // attached with these same weights, so they double as A_D.
    FieldVector encoding;

    std::size_t player_count() const { return players.size(); }
    bool supports(SchemeKind kind) const;
};

// tree (n >= 2, star centred on player 1), twothree, ring34, ring35.
// Throws DomainError for an unknown name.
Scheme make_scheme(const std::string& name, std::uint32_t d, std::size_t n = 3);

// Dealer (id 0, index 0) joined to the players with weights `encoding`.
LabelledGraph extended_graph(const Scheme& scheme);

// Internal indices of player ids in `g`, in the order given. Throws on
// unknown or repeated ids.
std::vector<std::size_t> indices_of(const LabelledGraph& g, const std::vector<int>& ids);

// `1,2,4` -> {1,2,4}; throws DomainError on malformed input.
std::vector<int> parse_id_list(const std::string& text);
std::string format_id_list(const std::vector<int>& ids);

// Every nonempty subset of 1..n, smallest first.
std::vector<std::vector<int>> all_player_subsets(std::size_t n);

// Fixed stabilizer recipe for an authorised set of the twothree and ring35 CQ
// schemes, as a function of the dealer's basis parameter t. The vector runs
// over the reduced player graph (ids 1..n). Ring triples are rotations of
// {1,2,3} and {1,3,4}. std::nullopt for sets without a fixed recipe.
std::optional<FieldVector> prescribed_weights(const Scheme& scheme, const std::vector<int>& subset,
                                              const FieldElement& t);

} // namespace qss
