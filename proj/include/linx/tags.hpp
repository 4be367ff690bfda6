#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace linx {

/// Structural promises about an operator. Tags are never checked against
/// the operator's entries; solvers and the auto-selector trust them.
struct TagSet {
    bool symmetric = false;
    bool diagonal = false;
    bool tridiagonal = false;
    bool lower_triangular = false;
    bool upper_triangular = false;
    bool unit_diagonal = false;
    bool positive_semidefinite = false;
    bool negative_semidefinite = false;

    /// Closes the set under the implications
    /// diagonal => {tridiagonal, lower, upper, symmetric} and lower & upper => diagonal.
    TagSet normalized() const;
    /// Tags of the transposed operator (lower and upper triangular swap).
    TagSet transposed() const;

    bool triangular() const { return lower_triangular || upper_triangular; }
    bool empty() const { return *this == TagSet{}; }

    /// Canonical names of the set flags, in declaration order.
    std::vector<std::string> names() const;

    friend bool operator==(const TagSet&, const TagSet&) = default;
};

/// Closed vocabulary, in declaration order of TagSet.
const std::vector<std::string>& tag_vocabulary();

/// Parses a comma-separated list such as "symmetric,positive_semidefinite".
/// Throws ContractError on a name outside the vocabulary.
TagSet parse_tags(std::string_view list);
/// Sets a single named flag; throws ContractError on unknown names.
void set_tag(TagSet& tags, std::string_view name);

TagSet tag_intersection(const TagSet& a, const TagSet& b);

} // namespace linx
