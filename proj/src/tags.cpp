#include "linx/tags.hpp"

#include "linx/error.hpp"

#include <array>
#include <utility>

namespace linx {

namespace {

using Flag = bool TagSet::*;

const std::array<std::pair<const char*, Flag>, 8> kFlags{{
    {"symmetric", &TagSet::symmetric},
    {"diagonal", &TagSet::diagonal},
    {"tridiagonal", &TagSet::tridiagonal},
    {"lower_triangular", &TagSet::lower_triangular},
    {"upper_triangular", &TagSet::upper_triangular},
    {"unit_diagonal", &TagSet::unit_diagonal},
    {"positive_semidefinite", &TagSet::positive_semidefinite},
    {"negative_semidefinite", &TagSet::negative_semidefinite},
}};

} // namespace

TagSet TagSet::normalized() const
{
    TagSet t = *this;
    if (t.lower_triangular && t.upper_triangular) t.diagonal = true;
    if (t.diagonal) {
        t.tridiagonal = t.lower_triangular = t.upper_triangular = t.symmetric = true;
    }
    return t;
}

TagSet TagSet::transposed() const
{
    TagSet t = *this;
    std::swap(t.lower_triangular, t.upper_triangular);
    return t;
}

std::vector<std::string> TagSet::names() const
{
    std::vector<std::string> out;
    for (const auto& [name, flag] : kFlags)
        if (this->*flag) out.emplace_back(name);
    return out;
}

const std::vector<std::string>& tag_vocabulary()
{
    static const std::vector<std::string> vocab = [] {
        std::vector<std::string> v;
        for (const auto& [name, flag] : kFlags) v.emplace_back(name);
        return v;
    }();
    return vocab;
}

void set_tag(TagSet& tags, std::string_view name)
{
    for (const auto& [known, flag] : kFlags) {
        if (name == known) {
            tags.*flag = true;
            return;
        }
    }
    throw ContractError("unknown tag '" + std::string(name) + "'");
}

TagSet parse_tags(std::string_view list)
{
    TagSet tags;
    while (!list.empty()) {
        const auto comma = list.find(',');
        auto item = list.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) set_tag(tags, item);
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return tags;
}

TagSet tag_intersection(const TagSet& a, const TagSet& b)
{
    TagSet t;
    for (const auto& [name, flag] : kFlags) t.*flag = a.*flag && b.*flag;
    return t;
}

} // namespace linx
