#include "linx/json_io.hpp"

#include "linx/error.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>

namespace linx {

namespace {

// Shape of a rectangular nested numeric array, or nullopt.
std::optional<Shape> array_shape(const Json& j)
{
    if (j.is_number()) return Shape{};
    if (!j.is_array()) return std::nullopt;
    if (j.empty()) return Shape{0};
    std::optional<Shape> inner = array_shape(j.front());
    if (!inner) return std::nullopt;
    for (const Json& e : j)
        if (array_shape(e) != inner) return std::nullopt;
    Shape s{j.size()};
    s.insert(s.end(), inner->begin(), inner->end());
    return s;
}

void collect(const Json& j, std::vector<double>& out)
{
    if (j.is_number()) {
        out.push_back(j.get<double>());
        return;
    }
    for (const Json& e : j) collect(e, out);
}

TreeStructure parse(const Json& j, std::vector<double>& flat)
{
    if (auto shape = array_shape(j)) {
        collect(j, flat);
        return TreeStructure::leaf(std::move(*shape));
    }
    if (j.is_object()) {
        std::vector<std::pair<std::string, TreeStructure>> children;
        for (const auto& [key, value] : j.items()) children.emplace_back(key, parse(value, flat));
        return TreeStructure::dict(std::move(children));
    }
    if (j.is_array()) {
        std::vector<TreeStructure> children;
        for (const Json& e : j) children.push_back(parse(e, flat));
        return TreeStructure::list(std::move(children));
    }
    throw ParseError(0, std::string("unexpected JSON ") + j.type_name() + " in tree");
}

Json leaf_to_json(const Shape& shape, std::size_t axis, const double*& p)
{
    if (axis == shape.size()) return Json(*p++);
    Json a = Json::array();
    for (std::size_t i = 0; i < shape[axis]; ++i) a.push_back(leaf_to_json(shape, axis + 1, p));
    return a;
}

Json emit(const TreeStructure& s, const double*& p)
{
    switch (s.kind()) {
    case TreeStructure::Kind::leaf: return leaf_to_json(s.shape(), 0, p);
    case TreeStructure::Kind::dict: {
        Json o = Json::object();
        for (std::size_t i = 0; i < s.keys().size(); ++i) o[s.keys()[i]] = emit(s.children()[i], p);
        return o;
    }
    case TreeStructure::Kind::list: {
        Json a = Json::array();
        for (const TreeStructure& c : s.children()) a.push_back(emit(c, p));
        return a;
    }
    }
    return nullptr;
}

std::size_t line_of(const std::string& text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

} // namespace

TreeVector tree_from_json(const Json& j)
{
    std::vector<double> flat;
    TreeStructure s = parse(j, flat);
    return TreeVector(std::move(s), std::move(flat));
}

Json tree_to_json(const TreeVector& v)
{
    const double* p = v.values().data();
    return emit(v.structure(), p);
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte is 1-based and points just past the offending character.
        throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
}

TreeVector read_tree_file(const std::string& path)
{
    return tree_from_json(read_json_file(path));
}

} // namespace linx
