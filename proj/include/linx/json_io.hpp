#pragma once

// JSON encoding of tree vectors.
//
// Objects become dict nodes (key order as written), a number is a scalar
// leaf, and an array is a leaf when it is a rectangular nested array of
// numbers. Any other array is a list node.
//
//   {"a": [1.0, 2.0], "b": [[3.0, 4.0]]}   dict{a: leaf[2], b: leaf[1,2]}
//   [[1.0], {"c": 2.0}]                    list[leaf[1], dict{c: leaf[]}]

#include "linx/tree.hpp"

#include <json.hpp>

#include <string>

namespace linx {

using Json = nlohmann::ordered_json;

/// Throws ParseError on non-numeric values or empty containers where a
/// structure cannot be inferred.
TreeVector tree_from_json(const Json& j);
Json tree_to_json(const TreeVector& v);

/// Reads a JSON tree file. Syntax errors become ParseError with a line number.
TreeVector read_tree_file(const std::string& path);
Json read_json_file(const std::string& path);

} // namespace linx
