#pragma once

// Tree-structured vector spaces.
//
// A TreeStructure is an ordered tree whose leaves are real arrays of a fixed
// shape. Every structure has a canonical flattening: leaves in depth-first
// order (children in declaration order), each leaf in row-major order. A
// TreeVector stores its values already flattened, so flatten/unflatten are
// copies and the tree only labels the layout.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace linx {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);

class TreeStructure {
public:
    enum class Kind { leaf, dict, list };

    /// Rank-1 leaf of length n; the structure of a plain vector.
    explicit TreeStructure(std::size_t n = 0);

    static TreeStructure leaf(Shape shape);
    static TreeStructure dict(std::vector<std::pair<std::string, TreeStructure>> children);
    static TreeStructure list(std::vector<TreeStructure> children);

    Kind kind() const;
    /// Shape of a leaf node. Empty for scalars and for non-leaf nodes.
    const Shape& shape() const;
    /// Keys of a dict node, in declaration order.
    const std::vector<std::string>& keys() const;
    const std::vector<TreeStructure>& children() const;

    std::size_t total_dim() const;
    /// Shapes of all leaves in canonical order.
    const std::vector<Shape>& leaf_shapes() const;
    std::size_t num_leaves() const { return leaf_shapes().size(); }
    /// Offset of each leaf into the flat vector, plus a final entry equal to total_dim().
    const std::vector<std::size_t>& leaf_offsets() const;

    std::string to_string() const;

    friend bool operator==(const TreeStructure& a, const TreeStructure& b);

private:
    struct Node;
    static std::shared_ptr<const Node> finish(std::shared_ptr<Node> node);
    explicit TreeStructure(std::shared_ptr<const Node> node);

    std::shared_ptr<const Node> node_;
};

class TreeVector {
public:
    TreeVector() = default;
    /// Throws StructureError when flat.size() != structure.total_dim().
    TreeVector(TreeStructure structure, std::vector<double> flat);
    /// Plain vector with a single rank-1 leaf.
    explicit TreeVector(std::vector<double> flat);

    static TreeVector zeros(TreeStructure structure);

    const TreeStructure& structure() const { return structure_; }
    std::size_t size() const { return data_.size(); }
    std::span<const double> values() const { return data_; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<const double> leaf(std::size_t i) const;

private:
    TreeStructure structure_;
    std::vector<double> data_;
};

std::vector<double> flatten(const TreeVector& vec);
TreeVector unflatten(const TreeStructure& structure, std::vector<double> flat);

/// Throws StructureError naming `what` when the structures differ.
void require_same_structure(const TreeStructure& a, const TreeStructure& b, const char* what);

double dot(const TreeVector& u, const TreeVector& v);
double norm(const TreeVector& v);
TreeVector axpy(double alpha, const TreeVector& x, const TreeVector& y);
TreeVector scale(double alpha, const TreeVector& x);
TreeVector add(const TreeVector& x, const TreeVector& y);
TreeVector subtract(const TreeVector& x, const TreeVector& y);
TreeVector zeros_like(const TreeVector& x);

} // namespace linx
