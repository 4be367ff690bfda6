#include "linx/tree.hpp"

#include "linx/error.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace linx {

std::size_t element_count(const Shape& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

struct TreeStructure::Node {
    Kind kind = Kind::leaf;
    Shape shape;
    std::vector<std::string> keys;
    std::vector<TreeStructure> children;
    std::vector<Shape> leaves;
    std::vector<std::size_t> offsets;
};

std::shared_ptr<const TreeStructure::Node> TreeStructure::finish(std::shared_ptr<Node> node)
{
    std::size_t offset = 0;
    node->offsets.push_back(0);
    for (const auto& s : node->leaves) {
        offset += element_count(s);
        node->offsets.push_back(offset);
    }
    return node;
}

TreeStructure::TreeStructure(std::size_t n) : TreeStructure(leaf(Shape{n})) {}

TreeStructure::TreeStructure(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

TreeStructure TreeStructure::leaf(Shape shape)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::leaf;
    node->shape = shape;
    node->leaves.push_back(std::move(shape));
    return TreeStructure(finish(std::move(node)));
}

TreeStructure TreeStructure::dict(std::vector<std::pair<std::string, TreeStructure>> children)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::dict;
    for (auto& [key, child] : children) {
        for (const auto& k : node->keys)
            if (k == key) throw StructureError("duplicate key '" + key + "' in tree structure");
        node->keys.push_back(key);
        const auto& shapes = child.leaf_shapes();
        node->leaves.insert(node->leaves.end(), shapes.begin(), shapes.end());
        node->children.push_back(std::move(child));
    }
    return TreeStructure(finish(std::move(node)));
}

TreeStructure TreeStructure::list(std::vector<TreeStructure> children)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::list;
    for (auto& child : children) {
        const auto& shapes = child.leaf_shapes();
        node->leaves.insert(node->leaves.end(), shapes.begin(), shapes.end());
        node->children.push_back(std::move(child));
    }
    return TreeStructure(finish(std::move(node)));
}

TreeStructure::Kind TreeStructure::kind() const { return node_->kind; }
const Shape& TreeStructure::shape() const { return node_->shape; }
const std::vector<std::string>& TreeStructure::keys() const { return node_->keys; }
const std::vector<TreeStructure>& TreeStructure::children() const { return node_->children; }
std::size_t TreeStructure::total_dim() const { return node_->offsets.back(); }
const std::vector<Shape>& TreeStructure::leaf_shapes() const { return node_->leaves; }
const std::vector<std::size_t>& TreeStructure::leaf_offsets() const { return node_->offsets; }

std::string TreeStructure::to_string() const
{
    std::ostringstream out;
    switch (kind()) {
    case Kind::leaf: {
        out << "f64[";
        for (std::size_t i = 0; i < shape().size(); ++i) out << (i ? "," : "") << shape()[i];
        out << "]";
        break;
    }
    case Kind::dict:
        out << "{";
        for (std::size_t i = 0; i < children().size(); ++i)
            out << (i ? ", " : "") << keys()[i] << ": " << children()[i].to_string();
        out << "}";
        break;
    case Kind::list:
        out << "[";
        for (std::size_t i = 0; i < children().size(); ++i)
            out << (i ? ", " : "") << children()[i].to_string();
        out << "]";
        break;
    }
    return out.str();
}

bool operator==(const TreeStructure& a, const TreeStructure& b)
{
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() == TreeStructure::Kind::leaf) return a.shape() == b.shape();
    return a.keys() == b.keys() && a.children() == b.children();
}

TreeVector::TreeVector(TreeStructure structure, std::vector<double> flat)
    : structure_(std::move(structure)), data_(std::move(flat))
{
    if (data_.size() != structure_.total_dim())
        throw StructureError("flat vector of length " + std::to_string(data_.size())
                             + " does not match structure " + structure_.to_string() + " of dimension "
                             + std::to_string(structure_.total_dim()));
}

TreeVector::TreeVector(std::vector<double> flat) : structure_(flat.size()), data_(std::move(flat)) {}

TreeVector TreeVector::zeros(TreeStructure structure)
{
    const auto n = structure.total_dim();
    return TreeVector(std::move(structure), std::vector<double>(n, 0.0));
}

std::span<const double> TreeVector::leaf(std::size_t i) const
{
    const auto& off = structure_.leaf_offsets();
    if (i + 1 >= off.size()) throw StructureError("leaf index out of range");
    return std::span<const double>(data_).subspan(off[i], off[i + 1] - off[i]);
}

std::vector<double> flatten(const TreeVector& vec)
{
    return {vec.values().begin(), vec.values().end()};
}

TreeVector unflatten(const TreeStructure& structure, std::vector<double> flat)
{
    return TreeVector(structure, std::move(flat));
}

void require_same_structure(const TreeStructure& a, const TreeStructure& b, const char* what)
{
    if (!(a == b))
        throw StructureError(std::string(what) + ": structure mismatch, " + a.to_string() + " vs "
                             + b.to_string());
}

double dot(const TreeVector& u, const TreeVector& v)
{
    require_same_structure(u.structure(), v.structure(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(const TreeVector& v)
{
    double s = 0.0;
    for (double x : v.values()) s += x * x;
    return std::sqrt(s);
}

TreeVector axpy(double alpha, const TreeVector& x, const TreeVector& y)
{
    require_same_structure(x.structure(), y.structure(), "axpy");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i] + y[i];
    return TreeVector(x.structure(), std::move(out));
}

TreeVector scale(double alpha, const TreeVector& x)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i];
    return TreeVector(x.structure(), std::move(out));
}

TreeVector add(const TreeVector& x, const TreeVector& y) { return axpy(1.0, x, y); }

TreeVector subtract(const TreeVector& x, const TreeVector& y) { return axpy(-1.0, y, x); }

TreeVector zeros_like(const TreeVector& x) { return TreeVector::zeros(x.structure()); }

} // namespace linx
