#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "kslab/geometry.hpp"
#include "kslab/types.hpp"

namespace kslab {

// KS_MAX_NODES if set, otherwise 8000
std::size_t default_max_nodes();

struct MeshParams {
    int panels_per_arc = 4;
    int order = 12;
    int grading_levels = 16;
    double grading_ratio = 0.5;
    // levels toward open chain ends; negative means "same as grading_levels"
    int endpoint_levels = -1;
    std::size_t max_nodes = default_max_nodes();

    void validate() const;
    int levels_at_open_end() const { return endpoint_levels < 0 ? grading_levels : endpoint_levels; }
};

// A node is stored as an exact anchor point plus a small local offset, so
// differences between nodes near the same vertex keep full relative accuracy.
struct MeshNode {
    double t = 0.0;
    Complex z;
    Complex anchor;
    Complex local;
    Complex T;
    double w = 0.0;
    std::size_t arc = 0;
    std::size_t panel = 0;
};

struct Panel {
    std::size_t arc = 0;
    double anchor_t = 0.0;
    double lo = 0.0;  // offsets from anchor_t
    double hi = 0.0;
    int level = 0;    // grading depth, 0 for unrefined panels
};

struct Mesh {
    std::shared_ptr<const Boundary> boundary;
    std::vector<MeshNode> nodes;
    std::vector<Panel> panels;
    bool periodic = false;
    double step = 0.0;  // parameter spacing of a periodic mesh

    std::size_t size() const { return nodes.size(); }
    Complex diff(std::size_t i, std::size_t j) const {
        return (nodes[j].anchor - nodes[i].anchor) + (nodes[j].local - nodes[i].local);
    }
    double total_weight() const;
    std::vector<std::size_t> nodes_on_arc(std::size_t arc) const;
};

Mesh build_mesh(const Boundary& b, const MeshParams& p = {});
// equispaced trapezoid nodes on a single closed analytic arc
Mesh build_periodic_mesh(const Boundary& b, std::size_t n);

enum class OperatorTag { ks, cauchy, szego, generic };
const char* to_string(OperatorTag t);

struct OperatorMatrix {
    CMatrix m;
    OperatorTag tag = OperatorTag::generic;
    std::shared_ptr<const Mesh> mesh;

    Eigen::Index size() const { return m.rows(); }
};

// throws ResourceError when n exceeds default_max_nodes()
void check_dense_budget(std::size_t n);

OperatorMatrix assemble_ks(const Mesh& m);
CMatrix assemble_ks_block(const Mesh& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols);
// y = A[rows, cols] x without storing the block
CVector apply_ks_block(const Mesh& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                       const CVector& x);

// 1-D mesh on [left, right], split and graded at 0 when 0 is interior
struct GraphMesh {
    std::vector<double> x;
    std::vector<double> anchor;
    std::vector<double> offset;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
    double diff(std::size_t i, std::size_t j) const { return (anchor[j] - anchor[i]) + (offset[j] - offset[i]); }
};

GraphMesh build_graph_mesh(double left, double right, const MeshParams& p = {});
OperatorMatrix assemble_graph_ks(const GraphCurve& g, const GraphMesh& gm);
// the graph as a planar mesh: z = x + i phi(x), T = (1 + i phi')/h, w = h dx
Mesh lift_graph_mesh(const GraphCurve& g, const GraphMesh& gm);

using NodeMask = std::vector<std::size_t>;

struct BlockDecomposition {
    std::vector<NodeMask> masks;
    std::vector<CMatrix> blocks;  // row-major over (j, k)

    std::size_t count() const { return masks.size(); }
    const CMatrix& block(std::size_t j, std::size_t k) const { return blocks[j * masks.size() + k]; }
    CMatrix reconstruct(Eigen::Index n) const;
};

BlockDecomposition localized_blocks(const OperatorMatrix& A, const std::vector<NodeMask>& masks);
// chi_0 first, then one mask per corner: nodes within `radius` of the vertex on its two arcs
std::vector<NodeMask> corner_masks(const Mesh& m, double radius);
double hs_norm(const CMatrix& block);

}  // namespace kslab
