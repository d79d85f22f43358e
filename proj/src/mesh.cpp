#include "kslab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/kernels.hpp"
#include "kslab/quadrature.hpp"

namespace kslab {

std::size_t default_max_nodes() {
    if (const char* env = std::getenv("KS_MAX_NODES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 8000;
}

void MeshParams::validate() const {
    if (order < 2 || order > 32) throw DomainError("mesh: order must lie in [2, 32]");
    if (!(grading_ratio > 0.0 && grading_ratio < 1.0)) throw DomainError("mesh: grading_ratio must lie in (0, 1)");
    if (panels_per_arc < 1) throw DomainError("mesh: panels_per_arc must be at least 1");
    if (grading_levels < 0 || grading_levels > 200) throw DomainError("mesh: grading_levels must lie in [0, 200]");
    if (endpoint_levels > 200) throw DomainError("mesh: endpoint_levels must be at most 200");
    if (max_nodes == 0) throw DomainError("mesh: max_nodes must be positive");
}

double Mesh::total_weight() const {
    double s = 0.0;
    for (const MeshNode& n : nodes) s += n.w;
    return s;
}

std::vector<std::size_t> Mesh::nodes_on_arc(std::size_t arc) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].arc == arc) out.push_back(i);
    return out;
}

namespace {

// Panels on [0, L] given as offsets from whichever end anchors them.
struct RawPanel {
    bool from_end;
    double lo, hi;
    int level;
};

std::vector<RawPanel> split_interval(double L, int panels, int lv_start, int lv_end, double ratio) {
    if (panels == 1 && lv_start > 0 && lv_end > 0) panels = 2;
    std::vector<RawPanel> out;
    const double H = L / panels;
    for (int i = 0; i < panels; ++i) {
        bool from_end = 2 * i >= panels;
        double lo = from_end ? -L * (panels - i) / panels : L * i / panels;
        double hi = from_end ? -L * (panels - i - 1) / panels : L * (i + 1) / panels;
        if (i == 0 && lv_start > 0) {
            double r = std::pow(ratio, lv_start);
            out.push_back({false, 0.0, r * H, lv_start});
            for (int k = lv_start; k >= 1; --k) {
                double a = std::pow(ratio, k) * H;
                double b = k == 1 ? H : std::pow(ratio, k - 1) * H;
                out.push_back({false, a, b, k});
            }
            continue;
        }
        if (i == panels - 1 && lv_end > 0) {
            for (int k = 1; k <= lv_end; ++k) {
                double a = k == 1 ? -H : -std::pow(ratio, k - 1) * H;
                double b = -std::pow(ratio, k) * H;
                out.push_back({true, a, b, k});
            }
            out.push_back({true, -std::pow(ratio, lv_end) * H, 0.0, lv_end});
            continue;
        }
        out.push_back({from_end, lo, hi, 0});
    }
    return out;
}

}  // namespace

Mesh build_mesh(const Boundary& b, const MeshParams& p) {
    p.validate();
    auto shared = std::make_shared<const Boundary>(b);
    const GaussRule g = gauss_legendre(p.order);

    std::vector<std::vector<RawPanel>> plan(b.arcs().size());
    std::size_t total = 0;
    for (std::size_t k = 0; k < b.arcs().size(); ++k) {
        const Arc& arc = b.arcs()[k];
        if (arc.kind() == ArcKind::analytic_closed) {
            plan[k] = split_interval(arc.b() - arc.a(), p.panels_per_arc, 0, 0, p.grading_ratio);
            for (RawPanel& rp : plan[k]) {
                // periodic arcs have no distinguished end; anchor everything at a
                if (rp.from_end) {
                    double L = arc.b() - arc.a();
                    rp.lo += L;
                    rp.hi += L;
                    rp.from_end = false;
                }
            }
        } else {
            int ls = b.corner_at_start(k) ? p.grading_levels : (b.open_start(k) ? p.levels_at_open_end() : 0);
            int le = b.corner_at_end(k) ? p.grading_levels : (b.open_end(k) ? p.levels_at_open_end() : 0);
            plan[k] = split_interval(arc.b() - arc.a(), p.panels_per_arc, ls, le, p.grading_ratio);
        }
        total += plan[k].size() * static_cast<std::size_t>(p.order);
    }
    if (total > p.max_nodes)
        throw ResourceError("mesh: " + std::to_string(total) + " nodes exceed the budget of " +
                            std::to_string(p.max_nodes));

    Mesh m;
    m.boundary = shared;
    m.nodes.reserve(total);
    for (std::size_t k = 0; k < shared->arcs().size(); ++k) {
        const Arc& arc = shared->arcs()[k];
        for (const RawPanel& rp : plan[k]) {
            Panel pan{k, rp.from_end ? arc.b() : arc.a(), rp.lo, rp.hi, rp.level};
            Complex anchor = rp.from_end ? arc.end() : arc.start();
            const double half = 0.5 * (pan.hi - pan.lo);
            for (int q = 0; q < p.order; ++q) {
                double o = pan.lo + half * (1.0 + g.x[q]);
                MeshNode n;
                n.t = pan.anchor_t + o;
                n.anchor = anchor;
                n.local = arc.displacement(pan.anchor_t, o);
                n.z = anchor + n.local;
                Complex d = arc.derivative(n.t);
                n.T = d / std::abs(d);
                n.w = std::abs(d) * half * g.w[q];
                n.arc = k;
                n.panel = m.panels.size();
                m.nodes.push_back(n);
            }
            m.panels.push_back(pan);
        }
    }
    return m;
}

Mesh build_periodic_mesh(const Boundary& b, std::size_t n) {
    if (b.arcs().size() != 1 || b.arcs()[0].kind() != ArcKind::analytic_closed)
        throw UnsupportedGeometry("periodic mesh: needs a single closed analytic arc");
    if (n < 4) throw DomainError("periodic mesh: need at least 4 nodes");
    if (n > default_max_nodes()) throw ResourceError("periodic mesh: node budget exceeded");
    auto shared = std::make_shared<const Boundary>(b);
    const Arc& arc = shared->arcs()[0];
    Mesh m;
    m.boundary = shared;
    m.periodic = true;
    m.step = (arc.b() - arc.a()) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        MeshNode node;
        node.t = arc.a() + m.step * static_cast<double>(j);
        node.z = arc.point(node.t);
        node.anchor = 0.0;
        node.local = node.z;
        Complex d = arc.derivative(node.t);
        node.T = d / std::abs(d);
        node.w = m.step * std::abs(d);
        node.arc = 0;
        node.panel = j;
        m.nodes.push_back(node);
        m.panels.push_back(Panel{0, arc.a(), m.step * j, m.step * (j + 1), 0});
    }
    return m;
}

const char* to_string(OperatorTag t) {
    switch (t) {
        case OperatorTag::ks: return "ks";
        case OperatorTag::cauchy: return "cauchy";
        case OperatorTag::szego: return "szego";
        case OperatorTag::generic: return "generic";
    }
    return "?";
}

void check_dense_budget(std::size_t n) {
    std::size_t cap = default_max_nodes();
    if (n > cap)
        throw ResourceError("dense operator of size " + std::to_string(n) + " exceeds KS_MAX_NODES=" +
                            std::to_string(cap));
}

namespace {

Complex ks_entry(const Mesh& m, std::size_t i, std::size_t j) {
    Complex d = m.diff(i, j);
    if (d == Complex(0.0)) throw AssemblyError("assemble_ks: nodes " + std::to_string(i) + " and " +
                                               std::to_string(j) + " coincide");
    return ks_kernel_diff(d, m.nodes[i].T, m.nodes[j].T) * std::sqrt(m.nodes[i].w * m.nodes[j].w);
}

}  // namespace

OperatorMatrix assemble_ks(const Mesh& m) {
    const std::size_t n = m.size();
    check_dense_budget(n);
    OperatorMatrix out;
    out.tag = OperatorTag::ks;
    out.mesh = std::make_shared<const Mesh>(m);
    out.m = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            Complex v = ks_entry(m, i, j);
            out.m(i, j) = v;
            out.m(j, i) = -std::conj(v);
        }
    }
    return out;
}

CMatrix assemble_ks_block(const Mesh& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    check_dense_budget(std::max(rows.size(), cols.size()));
    CMatrix out(rows.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r)
            out(r, c) = rows[r] == cols[c] ? Complex(0.0) : ks_entry(m, rows[r], cols[c]);
    return out;
}

CVector apply_ks_block(const Mesh& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                       const CVector& x) {
    if (static_cast<std::size_t>(x.size()) != cols.size()) throw InputError("apply_ks_block: size mismatch");
    CVector y = CVector::Zero(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (rows[r] != cols[c]) acc += ks_entry(m, rows[r], cols[c]) * x(c);
        y(r) = acc;
    }
    return y;
}

GraphMesh build_graph_mesh(double left, double right, const MeshParams& p) {
    p.validate();
    if (!(right > left)) throw DomainError("graph mesh: empty interval");
    const GaussRule g = gauss_legendre(p.order);
    std::vector<std::pair<double, double>> pieces;
    if (left < 0.0 && right > 0.0) {
        pieces = {{left, 0.0}, {0.0, right}};
    } else {
        pieces = {{left, right}};
    }
    GraphMesh gm;
    for (auto [a, b] : pieces) {
        int ls = a == 0.0 ? p.grading_levels : p.levels_at_open_end();
        int le = b == 0.0 ? p.grading_levels : p.levels_at_open_end();
        for (const RawPanel& rp : split_interval(b - a, p.panels_per_arc, ls, le, p.grading_ratio)) {
            double anchor = rp.from_end ? b : a;
            double half = 0.5 * (rp.hi - rp.lo);
            for (int q = 0; q < p.order; ++q) {
                double o = rp.lo + half * (1.0 + g.x[q]);
                gm.anchor.push_back(anchor);
                gm.offset.push_back(o);
                gm.x.push_back(anchor + o);
                gm.w.push_back(half * g.w[q]);
            }
        }
    }
    if (gm.size() > p.max_nodes) throw ResourceError("graph mesh: node budget exceeded");
    return gm;
}

namespace {

// phi(x_j) - phi(x_i) using the anchored representation
double phi_diff(const GraphCurve& g, const GraphMesh& gm, const std::vector<double>& pv, std::size_t i,
                std::size_t j) {
    return g.M * (std::abs(gm.x[j]) - std::abs(gm.x[i])) + (pv[j] - pv[i]);
}

}  // namespace

OperatorMatrix assemble_graph_ks(const GraphCurve& g, const GraphMesh& gm) {
    g.validate();
    const std::size_t n = gm.size();
    check_dense_budget(n);
    std::vector<double> pv(n), dv(n);
    for (std::size_t i = 0; i < n; ++i) {
        pv[i] = g.p(gm.x[i]);
        dv[i] = g.dphi(gm.x[i]);
    }
    OperatorMatrix out;
    out.tag = OperatorTag::ks;
    out.m = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double dx = gm.diff(i, j);
            if (dx == 0.0) throw AssemblyError("assemble_graph_ks: coincident nodes");
            Complex v = graph_kernel_diff(dx, phi_diff(g, gm, pv, i, j), dv[i], dv[j]) * std::sqrt(gm.w[i] * gm.w[j]);
            out.m(i, j) = v;
            out.m(j, i) = -std::conj(v);
        }
    }
    return out;
}

Mesh lift_graph_mesh(const GraphCurve& g, const GraphMesh& gm) {
    g.validate();
    Mesh m;
    for (std::size_t i = 0; i < gm.size(); ++i) {
        double x = gm.x[i];
        double a = gm.anchor[i];
        double d = g.dphi(x);
        double h = std::hypot(1.0, d);
        MeshNode n;
        n.t = x;
        n.anchor = Complex(a, g.phi(a));
        n.local = Complex(gm.offset[i], g.M * (std::abs(x) - std::abs(a)) + (g.p(x) - g.p(a)));
        n.z = Complex(x, g.phi(x));
        n.T = Complex(1.0, d) / h;
        n.w = h * gm.w[i];
        n.arc = x < 0 ? 0 : 1;
        m.nodes.push_back(n);
    }
    return m;
}

CMatrix BlockDecomposition::reconstruct(Eigen::Index n) const {
    CMatrix out = CMatrix::Zero(n, n);
    const std::size_t q = masks.size();
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = 0; k < q; ++k) {
            const CMatrix& B = blocks[j * q + k];
            for (std::size_t c = 0; c < masks[k].size(); ++c)
                for (std::size_t r = 0; r < masks[j].size(); ++r) out(masks[j][r], masks[k][c]) += B(r, c);
        }
    return out;
}

BlockDecomposition localized_blocks(const OperatorMatrix& A, const std::vector<NodeMask>& masks) {
    const auto n = static_cast<std::size_t>(A.size());
    std::vector<int> hits(n, 0);
    for (const NodeMask& mask : masks)
        for (std::size_t i : mask) {
            if (i >= n) throw InputError("localized_blocks: mask index out of range");
            ++hits[i];
        }
    for (int h : hits)
        if (h != 1) throw InputError("localized_blocks: masks do not partition the node set");

    BlockDecomposition out;
    out.masks = masks;
    for (const NodeMask& rj : masks)
        for (const NodeMask& ck : masks) {
            CMatrix B(rj.size(), ck.size());
            for (std::size_t c = 0; c < ck.size(); ++c)
                for (std::size_t r = 0; r < rj.size(); ++r) B(r, c) = A.m(rj[r], ck[c]);
            out.blocks.push_back(std::move(B));
        }
    return out;
}

std::vector<NodeMask> corner_masks(const Mesh& m, double radius) {
    if (!m.boundary) throw InputError("corner_masks: mesh has no boundary");
    if (!(radius > 0.0)) throw DomainError("corner_masks: radius must be positive");
    const auto& corners = m.boundary->corners();
    std::vector<NodeMask> out(corners.size() + 1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::size_t owner = 0;
        for (std::size_t c = 0; c < corners.size(); ++c) {
            const Corner& cn = corners[c];
            if (m.nodes[i].arc != cn.arc_in && m.nodes[i].arc != cn.arc_out) continue;
            if (std::abs(m.nodes[i].z - cn.vertex) < radius) {
                owner = c + 1;
                break;
            }
        }
        out[owner].push_back(i);
    }
    return out;
}

double hs_norm(const CMatrix& block) { return block.norm(); }

}  // namespace kslab
