#include "kslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/quadrature.hpp"

namespace kslab {

const char* to_string(ArcKind k) {
    switch (k) {
        case ArcKind::line_segment: return "line_segment";
        case ArcKind::circular_arc: return "circular_arc";
        case ArcKind::graph: return "graph";
        case ArcKind::analytic_closed: return "analytic_closed";
    }
    return "?";
}

Arc Arc::segment(Complex from, Complex to) {
    double len = std::abs(to - from);
    if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("segment: endpoints must be distinct and finite");
    Arc arc;
    arc.kind_ = ArcKind::line_segment;
    arc.a_ = 0.0;
    arc.b_ = len;
    arc.origin_ = from;
    arc.dir_ = (to - from) / len;
    arc.start_ = from;
    arc.end_ = to;
    arc.length_ = len;
    return arc;
}

Arc Arc::circular(Complex center, double radius, double phi0, double phi1) {
    if (!(radius > 0.0)) throw DomainError("circular arc: radius must be positive");
    if (phi0 == phi1) throw DomainError("circular arc: empty angle range");
    if (std::abs(phi1 - phi0) >= 2 * pi) throw DomainError("circular arc: sweep must be below 2pi");
    Arc arc;
    arc.kind_ = ArcKind::circular_arc;
    arc.orient_ = phi1 > phi0 ? 1.0 : -1.0;
    // parameter always increases; angle = phi0 + orient * (t - a)
    arc.a_ = 0.0;
    arc.b_ = std::abs(phi1 - phi0);
    arc.origin_ = center;
    arc.radius_ = radius;
    arc.phi0_ = phi0;
    arc.start_ = center + std::polar(radius, phi0);
    arc.end_ = center + std::polar(radius, phi1);
    arc.length_ = radius * arc.b_;
    return arc;
}

Arc Arc::graph(double left, double right, Real p, Real dp, Real ddp) {
    if (!(right > left)) throw DomainError("graph arc: empty interval");
    if (!p || !dp) throw InputError("graph arc: p and p' are both required");
    Arc arc;
    arc.kind_ = ArcKind::graph;
    arc.a_ = left;
    arc.b_ = right;
    arc.p_ = std::move(p);
    arc.dp_ = std::move(dp);
    arc.ddp_ = std::move(ddp);
    arc.start_ = Complex(left, arc.p_(left));
    arc.end_ = Complex(right, arc.p_(right));
    arc.finish();
    return arc;
}

Arc Arc::analytic_closed(double a, double b, Map z, Map dz, Map ddz) {
    if (!(b > a)) throw DomainError("closed arc: empty parameter interval");
    if (!z || !dz || !ddz) throw InputError("closed arc: z, z' and z'' are required");
    Arc arc;
    arc.kind_ = ArcKind::analytic_closed;
    arc.a_ = a;
    arc.b_ = b;
    arc.z_ = std::move(z);
    arc.dz_ = std::move(dz);
    arc.ddz_ = std::move(ddz);
    arc.start_ = arc.z_(a);
    arc.end_ = arc.start_;
    arc.finish();
    return arc;
}

void Arc::finish() {
    // composite Gauss-Legendre for the length of curved arcs
    const GaussRule g = gauss_legendre(20);
    const int panels = 64;
    const double h = (b_ - a_) / panels;
    double len = 0.0;
    for (int k = 0; k < panels; ++k) {
        double lo = a_ + k * h;
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            double t = lo + 0.5 * h * (1.0 + g.x[q]);
            len += 0.5 * h * g.w[q] * std::abs(derivative(t));
        }
    }
    length_ = len;
}

Complex Arc::point(double t) const {
    switch (kind_) {
        case ArcKind::line_segment:
            if (t == b_) return end_;
            return origin_ + dir_ * t;
        case ArcKind::circular_arc:
            return origin_ + std::polar(radius_, phi0_ + orient_ * t);
        case ArcKind::graph:
            return {t, p_(t)};
        case ArcKind::analytic_closed:
            return z_(t);
    }
    return {};
}

Complex Arc::derivative(double t) const {
    switch (kind_) {
        case ArcKind::line_segment:
            return dir_;
        case ArcKind::circular_arc:
            return orient_ * I * std::polar(radius_, phi0_ + orient_ * t);
        case ArcKind::graph:
            return {1.0, dp_(t)};
        case ArcKind::analytic_closed:
            return dz_(t);
    }
    return {};
}

Complex Arc::second_derivative(double t) const {
    switch (kind_) {
        case ArcKind::line_segment:
            return 0.0;
        case ArcKind::circular_arc:
            return -std::polar(radius_, phi0_ + orient_ * t);
        case ArcKind::graph:
            if (!ddp_) throw InputError("graph arc: p'' not supplied");
            return {0.0, ddp_(t)};
        case ArcKind::analytic_closed:
            return ddz_(t);
    }
    return {};
}

Complex Arc::tangent(double t) const {
    Complex d = derivative(t);
    double s = std::abs(d);
    if (!(s > 0.0)) throw DomainError("arc: vanishing derivative");
    return d / s;
}

Complex Arc::displacement(double anchor, double offset) const {
    switch (kind_) {
        case ArcKind::line_segment:
            return dir_ * offset;
        case ArcKind::circular_arc: {
            double s = std::sin(0.5 * offset);
            Complex e = std::polar(radius_, phi0_ + orient_ * anchor);
            return e * Complex(-2.0 * s * s, orient_ * std::sin(offset));
        }
        case ArcKind::graph:
            return {offset, p_(anchor + offset) - p_(anchor)};
        case ArcKind::analytic_closed:
            return z_(anchor + offset) - z_(anchor);
    }
    return {};
}

namespace {

constexpr double kSmoothTurn = 1e-12;

bool same_point(Complex a, Complex b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

Boundary::Boundary(std::vector<Arc> arcs, std::vector<Chain> chains)
    : arcs_(std::move(arcs)), chains_(std::move(chains)) {
    if (arcs_.empty()) throw InputError("boundary: no arcs");
    std::vector<int> seen(arcs_.size(), 0);
    for (const Chain& c : chains_) {
        if (c.first > c.last || c.last >= arcs_.size()) throw InputError("boundary: bad chain range");
        for (std::size_t k = c.first; k <= c.last; ++k) ++seen[k];
    }
    for (int s : seen)
        if (s != 1) throw InputError("boundary: chains must cover every arc exactly once");
    link();
}

Boundary Boundary::single_chain(std::vector<Arc> arcs, bool closed) {
    std::size_t n = arcs.size();
    if (n == 0) throw InputError("boundary: no arcs");
    return Boundary(std::move(arcs), {Chain{0, n - 1, closed}});
}

void Boundary::link() {
    const std::size_t n = arcs_.size();
    start_corner_.assign(n, std::nullopt);
    end_corner_.assign(n, std::nullopt);
    open_start_.assign(n, false);
    open_end_.assign(n, false);

    auto junction = [&](std::size_t in, std::size_t out) {
        const Arc& A = arcs_[in];
        const Arc& B = arcs_[out];
        if (!same_point(A.end(), B.start()))
            throw InputError("boundary: consecutive arcs do not share an endpoint");
        Complex tin = A.tangent(A.b());
        Complex tout = B.tangent(B.a());
        double turn = std::arg(tout / tin);
        if (std::abs(turn) <= kSmoothTurn) return;
        if (pi - std::abs(turn) <= 1e-10) throw DomainError("boundary: cusp at junction");
        Corner c;
        c.vertex = B.start();
        c.half_angle = 0.5 * (pi - turn);
        c.incoming = tin;
        c.outgoing = tout;
        c.lipschitz_M = std::abs(std::cos(c.half_angle) / std::sin(c.half_angle));
        c.arc_in = in;
        c.arc_out = out;
        end_corner_[in] = corners_.size();
        start_corner_[out] = corners_.size();
        corners_.push_back(c);
    };

    for (const Chain& c : chains_) {
        for (std::size_t k = c.first; k < c.last; ++k) junction(k, k + 1);
        if (c.closed) {
            if (c.first == c.last && arcs_[c.first].kind() == ArcKind::analytic_closed) continue;
            junction(c.last, c.first);
        } else {
            open_start_[c.first] = true;
            open_end_[c.last] = true;
        }
    }
}

bool Boundary::closed() const {
    return std::all_of(chains_.begin(), chains_.end(), [](const Chain& c) { return c.closed; });
}

double Boundary::total_length() const {
    double s = 0.0;
    for (const Arc& a : arcs_) s += a.length();
    return s;
}

void CombSpec::validate() const {
    if (n < 1) throw DomainError("comb: n must be a positive integer");
    if (!(eps > 0.0) || !(eps < 0.25)) throw DomainError("comb: eps must lie in (0, 1/4)");
}

Boundary make_wedge(double theta) {
    if (!(theta > 0.0 && theta < pi)) throw DomainError("wedge: theta must lie in (0, pi)");
    Complex up = std::polar(1.0, theta);
    Complex down = std::polar(1.0, -theta);
    // upper ray traversed toward the vertex, lower ray away from it
    std::vector<Arc> arcs{Arc::segment(up, 0.0), Arc::segment(0.0, down)};
    return Boundary::single_chain(std::move(arcs), false);
}

Boundary make_comb(const CombSpec& spec) {
    spec.validate();
    std::vector<Arc> arcs;
    std::vector<Chain> chains;
    for (int j = 0; j <= spec.n; ++j) {
        double y = spec.alpha(j);
        arcs.push_back(Arc::segment({0.0, y}, {1.0, y}));
        chains.push_back(Chain{static_cast<std::size_t>(j), static_cast<std::size_t>(j), false});
    }
    return Boundary(std::move(arcs), std::move(chains));
}

Boundary make_polygon(std::vector<Complex> v) {
    const std::size_t n = v.size();
    if (n < 3) throw DomainError("polygon: need at least 3 vertices");
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(v[k].real()) || !std::isfinite(v[k].imag()))
            throw DomainError("polygon: non-finite vertex");
        if (v[k] == v[(k + 1) % n]) throw DomainError("polygon: repeated vertex");
    }
    double area2 = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Complex a = v[k], b = v[(k + 1) % n];
        area2 += a.real() * b.imag() - b.real() * a.imag();
        scale = std::max(scale, std::abs(a));
    }
    if (std::abs(area2) <= 1e-14 * scale * scale) throw DomainError("polygon: vertices are collinear");
    if (area2 < 0) std::reverse(v.begin(), v.end());
    std::vector<Arc> arcs;
    for (std::size_t k = 0; k < n; ++k) arcs.push_back(Arc::segment(v[k], v[(k + 1) % n]));
    return Boundary::single_chain(std::move(arcs), true);
}

Boundary make_ellipse(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("ellipse: semi-axes must be positive");
    auto z = [a, b](double t) { return Complex(a * std::cos(t), b * std::sin(t)); };
    auto dz = [a, b](double t) { return Complex(-a * std::sin(t), b * std::cos(t)); };
    auto ddz = [a, b](double t) { return Complex(-a * std::cos(t), -b * std::sin(t)); };
    return Boundary::single_chain({Arc::analytic_closed(0.0, 2 * pi, z, dz, ddz)}, true);
}

Boundary make_circle(double r) {
    if (!(r > 0.0)) throw DomainError("circle: radius must be positive");
    auto z = [r](double t) { return std::polar(r, t); };
    auto dz = [r](double t) { return I * std::polar(r, t); };
    auto ddz = [r](double t) { return -std::polar(r, t); };
    return Boundary::single_chain({Arc::analytic_closed(0.0, 2 * pi, z, dz, ddz)}, true);
}

void GraphCurve::validate() const {
    if (!p || !dp) throw InputError("graph curve: p and p' samples are required");
    if (!(right > left)) throw DomainError("graph curve: empty interval");
}

double GraphCurve::phi(double x) const { return M * std::abs(x) + p(x); }

double GraphCurve::dphi(double x) const {
    double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    return M * s + dp(x);
}

double GraphCurve::h(double x) const { return std::hypot(1.0, dphi(x)); }

}  // namespace kslab
