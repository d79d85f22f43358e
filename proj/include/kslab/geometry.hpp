#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "kslab/types.hpp"

namespace kslab {

enum class ArcKind { line_segment, circular_arc, graph, analytic_closed };

const char* to_string(ArcKind k);

// Smooth parametrized arc t -> z(t), t in [a, b].  Speed is arbitrary.
class Arc {
public:
    using Map = std::function<Complex(double)>;
    using Real = std::function<double(double)>;

    // unit-speed segment, t in [0, |to - from|]
    static Arc segment(Complex from, Complex to);
    // z = center + r e^{it}, t from phi0 to phi1 (phi1 < phi0 runs clockwise)
    static Arc circular(Complex center, double radius, double phi0, double phi1);
    // z = x + i p(x), x in [left, right]; ddp optional
    static Arc graph(double left, double right, Real p, Real dp, Real ddp = nullptr);
    // periodic closed curve on [a, b]; z(a) == z(b) is assumed
    static Arc analytic_closed(double a, double b, Map z, Map dz, Map ddz);

    ArcKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }

    Complex point(double t) const;
    Complex derivative(double t) const;
    Complex second_derivative(double t) const;
    Complex tangent(double t) const;
    Complex start() const { return start_; }
    Complex end() const { return end_; }

    // z(anchor + offset) - z(anchor) without cancellation for small offsets
    Complex displacement(double anchor, double offset) const;

    double length() const { return length_; }

private:
    Arc() = default;
    void finish();

    ArcKind kind_ = ArcKind::line_segment;
    double a_ = 0.0, b_ = 1.0;
    Complex start_, end_;
    double length_ = 0.0;

    // segment / circle data
    Complex origin_;
    Complex dir_;
    double radius_ = 0.0;
    double orient_ = 1.0;
    double phi0_ = 0.0;

    Map z_, dz_, ddz_;
    Real p_, dp_, ddp_;
};

struct Corner {
    Complex vertex;
    double half_angle = 0.0;
    Complex incoming;
    Complex outgoing;
    double lipschitz_M = 0.0;
    std::size_t arc_in = 0;
    std::size_t arc_out = 0;
};

// contiguous run of arcs [first, last]
struct Chain {
    std::size_t first = 0;
    std::size_t last = 0;
    bool closed = false;
};

class Boundary {
public:
    Boundary(std::vector<Arc> arcs, std::vector<Chain> chains);
    static Boundary single_chain(std::vector<Arc> arcs, bool closed);

    const std::vector<Arc>& arcs() const { return arcs_; }
    const std::vector<Corner>& corners() const { return corners_; }
    const std::vector<Chain>& chains() const { return chains_; }
    bool closed() const;
    double total_length() const;

    std::optional<std::size_t> corner_at_start(std::size_t arc) const { return start_corner_[arc]; }
    std::optional<std::size_t> corner_at_end(std::size_t arc) const { return end_corner_[arc]; }
    // arc starts/ends a chain that is not closed
    bool open_start(std::size_t arc) const { return open_start_[arc]; }
    bool open_end(std::size_t arc) const { return open_end_[arc]; }

private:
    void link();

    std::vector<Arc> arcs_;
    std::vector<Chain> chains_;
    std::vector<Corner> corners_;
    std::vector<std::optional<std::size_t>> start_corner_, end_corner_;
    std::vector<bool> open_start_, open_end_;
};

struct WedgeSpec {
    double theta = pi / 4;
};

struct CombSpec {
    int n = 1;
    double eps = 0.1;

    double alpha(int j) const { return eps * (static_cast<double>(j) / n); }
    void validate() const;
};

Boundary make_wedge(double theta);
Boundary make_comb(const CombSpec& spec);
Boundary make_polygon(std::vector<Complex> vertices);
Boundary make_ellipse(double a, double b);
Boundary make_circle(double r);

// Graph x + i phi(x) with phi = M|x| + p on [left, right].
struct GraphCurve {
    double left = -1.0;
    double right = 1.0;
    double M = 0.0;
    std::function<double(double)> p;
    std::function<double(double)> dp;

    void validate() const;
    double phi(double x) const;
    double dphi(double x) const;
    double h(double x) const;
};

}  // namespace kslab
