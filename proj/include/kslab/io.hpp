#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kslab/comb.hpp"
#include "kslab/geometry.hpp"
#include "kslab/mesh.hpp"
#include "kslab/perturb.hpp"
#include "kslab/spectra.hpp"

namespace kslab {

// Curve-spec document, one of
//   {"polygon": [[x, y], ...]}
//   {"ellipse": {"a": .., "b": ..}}      {"circle": {"r": ..}}
//   {"wedge": {"theta": ..}}             {"comb": {"n": .., "eps": ..}}
//   {"arcs": [{"kind": "segment", "from": [x, y], "to": [x, y]},
//             {"kind": "circular_arc", "center": [x, y], "radius": r, "phi0": a, "phi1": b}],
//    "closed": true}
Boundary parse_curve_spec(const nlohmann::json& doc);
Boundary load_curve_spec(const std::string& path);

// square, triangle, circle[:r], ellipse[:a,b], wedge:theta, comb:n,eps
Boundary preset(const std::string& name);

std::string format_double(double v);

std::string spectrum_csv(const SpectrumReport& r);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string comb_csv(const std::vector<CombReport>& rows);
std::string battery_csv(const std::vector<BatteryRow>& rows);
std::string mesh_csv(const Mesh& m);
std::string matrix_csv(const CMatrix& A);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace kslab
