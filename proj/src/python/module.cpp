#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kslab/cli.hpp"
#include "kslab/comb.hpp"
#include "kslab/errors.hpp"
#include "kslab/io.hpp"
#include "kslab/kernels.hpp"
#include "kslab/perturb.hpp"
#include "kslab/projections.hpp"
#include "kslab/spectra.hpp"

namespace py = pybind11;
using namespace kslab;

namespace {

MeshParams params_from(int panels, int order, int levels, int endpoint) {
    MeshParams p;
    p.panels_per_arc = panels;
    p.order = order;
    p.grading_levels = levels;
    p.endpoint_levels = endpoint;
    return p;
}

py::dict spectrum_dict(const Boundary& b, const MeshParams& p, double delta) {
    OperatorMatrix A = assemble_ks(build_mesh(b, p));
    SpectrumReport r = eigs_skew(A);
    SpectrumInterval iv = essential_spectrum(b.corners());
    annotate(r, iv, delta);
    py::dict d;
    d["mu"] = r.mu;
    d["op_norm"] = r.op_norm;
    d["n"] = r.size;
    d["s_star"] = iv.s_star;
    d["fill_fraction"] = r.fill_fraction;
    d["max_gap"] = r.max_gap;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kerzman-Stein operator laboratory";

    auto base = py::register_exception<Error>(m, "KslabError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<AssemblyError>(m, "AssemblyError", base.ptr());
    py::register_exception<UnsupportedGeometry>(m, "UnsupportedGeometry", base.ptr());

    m.def("ks_kernel", &ks_kernel, py::arg("z"), py::arg("Tz"), py::arg("w"), py::arg("Tw"));
    m.def("symbol_phi", &symbol_phi, py::arg("xi"), py::arg("theta"));
    m.def(
        "wedge_sup_phi",
        [](double theta) {
            SupPhi s = wedge_sup_phi(theta);
            return py::make_tuple(s.s_star, s.xi_star);
        },
        py::arg("theta"), "(s_star, xi_star) for half-angle theta");
    m.def(
        "symbol_check",
        [](double theta, const std::vector<double>& xi) { return symbol_matches_kernel_ft(theta, xi).max_error; },
        py::arg("theta"), py::arg("xi"));

    m.def(
        "corners",
        [](const std::string& name) {
            std::vector<double> out;
            for (const Corner& c : preset(name).corners()) out.push_back(c.half_angle);
            return out;
        },
        py::arg("preset"), "corner half-angles of a preset geometry");

    m.def(
        "ks_matrix",
        [](const std::string& name, int panels, int order, int levels, int endpoint) {
            return assemble_ks(build_mesh(preset(name), params_from(panels, order, levels, endpoint))).m;
        },
        py::arg("preset"), py::arg("panels") = 4, py::arg("order") = 12, py::arg("grading_levels") = 16,
        py::arg("endpoint_levels") = -1);

    m.def(
        "spectrum",
        [](const std::string& name, int panels, int order, int levels, int endpoint, double delta) {
            return spectrum_dict(preset(name), params_from(panels, order, levels, endpoint), delta);
        },
        py::arg("preset"), py::arg("panels") = 4, py::arg("order") = 12, py::arg("grading_levels") = 16,
        py::arg("endpoint_levels") = -1, py::arg("delta") = 0.01);

    m.def("af0_norm_sq_exact", [](int n, double eps) { return af0_norm_sq_exact({n, eps}); }, py::arg("n"),
          py::arg("eps"));
    m.def("af0_norm_sq_matrix", [](int n, double eps) { return af0_norm_sq_matrix({n, eps}); }, py::arg("n"),
          py::arg("eps"));
    m.def("norm_lower_bound", &norm_lower_bound, py::arg("n"), py::arg("eps"));

    m.def(
        "projection_gap",
        [](const CMatrix& P, double tol) {
            ProjectionGap g = projection_gap(P, tol);
            py::dict d;
            d["gap"] = g.gap;
            d["predicted"] = g.predicted;
            d["norm"] = g.norm;
            return d;
        },
        py::arg("P"), py::arg("idem_tol") = 1e-12);

    m.def(
        "szego",
        [](double a, double b, std::size_t nodes) {
            Mesh mesh = build_periodic_mesh(make_ellipse(a, b), nodes);
            SzegoResult s = szego_from_ks(plemelj(assemble_cauchy(mesh)));
            py::dict d;
            d["S"] = s.s.m;
            d["idempotency_defect"] = s.report.idempotency_defect;
            d["self_adjoint_defect"] = s.report.self_adjoint_defect;
            d["cauchy_defect"] = s.report.cauchy_defect;
            d["ks_norm"] = s.report.ks_norm;
            d["min_singular_i_plus_a"] = s.report.min_singular_i_plus_a;
            std::vector<Complex> z, w;
            for (const MeshNode& n : mesh.nodes) {
                z.push_back(n.z);
                w.push_back(n.w);
            }
            d["z"] = z;
            d["w"] = w;
            return d;
        },
        py::arg("a") = 1.0, py::arg("b") = 0.8, py::arg("nodes") = 512);

    m.def("residual_bound", &residual_bound, py::arg("M"), py::arg("p_sup"));
    m.def("battery", []() {
        BatteryResult res = run_battery(default_battery());
        py::list rows;
        for (const BatteryRow& r : res.rows) {
            py::dict d;
            d["M"] = r.M;
            d["p_id"] = r.p_id;
            d["p_sup"] = r.p_sup;
            d["block"] = r.block;
            d["numeric_norm"] = r.numeric_norm;
            d["bound"] = r.bound;
            d["pass"] = r.pass;
            rows.append(d);
        }
        return rows;
    });

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"kslab"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "run the command line front end in-process; returns (exit code, stdout, stderr)");
}
