#include "kslab/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "kslab/errors.hpp"

namespace kslab {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) throw InputError(std::string(where) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw InputError(std::string(where) + ": unknown key '" + it.key() + "'");
}

double number(const json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw InputError(std::string(where) + ": missing numeric '" + key + "'");
    return j.at(key).get<double>();
}

Complex point(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError(std::string(where) + ": points are [x, y] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> numbers_after_colon(const std::string& s, std::size_t expected, const std::string& name) {
    std::vector<double> out;
    auto colon = s.find(':');
    if (colon == std::string::npos) return out;
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError("preset '" + name + "': bad number '" + tok + "'");
        }
    }
    if (out.size() != expected) throw InputError("preset '" + name + "': expected " + std::to_string(expected) + " values");
    return out;
}

}  // namespace

Boundary parse_curve_spec(const json& doc) {
    if (!doc.is_object() || doc.empty()) throw InputError("curve spec: expected a non-empty object");
    if (doc.contains("polygon")) {
        only_keys(doc, {"polygon"}, "curve spec");
        std::vector<Complex> v;
        for (const json& p : doc.at("polygon")) v.push_back(point(p, "polygon"));
        return make_polygon(v);
    }
    if (doc.contains("ellipse")) {
        only_keys(doc, {"ellipse"}, "curve spec");
        const json& e = doc.at("ellipse");
        only_keys(e, {"a", "b"}, "ellipse");
        return make_ellipse(number(e, "a", "ellipse"), number(e, "b", "ellipse"));
    }
    if (doc.contains("circle")) {
        only_keys(doc, {"circle"}, "curve spec");
        const json& c = doc.at("circle");
        only_keys(c, {"r"}, "circle");
        return make_circle(number(c, "r", "circle"));
    }
    if (doc.contains("wedge")) {
        only_keys(doc, {"wedge"}, "curve spec");
        const json& w = doc.at("wedge");
        only_keys(w, {"theta"}, "wedge");
        return make_wedge(number(w, "theta", "wedge"));
    }
    if (doc.contains("comb")) {
        only_keys(doc, {"comb"}, "curve spec");
        const json& c = doc.at("comb");
        only_keys(c, {"n", "eps"}, "comb");
        if (!c.contains("n") || !c.at("n").is_number_integer()) throw InputError("comb: 'n' must be an integer");
        return make_comb({c.at("n").get<int>(), number(c, "eps", "comb")});
    }
    if (doc.contains("arcs")) {
        only_keys(doc, {"arcs", "closed"}, "curve spec");
        bool closed = doc.value("closed", false);
        std::vector<Arc> arcs;
        for (const json& a : doc.at("arcs")) {
            if (!a.is_object() || !a.contains("kind") || !a.at("kind").is_string())
                throw InputError("arcs: every arc needs a string 'kind'");
            std::string kind = a.at("kind").get<std::string>();
            if (kind == "segment") {
                only_keys(a, {"kind", "from", "to"}, "segment");
                arcs.push_back(Arc::segment(point(a.at("from"), "segment"), point(a.at("to"), "segment")));
            } else if (kind == "circular_arc") {
                only_keys(a, {"kind", "center", "radius", "phi0", "phi1"}, "circular_arc");
                if (!a.contains("center")) throw InputError("circular_arc: missing 'center'");
                arcs.push_back(Arc::circular(point(a.at("center"), "circular_arc"), number(a, "radius", "circular_arc"),
                                             number(a, "phi0", "circular_arc"), number(a, "phi1", "circular_arc")));
            } else {
                throw InputError("arcs: unknown kind '" + kind + "'");
            }
        }
        return Boundary::single_chain(std::move(arcs), closed);
    }
    throw InputError("curve spec: no recognised geometry key");
}

Boundary load_curve_spec(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw InputError("curve spec '" + path + "': " + e.what());
    }
    return parse_curve_spec(doc);
}

Boundary preset(const std::string& name) {
    const std::string base = name.substr(0, name.find(':'));
    const bool has_args = name.find(':') != std::string::npos;
    if (base == "square" && !has_args) return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    if (base == "triangle" && !has_args) return make_polygon({{0, 0}, {1, 0}, {0, 1}});
    if (base == "circle") {
        if (!has_args) return make_circle(1.0);
        return make_circle(numbers_after_colon(name, 1, name)[0]);
    }
    if (base == "ellipse") {
        if (!has_args) return make_ellipse(1.0, 0.8);
        auto v = numbers_after_colon(name, 2, name);
        return make_ellipse(v[0], v[1]);
    }
    if (base == "wedge" && has_args) return make_wedge(numbers_after_colon(name, 1, name)[0]);
    if (base == "comb" && has_args) {
        auto v = numbers_after_colon(name, 2, name);
        if (v[0] != static_cast<int>(v[0])) throw InputError("preset comb: n must be an integer");
        return make_comb({static_cast<int>(v[0]), v[1]});
    }
    throw InputError("unknown preset '" + name + "'");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string spectrum_csv(const SpectrumReport& r) {
    std::string out = "index,mu\n";
    for (std::size_t k = 0; k < r.mu.size(); ++k) out += std::to_string(k) + "," + format_double(r.mu[k]) + "\n";
    return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "N,op_norm,fill,max_gap\n";
    for (const ConvergenceRow& r : rows)
        out += std::to_string(r.n) + "," + format_double(r.op_norm) + "," + format_double(r.fill) + "," +
               format_double(r.max_gap) + "\n";
    return out;
}

std::string comb_csv(const std::vector<CombReport>& rows) {
    std::string out = "n,eps,af0_norm_sq,lower_bound,implied_cauchy_norm_sq\n";
    for (const CombReport& r : rows)
        out += std::to_string(r.n) + "," + format_double(r.eps) + "," + format_double(r.af0_norm_sq_exact) + "," +
               format_double(r.lower_bound) + "," + format_double(r.implied_cauchy_norm_sq) + "\n";
    return out;
}

std::string battery_csv(const std::vector<BatteryRow>& rows) {
    std::string out = "M,p_id,p_sup,block,numeric_norm,bound,pass\n";
    for (const BatteryRow& r : rows)
        out += format_double(r.M) + "," + r.p_id + "," + format_double(r.p_sup) + "," + r.block + "," +
               format_double(r.numeric_norm) + "," + format_double(r.bound) + "," + (r.pass ? "1" : "0") + "\n";
    return out;
}

std::string mesh_csv(const Mesh& m) {
    std::string out = "t,re_z,im_z,re_T,im_T,w\n";
    for (const MeshNode& n : m.nodes)
        out += format_double(n.t) + "," + format_double(n.z.real()) + "," + format_double(n.z.imag()) + "," +
               format_double(n.T.real()) + "," + format_double(n.T.imag()) + "," + format_double(n.w) + "\n";
    return out;
}

std::string matrix_csv(const CMatrix& A) {
    std::string out = "i,j,re,im\n";
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," + format_double(A(i, j).real()) + "," +
                   format_double(A(i, j).imag()) + "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw InputError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace kslab
