#include "cis/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace cis {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& where) {
    if (!j.is_object()) throw std::runtime_error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::runtime_error(where + ": unknown field \"" + it.key() + "\"");
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw std::runtime_error(where + ": expected a nonempty array of rows");
    const size_t rows = j.size();
    if (!j[0].is_array())
        throw std::runtime_error(where + ": expected rows to be arrays");
    const size_t cols = j[0].size();
    Eigen::MatrixXd M(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::runtime_error(where + ": ragged row " + std::to_string(i + 1));
        for (size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw std::runtime_error(where + ": non-numeric entry");
            M(i, k) = j[i][k].get<double>();
        }
    }
    return M;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::runtime_error(where + ": expected an array");
    Eigen::VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw std::runtime_error(where + ": non-numeric entry");
        v(i) = j[i].get<double>();
    }
    return v;
}

json matrix_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

ConeSpec parse_cone(const json& j, int state_dim, const std::string& where) {
    expect_keys(j, {"kind", "n", "facets"}, where);
    if (!j.contains("kind") || !j["kind"].is_string())
        throw std::runtime_error(where + ": missing cone kind");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::runtime_error(where + ": missing cone dimension n");
    const std::string kind = j["kind"].get<std::string>();
    const int n = j["n"].get<int>();
    auto check_state = [&](const ConeSpec& c) {
        if (state_dim > 0 && c.ambient_dim() != state_dim)
            throw std::runtime_error(where + ": cone dimension " +
                                     std::to_string(c.ambient_dim()) +
                                     " does not match the state dimension " +
                                     std::to_string(state_dim));
        return c;
    };
    if (kind == "orthant") return check_state(ConeSpec::orthant(n));
    if (kind == "lorentz") return check_state(ConeSpec::lorentz(n));
    if (kind == "psd") return check_state(ConeSpec::psd(n));
    if (kind == "polyhedral") {
        if (!j.contains("facets"))
            throw std::runtime_error(where + ": polyhedral cone needs facets");
        return check_state(ConeSpec::polyhedral(parse_matrix(j["facets"], where + ".facets")));
    }
    throw std::runtime_error(where + ": unknown cone kind \"" + kind + "\"");
}

json cone_json(const ConeSpec& cone) {
    json j;
    j["kind"] = cone.kind_name();
    switch (cone.kind()) {
        case ConeKind::PsdSvec:
            j["n"] = cone.psd_order();
            break;
        case ConeKind::Polyhedral:
            j["n"] = cone.ambient_dim();
            j["facets"] = matrix_json(cone.facet_matrix());
            break;
        default:
            j["n"] = cone.ambient_dim();
    }
    return j;
}

std::vector<int> parse_index_list(const json& j, int n, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw std::runtime_error(where + ": expected a nonempty index array");
    std::vector<int> out;
    for (const auto& e : j) {
        if (!e.is_number_integer())
            throw std::runtime_error(where + ": indices must be integers");
        int v = e.get<int>();
        if (v < 1 || v > n)
            throw std::runtime_error(where + ": index " + std::to_string(v) +
                                     " out of range 1.." + std::to_string(n));
        out.push_back(v);
    }
    return out;
}

json complex_json(const std::complex<double>& z) {
    return json{{"im", z.imag()}, {"re", z.real()}};
}

std::complex<double> parse_complex(const json& j, const std::string& where) {
    expect_keys(j, {"re", "im"}, where);
    if (!j.contains("re") || !j.contains("im"))
        throw std::runtime_error(where + ": complex value needs re and im");
    return {j["re"].get<double>(), j["im"].get<double>()};
}

json cvector_json(const Eigen::VectorXcd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
    return a;
}

Eigen::VectorXcd parse_cvector(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::runtime_error(where + ": expected an array");
    Eigen::VectorXcd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(i) = parse_complex(j[i], where);
    return v;
}

}  // namespace

LtiSystem SystemFile::to_system() const {
    LtiSystem sys;
    sys.A = A;
    const int n = static_cast<int>(A.rows());
    if (B) {
        sys.B = *B;
    } else if (!b_index.empty()) {
        sys.B = Eigen::MatrixXd::Zero(n, b_index.size());
        for (size_t k = 0; k < b_index.size(); ++k) sys.B(b_index[k] - 1, k) = 1.0;
    } else {
        sys.B.resize(n, 0);
    }
    if (C) {
        sys.C = *C;
    } else if (!c_index.empty()) {
        sys.C = Eigen::MatrixXd::Zero(c_index.size(), n);
        for (size_t k = 0; k < c_index.size(); ++k) sys.C(k, c_index[k] - 1) = 1.0;
    } else {
        sys.C.resize(0, n);
    }
    sys.cone = cone;
    sys.validate();
    return sys;
}

SystemFile load_system_file(const std::string& path) {
    json j = read_json(path);
    expect_keys(j, {"schema_version", "A", "B", "C", "b_index", "c_index", "cone", "graph"},
                path);
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw std::runtime_error(path + ": schema_version must be 1");
    if (!j.contains("A")) throw std::runtime_error(path + ": missing A");

    SystemFile f;
    f.A = parse_matrix(j["A"], path + ".A");
    if (f.A.rows() != f.A.cols())
        throw std::runtime_error(path + ": A must be square");
    const int n = static_cast<int>(f.A.rows());

    if (j.contains("B") && j.contains("b_index"))
        throw std::runtime_error(path + ": give B or b_index, not both");
    if (j.contains("C") && j.contains("c_index"))
        throw std::runtime_error(path + ": give C or c_index, not both");
    if (j.contains("B")) {
        f.B = parse_matrix(j["B"], path + ".B");
        if (f.B->rows() != n) throw std::runtime_error(path + ": B must have n rows");
    }
    if (j.contains("b_index")) f.b_index = parse_index_list(j["b_index"], n, path + ".b_index");
    if (j.contains("C")) {
        f.C = parse_matrix(j["C"], path + ".C");
        if (f.C->cols() != n) throw std::runtime_error(path + ": C must have n columns");
    }
    if (j.contains("c_index")) f.c_index = parse_index_list(j["c_index"], n, path + ".c_index");
    if (j.contains("cone")) f.cone = parse_cone(j["cone"], n, path + ".cone");
    if (j.contains("graph")) {
        if (!j["graph"].is_string())
            throw std::runtime_error(path + ": graph reference must be a string");
        f.graph_ref = j["graph"].get<std::string>();
    }
    f.to_system();  // dimension cross-checks before handing the file back
    return f;
}

std::string system_file_to_json(const SystemFile& file) {
    json j;
    j["schema_version"] = file.schema_version;
    j["A"] = matrix_json(file.A);
    if (file.B) j["B"] = matrix_json(*file.B);
    if (!file.b_index.empty()) j["b_index"] = file.b_index;
    if (file.C) j["C"] = matrix_json(*file.C);
    if (!file.c_index.empty()) j["c_index"] = file.c_index;
    if (file.cone) j["cone"] = cone_json(*file.cone);
    if (file.graph_ref) j["graph"] = *file.graph_ref;
    return j.dump(2) + "\n";
}

void save_system_file(const SystemFile& file, const std::string& path) {
    write_text(path, system_file_to_json(file));
}

LtiSystem load_system(const std::string& path) {
    return load_system_file(path).to_system();
}

Digraph load_graph(const std::string& path) {
    json j = read_json(path);
    expect_keys(j, {"n", "edges"}, path);
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::runtime_error(path + ": missing node count n");
    const int n = j["n"].get<int>();
    Digraph g(n);
    if (j.contains("edges")) {
        if (!j["edges"].is_array())
            throw std::runtime_error(path + ": edges must be an array");
        for (const auto& e : j["edges"]) {
            expect_keys(e, {"to", "from", "w"}, path + ".edges[]");
            if (!e.contains("to") || !e.contains("from") || !e.contains("w"))
                throw std::runtime_error(path + ": edge needs to, from, w");
            int to = e["to"].get<int>(), from = e["from"].get<int>();
            if (to < 1 || to > n || from < 1 || from > n)
                throw std::runtime_error(path + ": edge endpoint out of range");
            g.add_edge(to - 1, from - 1, e["w"].get<double>());
        }
    }
    return g;
}

std::string graph_to_json(const Digraph& g) {
    json j;
    j["n"] = g.node_count();
    json edges = json::array();
    for (const auto& [edge, w] : g.edges()) {
        json e;
        e["to"] = edge.first + 1;
        e["from"] = edge.second + 1;
        e["w"] = w;
        edges.push_back(e);
    }
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

void save_graph(const Digraph& g, const std::string& path) {
    write_text(path, graph_to_json(g));
}

AttackPlan load_plan(const std::string& path) {
    json j = read_json(path);
    expect_keys(j,
                {"schema_version", "s0", "d0", "zeta", "l1", "l2", "x0", "x_spoof",
                 "cone_feasible", "provenance"},
                path);
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw std::runtime_error(path + ": schema_version must be 1");
    AttackPlan p;
    p.s0 = parse_complex(j.at("s0"), path + ".s0");
    p.d0 = parse_cvector(j.at("d0"), path + ".d0");
    p.zeta = parse_cvector(j.at("zeta"), path + ".zeta");
    p.l1 = j.at("l1").get<double>();
    p.l2 = j.at("l2").get<double>();
    p.x0 = parse_vector(j.at("x0"), path + ".x0");
    p.x_spoof = parse_vector(j.at("x_spoof"), path + ".x_spoof");
    p.cone_feasible = j.at("cone_feasible").get<bool>();
    if (j.contains("provenance")) {
        const json& prov = j["provenance"];
        expect_keys(prov, {"residual", "tol_zero", "multiplicity"}, path + ".provenance");
        if (prov.contains("residual")) p.residual = prov["residual"].get<double>();
        if (prov.contains("tol_zero")) p.tol_zero = prov["tol_zero"].get<double>();
        if (prov.contains("multiplicity")) p.multiplicity = prov["multiplicity"].get<int>();
    }
    return p;
}

std::string plan_to_json(const AttackPlan& plan) {
    json j;
    j["schema_version"] = 1;
    j["s0"] = complex_json(plan.s0);
    j["d0"] = cvector_json(plan.d0);
    j["zeta"] = cvector_json(plan.zeta);
    j["l1"] = plan.l1;
    j["l2"] = plan.l2;
    j["x0"] = vector_json(plan.x0);
    j["x_spoof"] = vector_json(plan.x_spoof);
    j["cone_feasible"] = plan.cone_feasible;
    j["provenance"] = {{"multiplicity", plan.multiplicity},
                       {"residual", plan.residual},
                       {"tol_zero", plan.tol_zero}};
    return j.dump(2) + "\n";
}

void save_plan(const AttackPlan& plan, const std::string& path) {
    write_text(path, plan_to_json(plan));
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ostringstream out;
    out.precision(15);
    out << "t";
    for (Eigen::Index i = 0; i < traj.states.cols(); ++i) out << ",x_" << (i + 1);
    for (Eigen::Index i = 0; i < traj.outputs.cols(); ++i) out << ",y_" << (i + 1);
    out << ",label\n";
    for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
        out << traj.times(k);
        for (Eigen::Index i = 0; i < traj.states.cols(); ++i)
            out << "," << traj.states(k, i);
        for (Eigen::Index i = 0; i < traj.outputs.cols(); ++i)
            out << "," << traj.outputs(k, i);
        out << "," << to_string(traj.label) << "\n";
    }
    write_text(path, out.str());
}

LtiSystem gen_droop_network(const Digraph& susceptance, const Eigen::VectorXd& V_bar,
                            const Eigen::VectorXd& tau, const Eigen::VectorXd& kappa) {
    const int n = susceptance.node_count();
    if (V_bar.size() != n || tau.size() != n || kappa.size() != n)
        throw DimensionError("gen_droop_network: parameter vectors must have n entries");
    if ((tau.array() <= 0.0).any())
        throw std::invalid_argument("gen_droop_network: time constants must be positive");
    if ((kappa.array() <= 0.0).any())
        throw std::invalid_argument("gen_droop_network: controller gains must be positive");
    if ((V_bar.array() <= 0.0).any())
        throw std::invalid_argument("gen_droop_network: operating voltages must be positive");
    for (const auto& [edge, w] : susceptance.edges())
        if (std::abs(susceptance.weight(edge.second, edge.first) - w) > 1e-12 * w)
            throw std::invalid_argument(
                "gen_droop_network: susceptance pattern must be symmetric");

    Eigen::MatrixXd B_g = laplacian(susceptance);  // susceptance Laplacian
    Eigen::VectorXd rate = V_bar.cwiseQuotient(tau);
    Eigen::MatrixXd A =
        -(rate.asDiagonal() * (Eigen::MatrixXd(kappa.asDiagonal()) + B_g));
    LtiSystem sys;
    sys.A = A;
    sys.B.resize(n, 0);
    sys.C.resize(0, n);
    sys.cone = ConeSpec::orthant(n);
    return sys;
}

LtiSystem gen_swing_network(const Digraph& lines, const Eigen::VectorXd& inertia,
                            const Eigen::VectorXd& damping) {
    const int n = lines.node_count();
    if (inertia.size() != n || damping.size() != n)
        throw DimensionError("gen_swing_network: parameter vectors must have n entries");
    if ((inertia.array() <= 0.0).any())
        throw std::invalid_argument("gen_swing_network: inertias must be positive");
    if ((damping.array() <= 0.0).any())
        throw std::invalid_argument("gen_swing_network: dampings must be positive");

    Eigen::MatrixXd L = laplacian(lines);
    Eigen::VectorXd inv_m = inertia.cwiseInverse();
    LtiSystem sys;
    sys.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    sys.A.topRightCorner(n, n).setIdentity();
    sys.A.bottomLeftCorner(n, n) = -(inv_m.asDiagonal() * L);
    sys.A.bottomRightCorner(n, n) =
        -Eigen::MatrixXd((inv_m.cwiseProduct(damping)).asDiagonal());
    sys.B.resize(2 * n, 0);
    sys.C.resize(0, 2 * n);
    return sys;
}

}  // namespace cis
