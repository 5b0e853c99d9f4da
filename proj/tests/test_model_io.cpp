#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cis/model_io.hpp"

using namespace cis;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::string data_path(const std::string& name) {
    return std::string(CIS_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("the bundled 4-bus system loads with the reference entries") {
    LtiSystem sys = load_system(data_path("example7_1.json"));
    REQUIRE(sys.state_dim() == 4);
    CHECK(sys.A(0, 0) == -4.03);
    CHECK(sys.A(0, 1) == 1.48);
    CHECK(sys.A(3, 3) == -1.25);
    CHECK(sys.B.col(0) == VectorXd::Unit(4, 0));
    CHECK(sys.C.row(0).transpose() == VectorXd::Unit(4, 2));
    REQUIRE(sys.cone.has_value());
    CHECK(sys.cone->kind() == ConeKind::Orthant);
}

TEST_CASE("system files reject malformed content with field-level messages") {
    std::string base = R"({"schema_version":1,"A":[[-1,0],[0,-1]]})";

    auto expect_reject = [&](const std::string& body, const char* fragment) {
        std::string path = temp_file("cis_bad_system.json");
        write_file(path, body);
        try {
            (void)load_system_file(path);
            FAIL_CHECK("expected rejection for " << fragment);
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
        std::remove(path.c_str());
    };

    expect_reject(R"({"schema_version":1,"A":[[-1,0],[0,-1]],"b_index":[7]})",
                  "out of range");
    expect_reject(
        R"({"schema_version":1,"A":[[-1,0],[0,-1]],"B":[[1],[0]],"b_index":[1]})",
        "not both");
    expect_reject(R"({"schema_version":1,"A":[[-1,0],[0,-1]],"mystery":3})",
                  "unknown field");
    expect_reject(R"({"schema_version":2,"A":[[-1,0],[0,-1]]})", "schema_version");
    expect_reject(R"({"schema_version":1,"A":[[-1,0],[0,-1],[0,0]]})", "square");
    expect_reject(R"({"schema_version":1,"A":[[-1,0],[0]]})", "ragged");

    std::string ok_path = temp_file("cis_ok_system.json");
    write_file(ok_path, base);
    CHECK(load_system(ok_path).input_dim() == 0);
    std::remove(ok_path.c_str());
}

TEST_CASE("bundled fixtures round-trip byte for byte") {
    for (const char* name : {"example7_1.json", "swing9.json"}) {
        SystemFile f = load_system_file(data_path(name));
        CHECK(system_file_to_json(f) == slurp(data_path(name)));
    }
    Digraph g = load_graph(data_path("eq5_1_graph.json"));
    CHECK(graph_to_json(g) == slurp(data_path("eq5_1_graph.json")));
}

TEST_CASE("graph files parse and validate") {
    std::string path = temp_file("cis_graph.json");
    write_file(path, R"({"n":3,"edges":[{"to":1,"from":2,"w":1.5}]})");
    Digraph g = load_graph(path);
    CHECK(g.node_count() == 3);
    CHECK(g.weight(0, 1) == 1.5);
    std::remove(path.c_str());

    write_file(path, R"({"n":3,"edges":[{"to":1,"from":9,"w":1.0}]})");
    CHECK_THROWS(load_graph(path));
    std::remove(path.c_str());

    write_file(path, R"({"n":3,"edges":[{"to":1,"from":2,"w":1.0,"label":"x"}]})");
    CHECK_THROWS(load_graph(path));
    std::remove(path.c_str());
}

TEST_CASE("attack plans round-trip through JSON") {
    LtiSystem sys = load_system(data_path("example7_1.json"));
    VectorXd x0(4);
    x0 << 12.5822, 10.0375, 13.4447, 14.7301;
    AttackPlan plan = synth_real_attack(sys, -1.25, x0, 15.0);
    plan.cone_feasible = true;

    std::string path = temp_file("cis_plan.json");
    save_plan(plan, path);
    AttackPlan back = load_plan(path);
    std::remove(path.c_str());

    CHECK(back.s0 == plan.s0);
    CHECK((back.zeta - plan.zeta).norm() == 0.0);
    CHECK((back.d0 - plan.d0).norm() == 0.0);
    CHECK(back.x_spoof == plan.x_spoof);
    CHECK(back.cone_feasible);
    CHECK(back.multiplicity == plan.multiplicity);

    // canonical serialization is stable
    CHECK(plan_to_json(back) == plan_to_json(plan));
}

TEST_CASE("droop model generator reproduces the reference 4-bus matrix") {
    Digraph lines(4);
    auto link = [&](int a, int b, double w) {
        lines.add_edge(a, b, w);
        lines.add_edge(b, a, w);
    };
    link(0, 1, 1.48);
    link(1, 2, 1.57);
    link(2, 3, 0.64);
    VectorXd kappa(4);
    kappa << 2.55, 0.52, 1.03, 0.61;

    LtiSystem sys = gen_droop_network(lines, VectorXd::Ones(4), VectorXd::Ones(4), kappa);
    MatrixXd reference(4, 4);
    reference << -4.03, 1.48, 0, 0, 1.48, -3.57, 1.57, 0, 0, 1.57, -3.24, 0.64, 0, 0,
        0.64, -1.25;
    CHECK((sys.A - reference).cwiseAbs().maxCoeff() <= 1e-14);
    REQUIRE(sys.cone.has_value());
    CHECK(sys.cone->kind() == ConeKind::Orthant);
}

TEST_CASE("droop generator edge cases") {
    LtiSystem iso = gen_droop_network(Digraph(3), VectorXd::Ones(3), VectorXd::Ones(3),
                                      VectorXd::Ones(3));
    CHECK(iso.A == MatrixXd(-MatrixXd::Identity(3, 3)));

    // two buses, equal rates: the off-diagonal couplings are symmetric
    Digraph pair(2);
    pair.add_edge(0, 1, 0.7);
    pair.add_edge(1, 0, 0.7);
    LtiSystem two = gen_droop_network(pair, VectorXd::Ones(2), VectorXd::Ones(2),
                                      VectorXd::Ones(2));
    CHECK(two.A(0, 1) == two.A(1, 0));
    CHECK(two.A(0, 1) == doctest::Approx(0.7));

    Digraph lop(2);
    lop.add_edge(0, 1, 0.7);  // one-sided line
    CHECK_THROWS_AS((void)gen_droop_network(lop, VectorXd::Ones(2), VectorXd::Ones(2),
                                            VectorXd::Ones(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)gen_droop_network(pair, VectorXd::Ones(2), VectorXd::Zero(2),
                                            VectorXd::Ones(2)),
                    std::invalid_argument);
}

TEST_CASE("swing model generator") {
    Digraph pair(2);
    pair.add_edge(0, 1, 2.0);
    pair.add_edge(1, 0, 2.0);

    LtiSystem unit =
        gen_swing_network(pair, VectorXd::Ones(2), VectorXd::Ones(2));
    MatrixXd L = laplacian(pair);
    CHECK(unit.A.topRightCorner(2, 2) == MatrixXd::Identity(2, 2));
    CHECK(unit.A.bottomLeftCorner(2, 2) == MatrixXd(-L));
    CHECK(unit.A.bottomRightCorner(2, 2) == MatrixXd(-MatrixXd::Identity(2, 2)));

    LtiSystem solo = gen_swing_network(Digraph(1), VectorXd::Constant(1, 2.0),
                                       VectorXd::Constant(1, 0.5));
    MatrixXd expected(2, 2);
    expected << 0, 1, 0, -0.25;
    CHECK(solo.A == expected);

    CHECK_THROWS_AS(
        (void)gen_swing_network(pair, VectorXd::Zero(2), VectorXd::Ones(2)),
        std::invalid_argument);
}

TEST_CASE("trajectory CSV layout") {
    LtiSystem sys;
    sys.A = -MatrixXd::Identity(2, 2);
    sys.B = MatrixXd::Zero(2, 1);
    sys.C = MatrixXd::Identity(2, 2).topRows(1);
    Trajectory traj = simulate(sys, VectorXd::Ones(2), nullptr, 0.01, 1e-2);

    std::string path = temp_file("cis_traj.csv");
    write_trajectory_csv(traj, path);
    std::string text = slurp(path);
    std::remove(path.c_str());

    CHECK(text.rfind("t,x_1,x_2,y_1,label\n", 0) == 0);
    CHECK(text.find("nominal") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + two steps
}
