#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cis/attack.hpp"
#include "cis/digraph.hpp"
#include "cis/lti.hpp"
#include "cis/simulate.hpp"

namespace cis {

// On-disk system description. B/C may be given densely or as 1-based basis
// indices ("b_index"/"c_index"); exactly one form per side. Unknown fields are
// rejected so config typos surface instead of being ignored.
struct SystemFile {
    int schema_version = 1;
    Eigen::MatrixXd A;
    std::optional<Eigen::MatrixXd> B;
    std::optional<Eigen::MatrixXd> C;
    std::vector<int> b_index;  // 1-based, as stored
    std::vector<int> c_index;  // 1-based, as stored
    std::optional<ConeSpec> cone;
    std::optional<std::string> graph_ref;

    LtiSystem to_system() const;
};

SystemFile load_system_file(const std::string& path);
void save_system_file(const SystemFile& file, const std::string& path);
std::string system_file_to_json(const SystemFile& file);

LtiSystem load_system(const std::string& path);

// Graph file: {"n": int, "edges": [{"to": i, "from": j, "w": a_ij}, ...]},
// 1-based nodes, "to" receives from "from".
Digraph load_graph(const std::string& path);
void save_graph(const Digraph& g, const std::string& path);
std::string graph_to_json(const Digraph& g);

AttackPlan load_plan(const std::string& path);
void save_plan(const AttackPlan& plan, const std::string& path);
std::string plan_to_json(const AttackPlan& plan);

// CSV columns: t, x_1..x_n, y_1..y_l, label.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Linearized quadratic-droop voltage-magnitude model on a symmetric
// susceptance graph: A = -diag(V_bar) diag(tau)^{-1} (diag(kappa) + B_G)
// with B_G the susceptance Laplacian. Metzler by construction; the returned
// system carries the positive orthant and empty B/C.
LtiSystem gen_droop_network(const Digraph& susceptance, const Eigen::VectorXd& V_bar,
                            const Eigen::VectorXd& tau, const Eigen::VectorXd& kappa);

// Linearized swing-equation network: state [theta; theta_dot], dynamics
// [[0, I], [-M^{-1} L_k, -M^{-1} D]] with L_k the Laplacian of the line
// stiffness graph.
LtiSystem gen_swing_network(const Digraph& lines, const Eigen::VectorXd& inertia,
                            const Eigen::VectorXd& damping);

}  // namespace cis
