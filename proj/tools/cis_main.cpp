// cis: zero-dynamics attack synthesis and sensor-placement defense for
// cone-invariant systems and consensus networks.
//
// Exit codes: 0 success, 2 verdict failure (a requested check said "no"
// or a defense failed), 1 usage/runtime error.

#include <CLI11.hpp>
#include <complex>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "cis/defense.hpp"
#include "cis/model_io.hpp"
#include "cis/simulate.hpp"
#include "cis/zeros.hpp"

using nlohmann::json;
using namespace cis;

namespace {

constexpr int kExitVerdict = 2;

std::vector<double> parse_csv_numbers(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd x(v.size());
    for (size_t i = 0; i < v.size(); ++i) x(i) = v[i];
    return x;
}

std::vector<int> one_based(const std::vector<int>& idx) {
    std::vector<int> out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out[i] = idx[i] + 1;
    return out;
}

std::string fmt_complex(const std::complex<double>& z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    return os.str();
}

json complex_to_json(const std::complex<double>& z) {
    return json{{"im", z.imag()}, {"re", z.real()}};
}

json verdict_to_json(const DefenseVerdict& v) {
    json j;
    j["status"] = to_string(v.status);
    j["reason"] = to_string(v.reason);
    if (v.witness_zero) j["witness_zero"] = complex_to_json(*v.witness_zero);
    return j;
}

json report_to_json(const PlacementReport& r) {
    json j;
    j["rule"] = to_string(r.rule);
    j["sensor_set"] = one_based(r.sensor_set);
    j["groups"] = json::array();
    for (const auto& g : r.groups)
        j["groups"].push_back(
            {{"attack_set", one_based(g.attack_set)}, {"claimed", to_string(g.claimed)}});
    if (!r.per_pair.empty()) {
        j["per_pair"] = json::array();
        for (const auto& p : r.per_pair) {
            json e = verdict_to_json(p.verdict);
            e["b"] = p.b_index + 1;
            e["c"] = p.c_index + 1;
            j["per_pair"].push_back(e);
        }
    }
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

void print_set(std::ostream& os, const std::vector<int>& s) {
    os << "{";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << (s[i] + 1);
    os << "}";
}

void print_report(const PlacementReport& r) {
    std::cout << "rule: " << to_string(r.rule) << "\n  sensors Pi = ";
    print_set(std::cout, r.sensor_set);
    std::cout << "\n";
    for (const auto& g : r.groups) {
        std::cout << "  attacks Lambda = ";
        print_set(std::cout, g.attack_set);
        std::cout << "  claimed: " << to_string(g.claimed) << "\n";
    }
    int failed = 0;
    for (const auto& p : r.per_pair)
        if (p.verdict.status == DefenseStatus::Failed) ++failed;
    if (!r.per_pair.empty())
        std::cout << "  verified pairs: " << r.per_pair.size() << " (" << failed
                  << " failed)\n";
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
}

bool report_has_failure(const PlacementReport& r) {
    for (const auto& p : r.per_pair)
        if (p.verdict.status == DefenseStatus::Failed) return true;
    return false;
}

ConeSpec cone_from_flag(const std::string& kind, int n) {
    if (kind == "orthant") return ConeSpec::orthant(n);
    if (kind == "lorentz") return ConeSpec::lorentz(n);
    if (kind == "psd") {
        int order = static_cast<int>((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0);
        if (order * (order + 1) / 2 != n)
            throw std::runtime_error("state dimension is not a triangular number; "
                                     "a PSD cone does not fit");
        return ConeSpec::psd(order);
    }
    throw std::runtime_error("unknown cone kind \"" + kind +
                             "\" (try orthant|lorentz|psd)");
}

struct GlobalFlags {
    double tol = kMembershipTol;
    std::uint64_t seed = 0;
    bool as_json = false;
};

int cmd_classify(const GlobalFlags& gf, const std::string& system_path,
                 const std::string& cone_kind, int samples,
                 const std::vector<std::string>& require) {
    LtiSystem sys = load_system(system_path);
    if (!cone_kind.empty()) sys.cone = cone_from_flag(cone_kind, sys.state_dim());
    if (!sys.cone)
        throw std::runtime_error("classification needs a cone (file field or --cone)");

    ClassifyOptions opts;
    opts.samples = samples;
    opts.seed = gf.seed;
    opts.tol = gf.tol;
    ClassReport rep = classify(sys.A, *sys.cone, opts);

    if (gf.as_json) {
        json j;
        j["cone_invariant"] = to_string(rep.cone_invariant);
        j["cross_positive"] = to_string(rep.cross_positive);
        j["irreducible"] = to_string(rep.irreducible);
        j["k_positive"] = to_string(rep.k_positive);
        j["dominant_eig"] = rep.dominant_eig;
        if (!rep.notes.empty()) j["notes"] = rep.notes;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "cone           : " << sys.cone->kind_name() << " (dim "
                  << sys.cone->ambient_dim() << ")\n";
        std::cout << "cone_invariant : " << to_string(rep.cone_invariant) << "\n";
        std::cout << "cross_positive : " << to_string(rep.cross_positive) << "\n";
        std::cout << "irreducible    : " << to_string(rep.irreducible) << "\n";
        std::cout << "k_positive     : " << to_string(rep.k_positive) << "\n";
        std::cout << "dominant_eig   : " << rep.dominant_eig << "\n";
        for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
    }

    auto value_of = [&](const std::string& name) {
        if (name == "invariant") return rep.cone_invariant;
        if (name == "cross") return rep.cross_positive;
        if (name == "irreducible") return rep.irreducible;
        if (name == "kpositive") return rep.k_positive;
        throw std::runtime_error("unknown class \"" + name +
                                 "\" (invariant|cross|irreducible|kpositive)");
    };
    bool bad = false;
    if (require.empty()) {
        bad = rep.cone_invariant == TriState::No || rep.cross_positive == TriState::No ||
              rep.irreducible == TriState::No || rep.k_positive == TriState::No;
    } else {
        for (const auto& r : require) bad = bad || value_of(r) == TriState::No;
    }
    return bad ? kExitVerdict : 0;
}

int cmd_zeros(const GlobalFlags& gf, const std::string& system_path) {
    LtiSystem sys = load_system(system_path);
    auto zs = transmission_zeros(sys);
    if (gf.as_json) {
        json j;
        j["zeros"] = json::array();
        for (const auto& z : zs) j["zeros"].push_back(complex_to_json(z));
        std::cout << j.dump(2) << "\n";
    } else {
        if (zs.empty()) std::cout << "no finite transmission zeros\n";
        for (size_t k = 0; k < zs.size(); ++k)
            std::cout << "[" << (k + 1) << "] " << fmt_complex(zs[k]) << "\n";
    }
    return 0;
}

int cmd_attack(const GlobalFlags& gf, const std::string& system_path,
               const std::string& zero_arg, double zero_imag, const std::string& x0_csv,
               double l1, double l2, double scale, bool raw,
               const std::string& out_path) {
    LtiSystem sys = load_system(system_path);
    Eigen::VectorXd x0 = to_vector(parse_csv_numbers(x0_csv));

    std::complex<double> s0;
    if (!zero_arg.empty() && zero_arg[0] == '#') {
        auto zs = transmission_zeros(sys);
        size_t k = std::stoul(zero_arg.substr(1));
        if (k < 1 || k > zs.size())
            throw std::runtime_error("zero index out of range; the system has " +
                                     std::to_string(zs.size()) + " finite zeros");
        s0 = zs[k - 1];
    } else {
        s0 = {std::stod(zero_arg), zero_imag};
    }

    AttackPlan plan;
    const bool real_zero = std::abs(s0.imag()) <= 1e-12 * (1.0 + std::abs(s0.real()));
    if (real_zero && l2 == 0.0 && l1 == 1.0)
        plan = synth_real_attack(sys, s0.real(), x0, scale);
    else
        plan = synth_complex_attack(sys, s0, x0, l1, l2, scale);

    bool feasibility_known = false;
    if (sys.cone && !raw) {
        auto fr = cone_feasibility(plan, sys);
        plan = fr.plan;
        feasibility_known = true;
    }
    save_plan(plan, out_path);

    if (gf.as_json) {
        json j;
        j["s0"] = complex_to_json(plan.s0);
        j["multiplicity"] = plan.multiplicity;
        j["residual"] = plan.residual;
        j["cone_feasible"] = plan.cone_feasible;
        j["out"] = out_path;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "zero s0 = " << fmt_complex(plan.s0) << " (null-space multiplicity "
                  << plan.multiplicity << ")\n";
        std::cout << "d0 = [";
        for (int i = 0; i < plan.d0.size(); ++i)
            std::cout << (i ? ", " : "") << fmt_complex(plan.d0(i));
        std::cout << "]\n";
        std::cout << "x_spoof = " << plan.x_spoof.transpose() << "\n";
        if (feasibility_known)
            std::cout << "cone-feasible: " << (plan.cone_feasible ? "yes" : "no") << "\n";
        std::cout << "plan written to " << out_path << "\n";
    }
    return 0;
}

int cmd_defend(const GlobalFlags& gf, const std::string& system_path,
               const std::string& cone_kind, bool exhaustive, bool assume_irreducible) {
    LtiSystem sys = load_system(system_path);
    if (!cone_kind.empty()) sys.cone = cone_from_flag(cone_kind, sys.state_dim());
    if (!sys.cone)
        throw std::runtime_error("defend needs a cone (file field or --cone)");

    ClassifyOptions opts;
    opts.seed = gf.seed;
    opts.tol = gf.tol;

    const double scale = std::max(1.0, sys.A.cwiseAbs().maxCoeff());
    const double mre = max_real_eigenvalue(sys.A);
    PlacementReport report =
        (mre < -1e-8 * scale)
            ? placement_cone_stable(sys, *sys.cone, exhaustive, opts, assume_irreducible)
            : placement_cone_marginal(sys, *sys.cone, exhaustive, opts,
                                      assume_irreducible);

    if (gf.as_json)
        std::cout << report_to_json(report).dump(2) << "\n";
    else
        print_report(report);
    return report_has_failure(report) ? kExitVerdict : 0;
}

int cmd_mas(const GlobalFlags& gf, const std::string& graph_path, int order,
            const std::string& gains_path, double r, bool exhaustive) {
    Digraph g = load_graph(graph_path);
    std::vector<PlacementReport> reports;
    if (order == 1) {
        reports = placement_first_order(g, exhaustive);
    } else if (order == 2) {
        if (!gains_path.empty() && r > 0.0)
            throw std::runtime_error("give --gains or --r, not both");
        if (!gains_path.empty()) {
            std::ifstream in(gains_path);
            if (!in) throw std::runtime_error("cannot open " + gains_path);
            std::stringstream ss;
            ss << in.rdbuf();
            std::string text = ss.str();
            for (auto& ch : text)
                if (ch == '\n' || ch == ' ' || ch == '\t') ch = ',';
            Eigen::VectorXd gains = to_vector(parse_csv_numbers(text));
            reports.push_back(placement_second_order_damped(g, gains, exhaustive));
        } else if (r > 0.0) {
            reports.push_back(placement_second_order_velocity(g, r, exhaustive));
        } else {
            throw std::runtime_error("order 2 needs --gains {file} or --r {value}");
        }
    } else {
        throw std::runtime_error("--order must be 1 or 2");
    }

    bool failed = false;
    if (gf.as_json) {
        json j;
        j["reports"] = json::array();
        for (const auto& rep : reports) j["reports"].push_back(report_to_json(rep));
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& rep : reports) print_report(rep);
    }
    for (const auto& rep : reports) failed = failed || report_has_failure(rep);
    return failed ? kExitVerdict : 0;
}

int cmd_simulate(const GlobalFlags& gf, const std::string& system_path,
                 const std::string& plan_path, const std::string& x0_csv, bool spoofed,
                 double t_end, double dt, const std::string& out_path) {
    LtiSystem sys = load_system(system_path);
    std::optional<AttackPlan> plan;
    if (!plan_path.empty()) plan = load_plan(plan_path);

    Eigen::VectorXd x0;
    TrajectoryLabel label = TrajectoryLabel::Nominal;
    const AttackPlan* active = nullptr;
    if (spoofed) {
        if (!plan) throw std::runtime_error("--spoofed needs --attack");
        x0 = plan->x_spoof;
        label = TrajectoryLabel::Spoofed;
    } else if (plan) {
        x0 = x0_csv.empty() ? plan->x0 : to_vector(parse_csv_numbers(x0_csv));
        label = TrajectoryLabel::Attacked;
        active = &*plan;
    } else {
        if (x0_csv.empty()) throw std::runtime_error("--x0 is required without --attack");
        x0 = to_vector(parse_csv_numbers(x0_csv));
    }

    Trajectory traj = simulate(sys, x0, active, t_end, dt, label);
    write_trajectory_csv(traj, out_path);

    if (gf.as_json) {
        json j;
        j["rows"] = traj.times.size();
        j["diverged"] = traj.diverged;
        j["label"] = to_string(traj.label);
        j["out"] = out_path;
        if (sys.cone) j["cone_violation"] = cone_violation(traj, *sys.cone);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << traj.times.size() << " steps (" << to_string(traj.label)
                  << (traj.diverged ? ", diverged" : "") << ") written to " << out_path
                  << "\n";
        if (sys.cone)
            std::cout << "cone violation along the run: "
                      << cone_violation(traj, *sys.cone) << "\n";
    }
    return 0;
}

int cmd_verify(const GlobalFlags& gf, const std::string& system_path,
               const std::string& plan_path, double t_end, double dt) {
    LtiSystem sys = load_system(system_path);

    if (!plan_path.empty()) {
        // verify an attack plan: undetectability at the output
        AttackPlan plan = load_plan(plan_path);
        GapResult gap = undetectability_gap(sys, plan, t_end, dt);
        double violation = -1.0;
        if (sys.cone) {
            Trajectory attacked =
                simulate(sys, plan.x0, &plan, t_end, dt, TrajectoryLabel::Attacked);
            violation = cone_violation(attacked, *sys.cone);
        }
        const double threshold = 1e-6;
        bool undetectable = !gap.diverged && gap.gap <= threshold;
        if (gf.as_json) {
            json j;
            j["gap"] = gap.gap;
            j["diverged"] = gap.diverged;
            j["undetectable"] = undetectable;
            if (violation >= 0.0) j["cone_violation"] = violation;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "output gap sup_t |y_attacked - y_spoofed| = " << gap.gap << "\n";
            if (violation >= 0.0)
                std::cout << "cone violation of the attacked run: " << violation << "\n";
            std::cout << (undetectable ? "attack is undetectable at the output\n"
                                       : "attack is NOT undetectable\n");
        }
        return undetectable ? 0 : kExitVerdict;
    }

    DefenseVerdict v = (sys.input_dim() == 1 && sys.output_dim() == 1)
                           ? verify_defense(sys)
                           : verify_defense_mimo(sys);
    if (gf.as_json) {
        std::cout << verdict_to_json(v).dump(2) << "\n";
    } else {
        std::cout << "defense: " << to_string(v.status) << " (" << to_string(v.reason)
                  << ")";
        if (v.witness_zero) std::cout << " at s0 = " << fmt_complex(*v.witness_zero);
        std::cout << "\n";
    }
    return v.status == DefenseStatus::Failed ? kExitVerdict : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-dynamics attacks and sensor-placement defenses for "
                 "cone-invariant systems and consensus networks"};
    app.require_subcommand(1);

    GlobalFlags gf;
    app.add_option("--tol", gf.tol, "membership/rank tolerance");
    app.add_option("--seed", gf.seed, "seed for sampled checks");
    app.add_flag("--json", gf.as_json, "machine-readable output");

    std::string system_path, cone_kind, graph_path, plan_path, out_path;
    std::string zero_arg, x0_csv, gains_path;
    std::vector<std::string> require;
    int samples = 1000, order = 1;
    double l1 = 1.0, l2 = 0.0, scale = 1.0, r = 0.0, zero_imag = 0.0;
    double t_end = 10.0, dt = 1e-3;
    bool exhaustive = false, raw = false, spoofed = false, assume_irreducible = false;

    auto* classify_cmd = app.add_subcommand("classify", "matrix cone-class report");
    classify_cmd->add_option("--system", system_path)->required();
    classify_cmd->add_option("--cone", cone_kind, "override cone kind");
    classify_cmd->add_option("--samples", samples);
    classify_cmd->add_option("--require", require,
                             "classes that must not be 'no' "
                             "(invariant|cross|irreducible|kpositive)");

    auto* zeros_cmd = app.add_subcommand("zeros", "finite transmission zeros");
    zeros_cmd->add_option("--system", system_path)->required();

    auto* attack_cmd = app.add_subcommand("attack", "synthesize a zero-dynamics attack");
    attack_cmd->add_option("--system", system_path)->required();
    attack_cmd->add_option("--zero", zero_arg, "zero value or #k from `cis zeros`")
        ->required();
    attack_cmd->add_option("--zero-imag", zero_imag, "imaginary part of the zero");
    attack_cmd->add_option("--x0", x0_csv, "initial state, comma separated")->required();
    attack_cmd->add_option("--l1", l1);
    attack_cmd->add_option("--l2", l2);
    attack_cmd->add_option("--scale", scale, "null-vector scale factor");
    attack_cmd->add_flag("--raw", raw, "skip the cone-feasibility sign adjustment");
    attack_cmd->add_option("--out", out_path, "plan file")->required();

    auto* defend_cmd = app.add_subcommand("defend", "cone sensor-placement report");
    defend_cmd->add_option("--system", system_path)->required();
    defend_cmd->add_option("--cone", cone_kind, "override cone kind");
    defend_cmd->add_flag("--exhaustive", exhaustive, "verify every (b, c) pair");
    defend_cmd->add_flag("--assume-irreducible", assume_irreducible,
                         "assert K-irreducibility when sampling cannot certify it");

    auto* mas_cmd = app.add_subcommand("mas", "consensus-network placement report");
    mas_cmd->add_option("--graph", graph_path)->required();
    mas_cmd->add_option("--order", order, "agent dynamics order (1 or 2)")->required();
    mas_cmd->add_option("--gains", gains_path, "damping gains file (order 2)");
    mas_cmd->add_option("--r", r, "velocity coupling strength (order 2)");
    mas_cmd->add_flag("--exhaustive", exhaustive, "verify every (b, c) pair");

    auto* sim_cmd = app.add_subcommand("simulate", "fixed-step RK4 run to CSV");
    sim_cmd->add_option("--system", system_path)->required();
    sim_cmd->add_option("--attack", plan_path, "attack plan file");
    sim_cmd->add_option("--x0", x0_csv, "initial state, comma separated");
    sim_cmd->add_flag("--spoofed", spoofed,
                      "start from the plan's spoofed state, no attack");
    sim_cmd->add_option("--t-end", t_end);
    sim_cmd->add_option("--dt", dt);
    sim_cmd->add_option("--out", out_path, "trajectory CSV")->required();

    auto* verify_cmd =
        app.add_subcommand("verify", "verify a defense (or an attack plan with --attack)");
    verify_cmd->add_option("--system", system_path)->required();
    verify_cmd->add_option("--attack", plan_path, "attack plan to check");
    verify_cmd->add_option("--t-end", t_end);
    verify_cmd->add_option("--dt", dt);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify_cmd)
            return cmd_classify(gf, system_path, cone_kind, samples, require);
        if (*zeros_cmd) return cmd_zeros(gf, system_path);
        if (*attack_cmd)
            return cmd_attack(gf, system_path, zero_arg, zero_imag, x0_csv, l1, l2, scale,
                              raw, out_path);
        if (*defend_cmd)
            return cmd_defend(gf, system_path, cone_kind, exhaustive, assume_irreducible);
        if (*mas_cmd) return cmd_mas(gf, graph_path, order, gains_path, r, exhaustive);
        if (*sim_cmd)
            return cmd_simulate(gf, system_path, plan_path, x0_csv, spoofed, t_end, dt,
                                out_path);
        if (*verify_cmd) return cmd_verify(gf, system_path, plan_path, t_end, dt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
