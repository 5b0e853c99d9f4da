#include "cis/defense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "cis/zeros.hpp"

namespace cis {

const char* to_string(DefenseStatus s) {
    switch (s) {
        case DefenseStatus::Successful: return "successful";
        case DefenseStatus::AlmostSuccessful: return "almost-successful";
        case DefenseStatus::Failed: return "failed";
    }
    return "?";
}

const char* to_string(DefenseReason r) {
    switch (r) {
        case DefenseReason::FullRank: return "full-rank";
        case DefenseReason::NullForcesD0Zero: return "null-forces-d0-zero";
        case DefenseReason::ZeroAtOriginOnly: return "zero-at-origin-only";
        case DefenseReason::RankDeficientWithAttack: return "rank-deficient-with-attack";
    }
    return "?";
}

const char* to_string(PlacementRule r) {
    switch (r) {
        case PlacementRule::StableConeInterior: return "stable-cone-interior";
        case PlacementRule::StableConeIrreducible: return "stable-cone-irreducible";
        case PlacementRule::MarginalConeIrreducible: return "marginal-cone-irreducible";
        case PlacementRule::FirstOrderComponent: return "first-order-component";
        case PlacementRule::FirstOrderGlobal: return "first-order-global";
        case PlacementRule::SecondOrderDamped: return "second-order-damped";
        case PlacementRule::SecondOrderVelocity: return "second-order-velocity";
    }
    return "?";
}

std::vector<int> PlacementReport::attack_union() const {
    std::vector<int> all;
    for (const auto& g : groups) all.insert(all.end(), g.attack_set.begin(), g.attack_set.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

namespace {

double system_scale(const Eigen::MatrixXd& A) {
    return std::max(1.0, A.cwiseAbs().maxCoeff());
}

void require_not_unstable(const Eigen::MatrixXd& A) {
    if (max_real_eigenvalue(A) > 1e-8 * system_scale(A))
        throw std::invalid_argument(
            "defense verification assumes a (marginally) stable system");
}

// Zeros on the nonnegative real axis, clustered so nearby pencil eigenvalues
// are checked once. The successful-defense conditions quantify over real
// shifts s0 >= 0 (the real-exponential attack family); a zero away from the
// real axis never makes the bordered matrix lose rank at a real shift. A
// multiple zero at the origin splits under rounding; candidates within the
// snap window whose Rosenbrock matrix genuinely drops rank at 0 are remapped
// to exactly 0.
std::vector<std::complex<double>> candidate_zeros(
    const LtiSystem& sys, const std::vector<std::complex<double>>& zeros,
    double scale) {
    const double re_tol = 1e-8 * scale;
    const double cluster_tol = 1e-6 * scale;
    const double snap_tol = 1e-5 * scale;

    int origin_deficient = -1;  // lazily computed
    auto near_origin_zero = [&](const std::complex<double>& z) {
        if (std::abs(z) > snap_tol) return false;
        if (origin_deficient < 0) {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
                rosenbrock_matrix(sys, {0.0, 0.0}));
            const auto& sv = svd.singularValues();
            origin_deficient =
                sv(sv.size() - 1) <= rank_drop_threshold(sys, sv(0)) ? 1 : 0;
        }
        return origin_deficient == 1;
    };

    std::vector<std::complex<double>> reps;
    for (auto z : zeros) {
        if (near_origin_zero(z)) z = {0.0, 0.0};
        if (z.real() < -re_tol) continue;
        if (std::abs(z.imag()) > cluster_tol) continue;  // off the real axis
        z = {z.real(), 0.0};
        bool merged = false;
        for (const auto& r : reps)
            if (std::abs(z - r) <= cluster_tol * std::max(1.0, std::abs(r))) {
                merged = true;
                break;
            }
        if (!merged) reps.push_back(z);
    }
    return reps;
}

struct NullSpaceInfo {
    bool rank_deficient = false;
    bool d0_forced_zero = false;
};

// SVD of the Rosenbrock matrix at s0: is the rank deficient, and if so does
// every null vector carry d0 = 0?
NullSpaceInfo rosenbrock_null_info(const LtiSystem& sys, std::complex<double> s0) {
    Eigen::MatrixXcd R = rosenbrock_matrix(sys, s0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int last = static_cast<int>(sv.size()) - 1;
    const double thresh = rank_drop_threshold(sys, sv(0));
    NullSpaceInfo info;
    if (sv(last) > thresh) return info;  // full rank after all
    info.rank_deficient = true;
    int null_dim = 0;
    for (int k = 0; k <= last; ++k)
        if (sv(k) <= thresh) ++null_dim;
    Eigen::MatrixXcd d_part =
        svd.matrixV().rightCols(null_dim).bottomRows(sys.input_dim());
    info.d0_forced_zero = d_part.norm() <= kZeroTol * std::sqrt(double(null_dim));
    return info;
}

DefenseVerdict aggregate_over_zeros(const LtiSystem& sys,
                                    const std::vector<std::complex<double>>& reps,
                                    double scale) {
    const double origin_tol = 1e-7 * scale;
    DefenseVerdict verdict{DefenseStatus::Successful, DefenseReason::FullRank,
                           std::nullopt};
    bool any_deficient = false;
    bool origin_exempt = false;
    for (const auto& z : reps) {
        NullSpaceInfo info = rosenbrock_null_info(sys, z);
        if (!info.rank_deficient) continue;
        any_deficient = true;
        if (info.d0_forced_zero) continue;
        if (std::abs(z) <= origin_tol) {
            origin_exempt = true;
            continue;
        }
        return {DefenseStatus::Failed, DefenseReason::RankDeficientWithAttack, z};
    }
    if (origin_exempt)
        return {DefenseStatus::AlmostSuccessful, DefenseReason::ZeroAtOriginOnly,
                std::complex<double>(0.0, 0.0)};
    if (any_deficient) verdict.reason = DefenseReason::NullForcesD0Zero;
    return verdict;
}

void require_positive_gains(const Eigen::VectorXd& gains) {
    if ((gains.array() <= 0.0).any())
        throw std::invalid_argument("second-order placement: gains must be positive");
}

void fill_per_pair(PlacementReport* report, const Eigen::MatrixXd& A,
                   const std::vector<int>& attacks, const std::vector<int>& sensors) {
    for (int b : attacks)
        for (int c : sensors)
            report->per_pair.push_back({b, c, verify_defense(siso_system(A, b, c))});
}

std::vector<int> iota_set(int from, int count) {
    std::vector<int> v(count);
    for (int i = 0; i < count; ++i) v[i] = from + i;
    return v;
}

}  // namespace

DefenseVerdict verify_defense(const LtiSystem& sys) {
    sys.validate();
    if (sys.input_dim() != 1 || sys.output_dim() != 1)
        throw std::invalid_argument("verify_defense: SISO only (use verify_defense_mimo)");
    if (!basis_index(sys.B.col(0)) || !basis_index(sys.C.row(0).transpose()))
        throw std::invalid_argument(
            "verify_defense: b and c must be canonical basis vectors");
    require_not_unstable(sys.A);

    const double scale = system_scale(sys.A);
    std::vector<std::complex<double>> zeros;
    try {
        zeros = transmission_zeros(sys);
    } catch (const DegeneratePencil&) {
        // output decoupled from the attack channel: every signal is invisible
        return {DefenseStatus::Failed, DefenseReason::RankDeficientWithAttack,
                std::complex<double>(0.0, 0.0)};
    }
    return aggregate_over_zeros(sys, candidate_zeros(sys, zeros, scale), scale);
}

DefenseVerdict verify_defense_mimo(const LtiSystem& sys) {
    sys.validate();
    const int n = sys.state_dim(), m = sys.input_dim();
    if (m != sys.output_dim())
        throw std::invalid_argument("verify_defense_mimo: need m = l");
    std::vector<int> b_idx, c_idx;
    for (int j = 0; j < m; ++j) {
        auto bi = basis_index(sys.B.col(j));
        auto ci = basis_index(sys.C.row(j).transpose());
        if (!bi || !ci)
            throw std::invalid_argument(
                "verify_defense_mimo: B columns and C rows must be basis vectors");
        b_idx.push_back(*bi);
        c_idx.push_back(*ci);
    }
    auto distinct = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!distinct(b_idx) || !distinct(c_idx))
        throw std::invalid_argument("verify_defense_mimo: repeated basis channels");
    require_not_unstable(sys.A);

    if (m == n)  // full instrumentation: the bordered matrix has rank 2n always
        return {DefenseStatus::Successful, DefenseReason::FullRank, std::nullopt};

    const double scale = system_scale(sys.A);
    std::vector<std::complex<double>> zeros;
    try {
        zeros = transmission_zeros(sys);
    } catch (const DegeneratePencil&) {
        return {DefenseStatus::Failed, DefenseReason::RankDeficientWithAttack,
                std::complex<double>(0.0, 0.0)};
    }

    Eigen::VectorXcd eigs = sys.A.eigenvalues();
    const double origin_tol = 1e-7 * scale;
    bool any_deficient = false, origin_exempt = false;
    for (const auto& z : candidate_zeros(sys, zeros, scale)) {
        double eig_dist = (eigs.array() - z).abs().minCoeff();
        bool deficient = false, forced = false;
        if (eig_dist > 1e-8 * scale) {
            // s0 is a regular point of A: rank of the closed form C(s0I-A)^{-1}B
            Eigen::MatrixXcd resolvent =
                (z * Eigen::MatrixXcd::Identity(n, n) - sys.A.cast<std::complex<double>>())
                    .lu()
                    .solve(sys.B.cast<std::complex<double>>());
            Eigen::MatrixXcd G = sys.C.cast<std::complex<double>>() * resolvent;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
            const auto& sv = svd.singularValues();
            deficient = sv(m - 1) <= kZeroTol * std::max(sv(0), 1e-300);
            if (!deficient) continue;
            NullSpaceInfo info = rosenbrock_null_info(sys, z);
            deficient = info.rank_deficient;
            forced = info.d0_forced_zero;
        } else {
            NullSpaceInfo info = rosenbrock_null_info(sys, z);
            deficient = info.rank_deficient;
            forced = info.d0_forced_zero;
        }
        if (!deficient) continue;
        any_deficient = true;
        if (forced) continue;
        if (std::abs(z) <= origin_tol) {
            origin_exempt = true;
            continue;
        }
        return {DefenseStatus::Failed, DefenseReason::RankDeficientWithAttack, z};
    }
    if (origin_exempt)
        return {DefenseStatus::AlmostSuccessful, DefenseReason::ZeroAtOriginOnly,
                std::complex<double>(0.0, 0.0)};
    return {DefenseStatus::Successful,
            any_deficient ? DefenseReason::NullForcesD0Zero : DefenseReason::FullRank,
            std::nullopt};
}

PlacementReport placement_cone_stable(const LtiSystem& sys, const ConeSpec& cone,
                                      bool exhaustive, const ClassifyOptions& opts,
                                      bool assume_irreducible) {
    sys.validate();
    if (sys.state_dim() != cone.ambient_dim())
        throw DimensionError("placement: cone does not match the state dimension");
    if (!is_hurwitz(sys.A))
        throw std::invalid_argument("placement_cone_stable: A must be Hurwitz");

    CheckResult cross = is_cross_positive(sys.A, cone, opts);
    if (cross.verdict == TriState::No)
        throw std::invalid_argument(
            "placement_cone_stable: A is not cross-positive over the cone");

    PlacementReport report;
    std::vector<int> attacks = candidate_attack_set(cone, opts.tol);

    CheckResult irr = is_irreducible(sys.A, cone, opts);
    if (irr.verdict == TriState::No && assume_irreducible)
        throw std::invalid_argument(
            "placement_cone_stable: irreducibility asserted but disproved");
    if (irr.verdict == TriState::Yes ||
        (assume_irreducible && irr.verdict == TriState::Undetermined)) {
        report.rule = PlacementRule::StableConeIrreducible;
        report.sensor_set = candidate_sensor_set(cone, false, opts.tol);
        if (irr.verdict != TriState::Yes)
            report.notes.push_back("K-irreducibility asserted by the caller");
    } else {
        report.rule = PlacementRule::StableConeInterior;
        report.sensor_set = candidate_sensor_set(cone, true, opts.tol);
        if (irr.verdict == TriState::Undetermined)
            report.notes.push_back(
                "irreducibility undetermined; using the interior sensor rule");
    }
    if (cross.verdict == TriState::Undetermined)
        report.notes.push_back("cross-positivity sampled, no counterexample found");
    if (report.sensor_set.empty())
        throw AssumptionViolated(
            "no canonical basis vector lies in the required part of the dual cone; "
            "the sensor candidate set is empty");

    report.groups.push_back({attacks, DefenseStatus::Successful});
    if (exhaustive) fill_per_pair(&report, sys.A, attacks, report.sensor_set);
    return report;
}

PlacementReport placement_cone_marginal(const LtiSystem& sys, const ConeSpec& cone,
                                        bool exhaustive, const ClassifyOptions& opts,
                                        bool assume_irreducible) {
    sys.validate();
    if (sys.state_dim() != cone.ambient_dim())
        throw DimensionError("placement: cone does not match the state dimension");

    const int n = sys.state_dim();
    const double scale = system_scale(sys.A);
    Eigen::VectorXcd eigs = sys.A.eigenvalues();
    const double axis_tol = 1e-8 * scale;
    if (eigs.real().maxCoeff() > axis_tol)
        throw std::invalid_argument("placement_cone_marginal: A is unstable");
    if (eigs.real().maxCoeff() < -axis_tol)
        throw std::invalid_argument(
            "placement_cone_marginal: A is Hurwitz; use placement_cone_stable");

    // axis eigenvalues must be simple (no Jordan block, multiplicity one)
    for (int k = 0; k < n; ++k) {
        if (std::abs(eigs(k).real()) > axis_tol) continue;
        int mult = 0;
        for (int j = 0; j < n; ++j)
            if (std::abs(eigs(j) - eigs(k)) <= 10 * axis_tol) ++mult;
        Eigen::MatrixXcd shifted =
            sys.A.cast<std::complex<double>>() -
            eigs(k) * Eigen::MatrixXcd::Identity(n, n);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(shifted);
        qr.setThreshold(1e-9);
        if (mult != 1 || qr.rank() != n - 1)
            throw std::invalid_argument(
                "placement_cone_marginal: eigenvalue on the axis is not simple");
    }

    CheckResult cross = is_cross_positive(sys.A, cone, opts);
    if (cross.verdict == TriState::No)
        throw std::invalid_argument(
            "placement_cone_marginal: A is not cross-positive over the cone");
    CheckResult irr = is_irreducible(sys.A, cone, opts);
    if (irr.verdict == TriState::No ||
        (irr.verdict == TriState::Undetermined && !assume_irreducible))
        throw std::invalid_argument(
            "placement_cone_marginal: K-irreducibility not certified");

    PlacementReport report;
    report.rule = PlacementRule::MarginalConeIrreducible;
    if (irr.verdict != TriState::Yes)
        report.notes.push_back("K-irreducibility asserted by the caller");
    std::vector<int> attacks = candidate_attack_set(cone, opts.tol);
    report.sensor_set = candidate_sensor_set(cone, false, opts.tol);
    if (report.sensor_set.empty())
        throw AssumptionViolated("sensor candidate set is empty for this cone");

    // the s0 = 0 argument needs e_i outside Im(A) for every attack candidate
    for (int b : attacks) {
        ImageCheckResult img = basis_image_check(sys.A, b);
        if (img.in_image)
            report.notes.push_back("attack basis vector " + std::to_string(b + 1) +
                                   " lies in Im(A); the origin argument does not "
                                   "apply (unexpected for an irreducible system)");
    }
    if (cross.verdict == TriState::Undetermined)
        report.notes.push_back("cross-positivity sampled, no counterexample found");

    report.groups.push_back({attacks, DefenseStatus::Successful});
    if (exhaustive) fill_per_pair(&report, sys.A, attacks, report.sensor_set);
    return report;
}

std::vector<PlacementReport> placement_first_order(const Digraph& g, bool exhaustive) {
    Eigen::MatrixXd A = -laplacian(g);
    SccDecomposition d = scc_decompose(g);

    std::vector<PlacementReport> reports;
    for (const auto& comp : d.components) {
        PlacementReport r;
        r.rule = PlacementRule::FirstOrderComponent;
        r.sensor_set = comp;
        r.groups.push_back({comp, DefenseStatus::AlmostSuccessful});
        if (exhaustive) fill_per_pair(&r, A, comp, comp);
        reports.push_back(std::move(r));
    }
    if (d.components.size() == 1) return reports;  // global report would repeat it

    if (auto sink = universal_sink_component(g)) {
        PlacementReport r;
        r.rule = PlacementRule::FirstOrderGlobal;
        r.sensor_set = *sink;
        r.groups.push_back({iota_set(0, g.node_count()), DefenseStatus::AlmostSuccessful});
        if (exhaustive) fill_per_pair(&r, A, r.groups[0].attack_set, r.sensor_set);
        reports.push_back(std::move(r));
    }
    return reports;
}

LtiSystem first_order_system(const Digraph& g) {
    LtiSystem sys;
    sys.A = -laplacian(g);
    sys.B.resize(g.node_count(), 0);
    sys.C.resize(0, g.node_count());
    sys.cone = ConeSpec::orthant(g.node_count());
    return sys;
}

LtiSystem second_order_damped_system(const Digraph& g, const Eigen::VectorXd& gains) {
    const int n = g.node_count();
    if (gains.size() != n)
        throw DimensionError("second_order_damped_system: one gain per node");
    require_positive_gains(gains);
    LtiSystem sys;
    sys.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    sys.A.topRightCorner(n, n).setIdentity();
    sys.A.bottomLeftCorner(n, n) = -laplacian(g);
    sys.A.bottomRightCorner(n, n) = -gains.asDiagonal().toDenseMatrix();
    sys.B.resize(2 * n, 0);
    sys.C.resize(0, 2 * n);
    return sys;
}

LtiSystem second_order_velocity_system(const Digraph& g, double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("second_order_velocity_system: r must be > 0");
    const int n = g.node_count();
    Eigen::MatrixXd L = laplacian(g);
    LtiSystem sys;
    sys.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    sys.A.topRightCorner(n, n).setIdentity();
    sys.A.bottomLeftCorner(n, n) = -L;
    sys.A.bottomRightCorner(n, n) = -r * L;
    sys.B.resize(2 * n, 0);
    sys.C.resize(0, 2 * n);
    return sys;
}

PlacementReport placement_second_order_damped(const Digraph& g,
                                              const Eigen::VectorXd& gains,
                                              bool exhaustive) {
    if (!is_strongly_connected(g))
        throw std::invalid_argument(
            "placement_second_order_damped: digraph must be strongly connected");
    LtiSystem sys = second_order_damped_system(g, gains);
    const int n2 = 2 * g.node_count();

    PlacementReport report;
    report.rule = PlacementRule::SecondOrderDamped;
    report.sensor_set = iota_set(0, n2);
    report.groups.push_back({iota_set(0, n2), DefenseStatus::Successful});
    if (exhaustive) fill_per_pair(&report, sys.A, report.groups[0].attack_set,
                                  report.sensor_set);
    return report;
}

PlacementReport placement_second_order_velocity(const Digraph& g, double r,
                                                bool exhaustive) {
    if (!is_strongly_connected(g))
        throw std::invalid_argument(
            "placement_second_order_velocity: digraph must be strongly connected");
    LtiSystem sys = second_order_velocity_system(g, r);
    const int n = g.node_count();

    PlacementReport report;
    report.rule = PlacementRule::SecondOrderVelocity;
    report.sensor_set = iota_set(0, 2 * n);
    report.groups.push_back({iota_set(0, n), DefenseStatus::AlmostSuccessful});
    report.groups.push_back({iota_set(n, n), DefenseStatus::Successful});
    if (exhaustive) {
        fill_per_pair(&report, sys.A, report.groups[0].attack_set, report.sensor_set);
        fill_per_pair(&report, sys.A, report.groups[1].attack_set, report.sensor_set);
    }
    return report;
}

std::vector<MimoPlacement> enumerate_mimo_placements(const Eigen::MatrixXd& A, int m) {
    const int n = static_cast<int>(A.rows());
    if (m < 1 || m > 2 || n > 8)
        throw std::invalid_argument(
            "enumerate_mimo_placements: exhaustive search is limited to m <= 2, n <= 8");

    std::vector<std::vector<int>> subsets;
    if (m == 1) {
        for (int i = 0; i < n; ++i) subsets.push_back({i});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) subsets.push_back({i, j});
    }

    std::vector<MimoPlacement> out;
    for (const auto& bs : subsets) {
        for (const auto& cs : subsets) {
            LtiSystem sys;
            sys.A = A;
            sys.B = Eigen::MatrixXd::Zero(n, m);
            sys.C = Eigen::MatrixXd::Zero(m, n);
            for (int k = 0; k < m; ++k) {
                sys.B(bs[k], k) = 1.0;
                sys.C(k, cs[k]) = 1.0;
            }
            out.push_back({bs, cs, verify_defense_mimo(sys)});
        }
    }
    return out;
}

}  // namespace cis
