#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cis/digraph.hpp"
#include "cis/lti.hpp"

namespace cis {

enum class DefenseStatus { Successful, AlmostSuccessful, Failed };
enum class DefenseReason {
    FullRank,                 // no zero with Re >= 0 survives the rank test
    NullForcesD0Zero,         // rank drops somewhere but the null space pins d0 = 0
    ZeroAtOriginOnly,         // the only unblocked zero sits at s0 = 0
    RankDeficientWithAttack,  // a zero with Re >= 0 admits d0 != 0
};

const char* to_string(DefenseStatus s);
const char* to_string(DefenseReason r);

struct DefenseVerdict {
    DefenseStatus status = DefenseStatus::Failed;
    DefenseReason reason = DefenseReason::RankDeficientWithAttack;
    std::optional<std::complex<double>> witness_zero;
};

// Single attack channel, single sensor (b and c canonical basis vectors):
// walks every finite transmission zero on the nonnegative real axis and
// checks the successful-defense conditions there. The conditions quantify
// over real shifts s0 >= 0 -- the real-exponential attack family -- so zeros
// away from the real axis are out of scope here (they are still reported by
// transmission_zeros). A zero at the origin that only fails through d0 != 0
// downgrades the verdict to AlmostSuccessful (a constant input cannot
// destabilize a stable system).
DefenseVerdict verify_defense(const LtiSystem& sys);

// Square MIMO variant: distinct basis columns/rows, rank of C(s0I-A)^{-1}B
// tested at every candidate zero (via the Rosenbrock matrix when s0 is an
// eigenvalue of A).
DefenseVerdict verify_defense_mimo(const LtiSystem& sys);

enum class PlacementRule {
    StableConeInterior,       // stable cross-positive A, sensors in int K*
    StableConeIrreducible,    // stable + K-irreducible, sensors anywhere in K*
    MarginalConeIrreducible,  // marginally stable + K-irreducible
    FirstOrderComponent,      // consensus MAS, attack and sensor in one SCC
    FirstOrderGlobal,         // consensus MAS, sensors in the universal sink SCC
    SecondOrderDamped,        // position coupling + velocity damping gains
    SecondOrderVelocity,      // velocity-coupled form (attack groups differ)
};

const char* to_string(PlacementRule r);

struct AttackGroup {
    std::vector<int> attack_set;  // 0-based state indices
    DefenseStatus claimed;        // what the placement rule guarantees
};

struct PairVerdict {
    int b_index;
    int c_index;
    DefenseVerdict verdict;
};

struct PlacementReport {
    PlacementRule rule;
    std::vector<int> sensor_set;  // 0-based state indices
    std::vector<AttackGroup> groups;
    std::vector<PairVerdict> per_pair;  // filled by exhaustive verification
    std::vector<std::string> notes;

    std::vector<int> attack_union() const;
};

// Stable cone-invariant placement: attacks anywhere in the candidate attack
// set, sensors at basis vectors of int K* (or of K* when A is K-irreducible).
// assume_irreducible asserts K-irreducibility when the sampled check cannot
// certify it; the assertion is recorded in the report notes.
PlacementReport placement_cone_stable(const LtiSystem& sys, const ConeSpec& cone,
                                      bool exhaustive = false,
                                      const ClassifyOptions& opts = {},
                                      bool assume_irreducible = false);

// Marginally stable variant; requires certified (or asserted) K-irreducibility
// and checks axis eigenvalues are simple. Pairs at s0 = 0 resolve through
// b in Im(A).
PlacementReport placement_cone_marginal(const LtiSystem& sys, const ConeSpec& cone,
                                        bool exhaustive = false,
                                        const ClassifyOptions& opts = {},
                                        bool assume_irreducible = false);

// First-order consensus network: one report per strongly connected component
// (attack set = sensor set = the component), plus a global report when a
// universal sink component exists.
std::vector<PlacementReport> placement_first_order(const Digraph& g,
                                                   bool exhaustive = false);

// Second-order consensus with damping gains K: the 2n-state system
// [[0, I], [-L, -K]]; every channel is attackable and any single channel
// sensor succeeds.
PlacementReport placement_second_order_damped(const Digraph& g,
                                              const Eigen::VectorXd& gains,
                                              bool exhaustive = false);

// Second-order consensus with velocity coupling r: [[0, I], [-L, -rL]];
// position channels are almost-successfully defendable, velocity channels
// successfully.
PlacementReport placement_second_order_velocity(const Digraph& g, double r,
                                                bool exhaustive = false);

// System builders used by the placement rules (and by file generators).
LtiSystem first_order_system(const Digraph& g);
LtiSystem second_order_damped_system(const Digraph& g, const Eigen::VectorXd& gains);
LtiSystem second_order_velocity_system(const Digraph& g, double r);

struct MimoPlacement {
    std::vector<int> b_set;
    std::vector<int> c_set;
    DefenseVerdict verdict;
};

// Exhaustive search over all m-subsets for small instances (m <= 2, n <= 8).
std::vector<MimoPlacement> enumerate_mimo_placements(const Eigen::MatrixXd& A, int m);

}  // namespace cis
