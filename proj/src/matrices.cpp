#include "cis/matrices.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "cis/digraph.hpp"

namespace cis {

const char* to_string(TriState t) {
    switch (t) {
        case TriState::Yes: return "yes";
        case TriState::No: return "no";
        case TriState::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

void check_square(const Eigen::MatrixXd& A, const ConeSpec& cone) {
    if (A.rows() != A.cols()) throw DimensionError("matrix must be square");
    if (A.rows() != cone.ambient_dim())
        throw DimensionError("matrix dimension does not match the cone");
}

Eigen::MatrixXd lorentz_q(int n) {
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
    Q(0, 0) = -1.0;
    return Q;
}

double lambda_max(const Eigen::MatrixXd& S, Eigen::VectorXd* top = nullptr) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw SolverFailure("symmetric eigen solve failed");
    int last = static_cast<int>(S.rows()) - 1;
    if (top) *top = es.eigenvectors().col(last);
    return es.eigenvalues()(last);
}

// Feasibility of M0 - t*Q <= 0 for some scalar t. lambda_max(M0 - t Q) is
// convex in t, so bisection on the subgradient -v'Qv locates the minimum.
bool scalar_shift_feasible(const Eigen::MatrixXd& M0, const Eigen::MatrixXd& Q,
                           double tol, double* t_star) {
    double lo = -1e6, hi = 1e6;
    Eigen::VectorXd v;
    while (hi - lo > 1e-9) {
        double mid = 0.5 * (lo + hi);
        lambda_max(M0 - mid * Q, &v);
        double grad = -v.dot(Q * v);
        if (grad < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double best = std::numeric_limits<double>::infinity();
    double arg = lo;
    for (double t : {lo, 0.5 * (lo + hi), hi}) {
        double f = lambda_max(M0 - t * Q);
        if (f < best) best = f, arg = t;
    }
    if (t_star) *t_star = arg;
    return best <= tol;
}

double entry_tol(const ClassifyOptions& opts, const Eigen::MatrixXd& A) {
    return opts.tol * std::max(1.0, A.cwiseAbs().maxCoeff());
}

// Rotate a complex eigenvector onto the real axis; returns false when it has
// a genuinely complex direction.
bool realify(const Eigen::VectorXcd& v, Eigen::VectorXd* out, double tol = 1e-8) {
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    std::complex<double> phase = v(imax) / std::abs(v(imax));
    Eigen::VectorXcd rotated = v / phase;
    if (rotated.imag().lpNorm<Eigen::Infinity>() > tol * rotated.norm()) return false;
    *out = rotated.real();
    out->normalize();
    return true;
}

}  // namespace

double max_real_eigenvalue(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success) throw SolverFailure("eigen solve failed");
    return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Eigen::MatrixXd& A, double tol) {
    return max_real_eigenvalue(A) < -tol * std::max(1.0, A.cwiseAbs().maxCoeff());
}

CheckResult is_cone_invariant(const Eigen::MatrixXd& A, const ConeSpec& cone,
                              const ClassifyOptions& opts) {
    check_square(A, cone);
    CheckResult res;
    const double tol = entry_tol(opts, A);

    switch (cone.kind()) {
        case ConeKind::Orthant: {
            int i = 0, j = 0;
            double mn = A.minCoeff(&i, &j);
            if (mn >= -tol) {
                res.verdict = TriState::Yes;
                res.note = "all entries nonnegative";
            } else {
                res.verdict = TriState::No;
                res.evidence.push_back({"ray", Eigen::VectorXd::Unit(A.cols(), j),
                                        A.col(j), mn});
                res.note = "negative entry maps a basis ray outside the orthant";
            }
            return res;
        }
        case ConeKind::Lorentz: {
            Eigen::VectorXd a1 = A.row(0).transpose();
            if (!contains(cone, a1, opts.tol)) {
                res.verdict = TriState::No;
                res.evidence.push_back({"first_row", a1, {}, membership_margin(cone, a1)});
                res.note = "first row is not in the Lorentz cone";
                return res;
            }
            const Eigen::MatrixXd Q = lorentz_q(cone.ambient_dim());
            double delta = 0.0;
            bool ok = scalar_shift_feasible(A.transpose() * Q * A, Q, tol, &delta);
            res.verdict = ok ? TriState::Yes : TriState::No;
            res.evidence.push_back({"delta", {}, {}, delta});
            res.note = ok ? "A'QA - delta*Q <= 0 feasible" : "A'QA - delta*Q <= 0 infeasible";
            return res;
        }
        case ConeKind::PsdSvec:
        case ConeKind::Polyhedral:
            break;
    }

    std::mt19937_64 rng(opts.seed);
    for (int k = 0; k < opts.samples; ++k) {
        Eigen::VectorXd x =
            (k % 2 == 0) ? sample_boundary(cone, rng) : sample_point(cone, rng);
        if (x.lpNorm<Eigen::Infinity>() == 0.0) continue;
        Eigen::VectorXd img = A * x;
        if (!contains(cone, img, opts.tol)) {
            res.verdict = TriState::No;
            res.evidence.push_back({"ray", x, img, membership_margin(cone, img)});
            res.note = "sampled ray leaves the cone";
            return res;
        }
    }
    res.verdict = TriState::Undetermined;
    res.note = "no counterexample in " + std::to_string(opts.samples) + " samples";
    return res;
}

CheckResult is_cross_positive(const Eigen::MatrixXd& A, const ConeSpec& cone,
                              const ClassifyOptions& opts) {
    check_square(A, cone);
    CheckResult res;
    const double tol = entry_tol(opts, A);
    const int n = cone.ambient_dim();

    switch (cone.kind()) {
        case ConeKind::Orthant: {
            // Metzler test
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j && A(i, j) < -tol) {
                        res.verdict = TriState::No;
                        res.evidence.push_back({"pair", Eigen::VectorXd::Unit(n, j),
                                                Eigen::VectorXd::Unit(n, i), A(i, j)});
                        res.note = "negative off-diagonal entry";
                        return res;
                    }
            res.verdict = TriState::Yes;
            res.note = "Metzler";
            return res;
        }
        case ConeKind::Lorentz: {
            const Eigen::MatrixXd Q = lorentz_q(n);
            double xi = 0.0;
            bool ok = scalar_shift_feasible(A.transpose() * Q + Q * A, Q, tol, &xi);
            res.verdict = ok ? TriState::Yes : TriState::No;
            res.evidence.push_back({"xi", {}, {}, xi});
            res.note = ok ? "A'Q + QA - xi*Q <= 0 feasible" : "A'Q + QA - xi*Q <= 0 infeasible";
            return res;
        }
        case ConeKind::PsdSvec:
        case ConeKind::Polyhedral:
            break;
    }

    std::mt19937_64 rng(opts.seed);
    for (int k = 0; k < opts.samples; ++k) {
        auto [x, y] = sample_complementary_pair(cone, rng);
        double v = y.dot(A * x);
        double scale = std::max(1.0, y.norm() * (A * x).norm());
        if (v < -opts.tol * scale) {
            res.verdict = TriState::No;
            res.evidence.push_back({"pair", x, y, v});
            res.note = "complementary pair with <y, Ax> < 0";
            return res;
        }
    }
    res.verdict = TriState::Undetermined;
    res.note = "no counterexample in " + std::to_string(opts.samples) + " samples";
    return res;
}

CheckResult is_k_positive(const Eigen::MatrixXd& A, const ConeSpec& cone,
                          const ClassifyOptions& opts) {
    check_square(A, cone);
    CheckResult res;
    const double tol = entry_tol(opts, A);
    const int n = cone.ambient_dim();

    if (cone.kind() == ConeKind::Orthant) {
        int i = 0, j = 0;
        double mn = A.minCoeff(&i, &j);
        if (mn > tol) {
            res.verdict = TriState::Yes;
            res.note = "all entries strictly positive";
        } else {
            res.verdict = TriState::No;
            res.evidence.push_back({"ray", Eigen::VectorXd::Unit(n, j), A.col(j), mn});
            res.note = "basis ray does not map into the interior";
        }
        return res;
    }

    std::mt19937_64 rng(opts.seed);
    for (int k = 0; k < opts.samples; ++k) {
        Eigen::VectorXd x =
            (k % 2 == 0) ? sample_boundary(cone, rng) : sample_point(cone, rng);
        if (x.lpNorm<Eigen::Infinity>() == 0.0) continue;
        Eigen::VectorXd img = A * x;
        if (!contains_interior(cone, img, opts.tol)) {
            res.verdict = TriState::No;
            res.evidence.push_back({"ray", x, img, membership_margin(cone, img)});
            res.note = "sampled nonzero ray does not map into the interior";
            return res;
        }
    }
    res.verdict = TriState::Undetermined;
    res.note = "no counterexample in " + std::to_string(opts.samples) + " samples";
    return res;
}

CheckResult is_irreducible(const Eigen::MatrixXd& A, const ConeSpec& cone,
                           const ClassifyOptions& opts) {
    check_square(A, cone);
    CheckResult res;
    const int n = cone.ambient_dim();

    if (cone.kind() == ConeKind::Orthant) {
        // strong connectivity of the off-diagonal pattern; the threshold
        // separates structural zeros from rounding noise
        double thresh = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
        Digraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && std::abs(A(i, j)) > thresh) g.add_edge(i, j, std::abs(A(i, j)));
        if (is_strongly_connected(g)) {
            res.verdict = TriState::Yes;
            res.note = "off-diagonal pattern strongly connected";
        } else {
            res.verdict = TriState::No;
            res.note = "off-diagonal pattern not strongly connected";
        }
        return res;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw SolverFailure("eigen solve failed");
    int skipped = 0;
    bool repeated = false;
    const double eig_tol = 1e-8 * std::max(1.0, A.cwiseAbs().maxCoeff());
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j)
            if (std::abs(es.eigenvalues()(k) - es.eigenvalues()(j)) <= eig_tol)
                repeated = true;
        Eigen::VectorXd v;
        if (!realify(es.eigenvectors().col(k), &v)) {
            ++skipped;
            continue;
        }
        for (double sign : {1.0, -1.0}) {
            Eigen::VectorXd w = sign * v;
            if (contains(cone, w, opts.tol) && !contains_interior(cone, w, opts.tol)) {
                res.verdict = TriState::No;
                res.evidence.push_back(
                    {"eigenvector", w, {}, es.eigenvalues()(k).real()});
                res.note = "eigenvector on the cone boundary";
                return res;
            }
        }
    }
    if (skipped > 0 || repeated) {
        // a repeated eigenvalue spans a whole eigenplane; scanning the returned
        // basis cannot rule out a boundary direction inside it
        res.verdict = TriState::Undetermined;
        res.note = repeated ? "repeated eigenvalue: basis scan cannot certify"
                            : std::to_string(skipped) +
                                  " complex eigenvector(s) skipped; no "
                                  "real-eigenvector violation";
    } else {
        res.verdict = TriState::Yes;
        res.note = "no real eigenvector on the cone boundary";
    }
    return res;
}

DominantEigenpair dominant_eigenpair(const Eigen::MatrixXd& A, const ConeSpec& cone,
                                     double tol) {
    check_square(A, cone);
    Eigen::EigenSolver<Eigen::MatrixXd> right_es(A);
    Eigen::EigenSolver<Eigen::MatrixXd> left_es(A.transpose());
    if (right_es.info() != Eigen::Success || left_es.info() != Eigen::Success)
        throw SolverFailure("eigen solve failed");

    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double mu = right_es.eigenvalues().real().maxCoeff();

    auto pick = [&](const Eigen::EigenSolver<Eigen::MatrixXd>& es, const ConeSpec& c,
                    bool dual, Eigen::VectorXd* out) -> bool {
        // among eigenvalues at the dominant real part, prefer a real one whose
        // eigenvector lands in the cone
        Eigen::VectorXd fallback;
        bool have_any = false;
        for (int k = 0; k < es.eigenvalues().size(); ++k) {
            if (es.eigenvalues()(k).real() < mu - tol * scale) continue;
            if (std::abs(es.eigenvalues()(k).imag()) > tol * scale) continue;
            Eigen::VectorXd v;
            if (!realify(es.eigenvectors().col(k), &v)) continue;
            for (double sign : {1.0, -1.0}) {
                Eigen::VectorXd w = sign * v;
                bool inside = dual ? dual_contains(c, w, 1e-7) : contains(c, w, 1e-7);
                if (inside) {
                    *out = w;
                    return true;
                }
            }
            if (!have_any) {
                fallback = v;
                have_any = true;
            }
        }
        if (have_any) *out = fallback;
        return false;
    };

    DominantEigenpair result;
    result.mu = mu;
    bool any_real = false;
    for (int k = 0; k < right_es.eigenvalues().size(); ++k)
        if (right_es.eigenvalues()(k).real() >= mu - tol * scale &&
            std::abs(right_es.eigenvalues()(k).imag()) <= tol * scale)
            any_real = true;
    if (!any_real)
        throw SolverFailure(
            "dominant eigenvalue is complex beyond tolerance; cross-positivity "
            "precondition violated");

    result.right_in_cone = pick(right_es, cone, false, &result.right);
    result.left_in_dual = pick(left_es, cone, true, &result.left);
    if (!result.right_in_cone || !result.left_in_dual)
        result.warning =
            "dominant eigenvector could not be sign-fixed into the cone/dual";
    return result;
}

CheckResult resolvent_is_cone_invariant(const Eigen::MatrixXd& A, const ConeSpec& cone,
                                        double s0, const ClassifyOptions& opts) {
    check_square(A, cone);
    if (s0 < 0.0) throw std::invalid_argument("resolvent test: s0 must be >= 0");
    if (!is_hurwitz(A, opts.tol))
        throw std::invalid_argument("resolvent test: A must be Hurwitz");
    const int n = cone.ambient_dim();
    Eigen::MatrixXd R =
        (s0 * Eigen::MatrixXd::Identity(n, n) - A).lu().solve(Eigen::MatrixXd::Identity(n, n));
    return is_cone_invariant(R, cone, opts);
}

ClassReport classify(const Eigen::MatrixXd& A, const ConeSpec& cone,
                     const ClassifyOptions& opts) {
    ClassReport report;
    auto absorb = [&report](const CheckResult& r) {
        for (const auto& w : r.evidence) report.evidence.push_back(w);
        if (!r.note.empty()) report.notes.push_back(r.note);
        return r.verdict;
    };
    report.cone_invariant = absorb(is_cone_invariant(A, cone, opts));
    report.cross_positive = absorb(is_cross_positive(A, cone, opts));
    report.irreducible = absorb(is_irreducible(A, cone, opts));
    report.k_positive = absorb(is_k_positive(A, cone, opts));
    if (report.cross_positive == TriState::No)
        report.notes.push_back(
            "irreducibility is reported for information only: A is not cross-positive");
    try {
        DominantEigenpair dom = dominant_eigenpair(A, cone);
        report.dominant_eig = dom.mu;
        report.dominant_right = dom.right;
        report.dominant_left = dom.left;
        if (!dom.warning.empty()) report.notes.push_back(dom.warning);
    } catch (const SolverFailure& e) {
        report.dominant_eig = max_real_eigenvalue(A);
        report.notes.push_back(e.what());
    }
    return report;
}

}  // namespace cis
