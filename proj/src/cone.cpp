#include "cis/cone.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace cis {

namespace {

double scaled_tol(double tol, const Eigen::VectorXd& x) {
    return tol * std::max(1.0, x.lpNorm<Eigen::Infinity>());
}

void check_dim(const ConeSpec& cone, const Eigen::VectorXd& x) {
    if (x.size() != cone.ambient_dim())
        throw DimensionError("cone/vector dimension mismatch: cone is " +
                             std::to_string(cone.ambient_dim()) + ", vector is " +
                             std::to_string(x.size()));
}

Eigen::VectorXd basis(int n, int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    return e;
}

}  // namespace

ConeSpec::ConeSpec(ConeKind kind, int dim, int order, Eigen::MatrixXd facets)
    : kind_(kind), ambient_dim_(dim), psd_order_(order), facets_(std::move(facets)) {}

ConeSpec ConeSpec::orthant(int dim) {
    if (dim < 1) throw DimensionError("orthant: dimension must be >= 1");
    return ConeSpec(ConeKind::Orthant, dim, 0, {});
}

ConeSpec ConeSpec::lorentz(int dim) {
    if (dim < 1) throw DimensionError("lorentz: dimension must be >= 1");
    return ConeSpec(ConeKind::Lorentz, dim, 0, {});
}

ConeSpec ConeSpec::psd(int order) {
    if (order < 1) throw DimensionError("psd: matrix order must be >= 1");
    return ConeSpec(ConeKind::PsdSvec, order * (order + 1) / 2, order, {});
}

ConeSpec ConeSpec::polyhedral(Eigen::MatrixXd facets) {
    if (facets.rows() < 1 || facets.cols() < 1)
        throw DimensionError("polyhedral: facet matrix must be nonempty");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(facets);
    if (qr.rank() < facets.cols())
        throw std::invalid_argument(
            "polyhedral: facet matrix must have full column rank (pointed cone)");
    int dim = static_cast<int>(facets.cols());
    return ConeSpec(ConeKind::Polyhedral, dim, 0, std::move(facets));
}

int ConeSpec::psd_order() const {
    if (kind_ != ConeKind::PsdSvec)
        throw std::logic_error("psd_order: not a PSD cone");
    return psd_order_;
}

const Eigen::MatrixXd& ConeSpec::facet_matrix() const {
    if (kind_ != ConeKind::Polyhedral)
        throw std::logic_error("facet_matrix: not a polyhedral cone");
    return facets_;
}

const char* ConeSpec::kind_name() const {
    switch (kind_) {
        case ConeKind::Orthant: return "orthant";
        case ConeKind::Lorentz: return "lorentz";
        case ConeKind::PsdSvec: return "psd";
        case ConeKind::Polyhedral: return "polyhedral";
    }
    return "?";
}

Eigen::VectorXd svec(const Eigen::MatrixXd& X, double tol_sym) {
    if (X.rows() != X.cols()) throw DimensionError("svec: matrix must be square");
    double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
    if ((X - X.transpose()).cwiseAbs().maxCoeff() > tol_sym * scale)
        throw std::invalid_argument("svec: matrix is not symmetric within tolerance");
    const int n = static_cast<int>(X.rows());
    Eigen::VectorXd v(n * (n + 1) / 2);
    const double r2 = std::sqrt(2.0);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        v(k++) = X(i, i);
        for (int j = i + 1; j < n; ++j) v(k++) = r2 * 0.5 * (X(i, j) + X(j, i));
    }
    return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& x) {
    // invert m(m+1)/2 = size
    const double m = (std::sqrt(8.0 * static_cast<double>(x.size()) + 1.0) - 1.0) / 2.0;
    const int n = static_cast<int>(std::lround(m));
    if (n * (n + 1) / 2 != x.size())
        throw DimensionError("smat: length is not a triangular number");
    Eigen::MatrixXd X(n, n);
    const double r2 = std::sqrt(2.0);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        X(i, i) = x(k++);
        for (int j = i + 1; j < n; ++j) {
            X(i, j) = X(j, i) = x(k++) / r2;
        }
    }
    return X;
}

double membership_margin(const ConeSpec& cone, const Eigen::VectorXd& x) {
    check_dim(cone, x);
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return x.minCoeff();
        case ConeKind::Lorentz: {
            if (x.size() == 1) return x(0);
            return x(0) - x.tail(x.size() - 1).norm();
        }
        case ConeKind::PsdSvec: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(x),
                                                              Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success)
                throw SolverFailure("membership_margin: eigen solve failed");
            return es.eigenvalues().minCoeff();
        }
        case ConeKind::Polyhedral:
            return (cone.facet_matrix() * x).minCoeff();
    }
    return 0.0;
}

bool contains(const ConeSpec& cone, const Eigen::VectorXd& x, double tol) {
    return membership_margin(cone, x) >= -scaled_tol(tol, x);
}

bool contains_interior(const ConeSpec& cone, const Eigen::VectorXd& x, double tol) {
    // 0 is in K but never in int K.
    if (x.lpNorm<Eigen::Infinity>() == 0.0) {
        check_dim(cone, x);
        return false;
    }
    return membership_margin(cone, x) > scaled_tol(tol, x);
}

bool dual_contains(const ConeSpec& cone, const Eigen::VectorXd& y, double tol) {
    check_dim(cone, y);
    if (cone.kind() != ConeKind::Polyhedral) return contains(cone, y, tol);
    // y in K* iff y = M^T lambda for some lambda >= 0.
    const Eigen::MatrixXd Mt = cone.facet_matrix().transpose();
    Eigen::VectorXd lambda = nnls(Mt, y);
    return (Mt * lambda - y).lpNorm<Eigen::Infinity>() <= scaled_tol(tol, y);
}

std::vector<int> candidate_attack_set(const ConeSpec& cone, double tol) {
    std::vector<int> idx;
    for (int i = 0; i < cone.ambient_dim(); ++i)
        if (contains(cone, basis(cone.ambient_dim(), i), tol)) idx.push_back(i);
    if (idx.empty())
        throw AssumptionViolated(
            "no canonical basis vector lies in the cone; the attack candidate "
            "set is empty");
    return idx;
}

std::vector<int> candidate_sensor_set(const ConeSpec& cone, bool interior_only,
                                      double tol) {
    std::vector<int> idx;
    for (int j = 0; j < cone.ambient_dim(); ++j) {
        Eigen::VectorXd e = basis(cone.ambient_dim(), j);
        bool ok;
        if (interior_only) {
            // int K* membership; for the self-dual kinds this is contains_interior,
            // for polyhedral we test strict decomposability by shrinking y slightly
            // toward the analytic center of K*.
            if (cone.kind() != ConeKind::Polyhedral) {
                ok = contains_interior(cone, e, tol);
            } else {
                // e_j in int K* iff e_j - eps*u stays in K* for all unit u; probe the
                // ambient basis directions both ways at a small fixed offset.
                ok = dual_contains(cone, e, tol);
                const double eps = 1e-6;
                for (int k = 0; ok && k < cone.ambient_dim(); ++k) {
                    Eigen::VectorXd u = basis(cone.ambient_dim(), k);
                    ok = dual_contains(cone, e - eps * u, tol) &&
                         dual_contains(cone, e + eps * u, tol);
                }
            }
        } else {
            ok = dual_contains(cone, e, tol);
        }
        if (ok) idx.push_back(j);
    }
    return idx;
}

Eigen::VectorXd sample_point(const ConeSpec& cone, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const int n = cone.ambient_dim();
    switch (cone.kind()) {
        case ConeKind::Orthant: {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x(i) = std::abs(g(rng));
            return x;
        }
        case ConeKind::Lorentz: {
            Eigen::VectorXd x(n);
            for (int i = 1; i < n; ++i) x(i) = g(rng);
            double tail = n > 1 ? x.tail(n - 1).norm() : 0.0;
            x(0) = tail + std::abs(g(rng));
            return x;
        }
        case ConeKind::PsdSvec: {
            const int m = cone.psd_order();
            std::uniform_int_distribution<int> rank(1, m);
            Eigen::MatrixXd G(m, rank(rng));
            for (int i = 0; i < G.size(); ++i) G.data()[i] = g(rng);
            return svec(G * G.transpose());
        }
        case ConeKind::Polyhedral:
            break;
    }
    // Polyhedral: walk from an interior point along a random direction,
    // staying strictly inside.
    const Eigen::MatrixXd& M = cone.facet_matrix();
    Eigen::VectorXd x0 = M.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(M.rows()));
    if ((M * x0).minCoeff() <= 0.0)
        throw SolverFailure("sample_point: no interior point found (cone not solid?)");
    Eigen::VectorXd u(cone.ambient_dim());
    for (int i = 0; i < u.size(); ++i) u(i) = g(rng);
    Eigen::VectorXd mu = M * u, mx = M * x0;
    double t_max = std::numeric_limits<double>::infinity();
    for (int r = 0; r < M.rows(); ++r)
        if (mu(r) < 0.0) t_max = std::min(t_max, -mx(r) / mu(r));
    std::uniform_real_distribution<double> frac(0.0, 0.9);
    double t = std::isfinite(t_max) ? frac(rng) * t_max : std::abs(g(rng));
    std::uniform_real_distribution<double> scale(0.1, 4.0);
    return scale(rng) * (x0 + t * u);
}

Eigen::VectorXd sample_boundary(const ConeSpec& cone, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const int n = cone.ambient_dim();
    switch (cone.kind()) {
        case ConeKind::Orthant: {
            Eigen::VectorXd x = sample_point(cone, rng);
            std::uniform_int_distribution<int> pick(0, n - 1);
            x(pick(rng)) = 0.0;
            return x;
        }
        case ConeKind::Lorentz: {
            Eigen::VectorXd x(n);
            if (n == 1) {  // boundary of R+ is {0}
                x(0) = 0.0;
                return x;
            }
            for (int i = 1; i < n; ++i) x(i) = g(rng);
            x(0) = x.tail(n - 1).norm();
            return x;
        }
        case ConeKind::PsdSvec: {
            const int m = cone.psd_order();
            if (m == 1) return Eigen::VectorXd::Zero(1);
            // rank-deficient: between 1 and m-1 rank-one terms
            std::uniform_int_distribution<int> rank(1, m - 1);
            Eigen::MatrixXd G(m, rank(rng));
            for (int i = 0; i < G.size(); ++i) G.data()[i] = g(rng);
            return svec(G * G.transpose());
        }
        case ConeKind::Polyhedral:
            break;
    }
    const Eigen::MatrixXd& M = cone.facet_matrix();
    Eigen::VectorXd x0 = M.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(M.rows()));
    if ((M * x0).minCoeff() <= 0.0)
        throw SolverFailure("sample_boundary: no interior point found");
    Eigen::VectorXd mx = M * x0;
    for (int attempt = 0; attempt < 256; ++attempt) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u(i) = g(rng);
        Eigen::VectorXd mu = M * u;
        double t_max = std::numeric_limits<double>::infinity();
        for (int r = 0; r < M.rows(); ++r)
            if (mu(r) < 0.0) t_max = std::min(t_max, -mx(r) / mu(r));
        if (!std::isfinite(t_max)) continue;  // direction never exits: resample
        return x0 + t_max * u;
    }
    throw SolverFailure("sample_boundary: found no exiting direction");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_complementary_pair(
    const ConeSpec& cone, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const int n = cone.ambient_dim();
    switch (cone.kind()) {
        case ConeKind::Orthant: {
            // complementary supports
            std::uniform_int_distribution<int> coin(0, 1);
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n), y = Eigen::VectorXd::Zero(n);
            int flips = 0;
            for (int i = 0; i < n; ++i) {
                if (coin(rng)) {
                    x(i) = std::abs(g(rng));
                    ++flips;
                } else {
                    y(i) = std::abs(g(rng));
                }
            }
            if (flips == 0) {  // keep x nonzero
                x(0) = std::abs(g(rng));
                y(0) = 0.0;
            } else if (flips == n) {  // keep y nonzero
                x(n - 1) = 0.0;
                y(n - 1) = std::abs(g(rng));
            }
            return {x, y};
        }
        case ConeKind::Lorentz: {
            Eigen::VectorXd x(n), y(n);
            if (n == 1) return {Eigen::VectorXd::Zero(1), sample_point(cone, rng)};
            for (int i = 1; i < n; ++i) x(i) = g(rng);
            double t = x.tail(n - 1).norm();
            x(0) = t;
            y = x;
            y.tail(n - 1) = -x.tail(n - 1);
            return {x, y};
        }
        case ConeKind::PsdSvec: {
            const int m = cone.psd_order();
            if (m == 1)
                return {Eigen::VectorXd::Zero(1), sample_point(cone, rng)};
            Eigen::VectorXd v(m), w(m);
            for (int i = 0; i < m; ++i) v(i) = g(rng), w(i) = g(rng);
            v.normalize();
            w -= w.dot(v) * v;  // orthogonal complement: Tr(vv^T ww^T) = 0
            if (w.norm() < 1e-12) w = Eigen::VectorXd::Unit(m, 0) - v(0) * v;
            w.normalize();
            return {svec(v * v.transpose()), svec(w * w.transpose())};
        }
        case ConeKind::Polyhedral:
            break;
    }
    // boundary point + its active facet normal (an element of K*)
    const Eigen::MatrixXd& M = cone.facet_matrix();
    Eigen::VectorXd xb = sample_boundary(cone, rng);
    Eigen::VectorXd mx = M * xb;
    int active;
    mx.minCoeff(&active);
    Eigen::VectorXd y = M.row(active).transpose();
    return {xb, y};
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter) {
    // Lawson & Hanson active-set method.
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (b.size() != m) throw DimensionError("nnls: dimension mismatch");
    if (max_iter <= 0) max_iter = 3 * n + 30;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    Eigen::VectorXd w = A.transpose() * (b - A * x);
    const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) *
                       std::max(1.0, b.cwiseAbs().maxCoeff());

    for (int iter = 0; iter < max_iter; ++iter) {
        int t = -1;
        double wmax = tol;
        for (int j = 0; j < n; ++j)
            if (!passive[j] && w(j) > wmax) wmax = w(j), t = j;
        if (t < 0) break;  // KKT satisfied
        passive[t] = true;

        for (int guard = 0; guard <= n + 1; ++guard) {
            std::vector<int> P;
            for (int j = 0; j < n; ++j)
                if (passive[j]) P.push_back(j);
            Eigen::MatrixXd Ap(m, P.size());
            for (size_t k = 0; k < P.size(); ++k) Ap.col(k) = A.col(P[k]);
            Eigen::VectorXd z = Ap.colPivHouseholderQr().solve(b);

            double alpha = 1.0;
            bool clipped = false;
            for (size_t k = 0; k < P.size(); ++k) {
                if (z(k) <= 0.0) {
                    double a = x(P[k]) / (x(P[k]) - z(k));
                    if (a < alpha) alpha = a;
                    clipped = true;
                }
            }
            if (!clipped) {
                x.setZero();
                for (size_t k = 0; k < P.size(); ++k) x(P[k]) = z(k);
                break;
            }
            for (size_t k = 0; k < P.size(); ++k)
                x(P[k]) += alpha * (z(k) - x(P[k]));
            for (int j = 0; j < n; ++j)
                if (passive[j] && x(j) <= tol) passive[j] = false, x(j) = 0.0;
        }
        w = A.transpose() * (b - A * x);
    }
    return x;
}

}  // namespace cis
