#pragma once

#include <Eigen/Dense>
#include <random>

#include "cis/digraph.hpp"

namespace test_helpers {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Hurwitz Metzler matrix whose off-diagonal pattern contains a bidirectional
// ring: irreducible by construction, influence diameter <= n/2, so resolvent
// entries stay numerically resolvable even at large shifts.
inline MatrixXd random_metzler_stable(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ring(0.5, 1.5), extra(0.1, 1.0);
    std::uniform_real_distribution<double> margin(0.1, 1.0), coin(0.0, 1.0);
    MatrixXd A = MatrixXd::Zero(n, n);
    for (int i = 0; i < n && n > 1; ++i) {
        int next = (i + 1) % n;
        A(i, next) = ring(rng);
        A(next, i) = ring(rng);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && A(i, j) == 0.0 && coin(rng) < 0.4) A(i, j) = extra(rng);
    for (int i = 0; i < n; ++i) {
        double row = A.row(i).sum() - A(i, i);
        A(i, i) = -row - margin(rng);
    }
    return A;
}

// Hurwitz matrix with at least one clearly negative off-diagonal entry.
inline MatrixXd random_nonmetzler_stable(int n, std::mt19937_64& rng) {
    MatrixXd A = random_metzler_stable(n, rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    int i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    A(i, j) = -mag(rng);
    double mre = A.eigenvalues().real().maxCoeff();
    if (mre > -0.05) A.diagonal().array() -= (mre + 0.1);
    return A;
}

inline cis::Digraph random_strongly_connected(int n, std::mt19937_64& rng,
                                              double extra_p = 0.35) {
    std::uniform_real_distribution<double> w(0.5, 2.0), coin(0.0, 1.0);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    cis::Digraph g(n);
    for (int i = 0; i < n && n > 1; ++i)
        g.add_edge(order[(i + 1) % n], order[i], w(rng));  // full influence cycle
    for (int to = 0; to < n; ++to)
        for (int from = 0; from < n; ++from)
            if (to != from && !g.has_edge(to, from) && coin(rng) < extra_p)
                g.add_edge(to, from, w(rng));
    return g;
}

inline cis::Digraph random_digraph(int n, std::mt19937_64& rng, double p = 0.3) {
    std::uniform_real_distribution<double> w(0.5, 2.0), coin(0.0, 1.0);
    cis::Digraph g(n);
    for (int to = 0; to < n; ++to)
        for (int from = 0; from < n; ++from)
            if (to != from && coin(rng) < p) g.add_edge(to, from, w(rng));
    return g;
}

// Reachability closure computed by repeated boolean squaring; independent of
// the library's BFS. reach(q, p) == walk of influence q -> p.
inline std::vector<std::vector<bool>> reachability_oracle(const cis::Digraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<bool>> R(n, std::vector<bool>(n, false));
    for (int q = 0; q < n; ++q) {
        R[q][q] = true;
        for (int p = 0; p < n; ++p)
            if (g.weight(p, q) > 0.0) R[q][p] = true;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (R[a][b]) continue;
                for (int k = 0; k < n; ++k)
                    if (R[a][k] && R[k][b]) {
                        R[a][b] = true;
                        changed = true;
                        break;
                    }
            }
    }
    return R;
}

}  // namespace test_helpers
