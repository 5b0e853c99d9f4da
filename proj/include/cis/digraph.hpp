#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cis/errors.hpp"

namespace cis {

// Weighted digraph in the receiving convention: a weight w(i, j) > 0 means
// node i receives information from node j (influence flows j -> i).
// No self-loops; stored weights are strictly positive.
class Digraph {
public:
    explicit Digraph(int n_nodes);

    void add_edge(int to, int from, double weight);

    int node_count() const { return n_; }
    double weight(int to, int from) const;  // 0 if absent
    bool has_edge(int to, int from) const { return weight(to, from) > 0.0; }
    int edge_count() const { return static_cast<int>(weights_.size()); }

    // (to, from) -> weight, ordered; iteration is deterministic.
    const std::map<std::pair<int, int>, double>& edges() const { return weights_; }

    // adjacency in influence direction: successors[q] = {p : w(p, q) > 0}
    std::vector<std::vector<int>> influence_successors() const;

private:
    void check_node(int v) const;

    int n_;
    std::map<std::pair<int, int>, double> weights_;
};

// In-degree Laplacian L = D - A: L_ii = sum_j w(i, j), L_ij = -w(i, j).
// Diagonal entries accumulate in ascending neighbor order so each row sums
// to zero exactly, bit for bit.
Eigen::MatrixXd laplacian(const Digraph& g);

struct SccDecomposition {
    // Components in block order: emitted so that, after permuting nodes
    // component-by-component, the Laplacian is block upper triangular
    // (influence flows from later blocks into earlier ones). Node indices
    // inside each component are ascending.
    std::vector<std::vector<int>> components;
    std::vector<int> component_of;
};

SccDecomposition scc_decompose(const Digraph& g);

bool is_strongly_connected(const Digraph& g);

// True iff a directed influence walk leads from `from` to `to`
// (q influences p when w(p, q) > 0); from == to counts (length-0 walk).
bool influence_reachable(const Digraph& g, int from, int to);

// The unique component reachable, along influence edges, from every node of
// the graph; nullopt when no such component exists.
std::optional<std::vector<int>> universal_sink_component(const Digraph& g);

// Reverse-graph analogue: the unique component that influence-reaches every
// node (the spanning-tree roots in the influence orientation).
std::optional<std::vector<int>> universal_source_component(const Digraph& g);

struct BlockIndexSets {
    // permutation[k] = original node sitting at block position k
    std::vector<int> permutation;
    // contiguous 0-based index ranges per component, after the permutation
    std::vector<std::vector<int>> sets;
};

BlockIndexSets component_index_sets(const SccDecomposition& d);

struct ImageCheckResult {
    bool in_image;
    double residual;
    bool strongly_connected;  // warning flag: the lemma needs strong connectivity
};

// Least-squares test of e_i in Im(L). For the transpose question pass
// L.transpose(). i is 0-based.
ImageCheckResult basis_image_check(const Eigen::MatrixXd& L, int i,
                                   double tol = 1e-8);

// Recovers the digraph whose in-degree Laplacian is L (negated off-diagonal
// entries above `tol` become edges).
Digraph digraph_from_laplacian(const Eigen::MatrixXd& L, double tol = 1e-12);

}  // namespace cis
