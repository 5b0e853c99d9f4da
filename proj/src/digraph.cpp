#include "cis/digraph.hpp"

#include <algorithm>
#include <stack>
#include <string>

namespace cis {

Digraph::Digraph(int n_nodes) : n_(n_nodes) {
    if (n_nodes < 1) throw DimensionError("digraph: need at least one node");
}

void Digraph::check_node(int v) const {
    if (v < 0 || v >= n_)
        throw DimensionError("digraph: node index " + std::to_string(v) +
                             " out of range [0, " + std::to_string(n_) + ")");
}

void Digraph::add_edge(int to, int from, double weight) {
    check_node(to);
    check_node(from);
    if (to == from) throw std::invalid_argument("digraph: self-loops are not allowed");
    if (!(weight > 0.0))
        throw std::invalid_argument("digraph: edge weights must be strictly positive");
    auto [it, inserted] = weights_.emplace(std::make_pair(to, from), weight);
    if (!inserted)
        throw std::invalid_argument("digraph: duplicate edge (" + std::to_string(to) +
                                    " <- " + std::to_string(from) + ")");
}

double Digraph::weight(int to, int from) const {
    check_node(to);
    check_node(from);
    auto it = weights_.find({to, from});
    return it == weights_.end() ? 0.0 : it->second;
}

std::vector<std::vector<int>> Digraph::influence_successors() const {
    std::vector<std::vector<int>> succ(n_);
    for (const auto& [edge, w] : weights_) succ[edge.second].push_back(edge.first);
    return succ;
}

Eigen::MatrixXd laplacian(const Digraph& g) {
    const int n = g.node_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    // edges() iterates (to, from) in ascending order, so row i accumulates its
    // in-weights with ascending j; the diagonal is the same ordered sum and the
    // row total cancels exactly.
    for (const auto& [edge, w] : g.edges()) {
        L(edge.first, edge.second) = -w;
        L(edge.first, edge.first) += w;
    }
    return L;
}

namespace {

// Iterative Tarjan over the influence adjacency. SCCs complete in reverse
// topological order of influence (sink components first), which makes the
// block-permuted Laplacian upper triangular.
struct TarjanState {
    const std::vector<std::vector<int>>& succ;
    std::vector<int> index, lowlink;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    explicit TarjanState(const std::vector<std::vector<int>>& s)
        : succ(s), index(s.size(), -1), lowlink(s.size(), 0), on_stack(s.size(), false) {}

    void run(int root) {
        struct Frame {
            int v;
            size_t next_child;
        };
        std::stack<Frame> frames;
        frames.push({root, 0});
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            Frame& f = frames.top();
            if (f.next_child < succ[f.v].size()) {
                int w = succ[f.v][f.next_child++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                int v = f.v;
                frames.pop();
                if (!frames.empty())
                    lowlink[frames.top().v] = std::min(lowlink[frames.top().v], lowlink[v]);
                if (lowlink[v] == index[v]) {
                    std::vector<int> scc;
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(scc.begin(), scc.end());
                    sccs.push_back(std::move(scc));
                }
            }
        }
    }
};

}  // namespace

SccDecomposition scc_decompose(const Digraph& g) {
    auto succ = g.influence_successors();
    TarjanState t(succ);
    for (int v = 0; v < g.node_count(); ++v)
        if (t.index[v] == -1) t.run(v);

    SccDecomposition d;
    d.components = std::move(t.sccs);
    d.component_of.assign(g.node_count(), -1);
    for (size_t c = 0; c < d.components.size(); ++c)
        for (int v : d.components[c]) d.component_of[v] = static_cast<int>(c);
    return d;
}

bool is_strongly_connected(const Digraph& g) {
    return scc_decompose(g).components.size() == 1;
}

namespace {

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& succ, int start) {
    std::vector<bool> seen(succ.size(), false);
    std::vector<int> todo{start};
    seen[start] = true;
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        for (int w : succ[v])
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

}  // namespace

bool influence_reachable(const Digraph& g, int from, int to) {
    if (from < 0 || from >= g.node_count() || to < 0 || to >= g.node_count())
        throw DimensionError("influence_reachable: node index out of range");
    if (from == to) return true;
    return reachable_from(g.influence_successors(), from)[to];
}

std::optional<std::vector<int>> universal_sink_component(const Digraph& g) {
    SccDecomposition d = scc_decompose(g);
    const int m = static_cast<int>(d.components.size());
    if (m == 1) return d.components[0];

    // Sink components have no outgoing influence in the condensation. A
    // component reachable from everything must be the unique sink.
    auto succ = g.influence_successors();
    std::vector<bool> has_out(m, false);
    for (int q = 0; q < g.node_count(); ++q)
        for (int p : succ[q])
            if (d.component_of[q] != d.component_of[p]) has_out[d.component_of[q]] = true;

    int sink = -1;
    for (int c = 0; c < m; ++c) {
        if (!has_out[c]) {
            if (sink != -1) return std::nullopt;  // two sinks: neither is universal
            sink = c;
        }
    }
    if (sink == -1) return std::nullopt;

    int probe = d.components[sink][0];
    for (int v = 0; v < g.node_count(); ++v)
        if (!influence_reachable(g, v, probe)) return std::nullopt;
    return d.components[sink];
}

std::optional<std::vector<int>> universal_source_component(const Digraph& g) {
    Digraph reversed(g.node_count());
    for (const auto& [edge, w] : g.edges())
        reversed.add_edge(edge.second, edge.first, w);
    return universal_sink_component(reversed);
}

BlockIndexSets component_index_sets(const SccDecomposition& d) {
    BlockIndexSets out;
    int pos = 0;
    for (const auto& comp : d.components) {
        std::vector<int> range;
        for (int v : comp) {
            out.permutation.push_back(v);
            range.push_back(pos++);
        }
        out.sets.push_back(std::move(range));
    }
    return out;
}

ImageCheckResult basis_image_check(const Eigen::MatrixXd& L, int i, double tol) {
    if (L.rows() != L.cols()) throw DimensionError("basis_image_check: L must be square");
    if (i < 0 || i >= L.rows())
        throw DimensionError("basis_image_check: index out of range");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(L.rows());
    e(i) = 1.0;
    Eigen::VectorXd x = L.completeOrthogonalDecomposition().solve(e);
    double residual = (L * x - e).norm();

    bool sc = true;
    try {
        sc = is_strongly_connected(digraph_from_laplacian(L));
    } catch (const std::exception&) {
        sc = false;  // not a Laplacian at all; the lemma's premise fails anyway
    }
    return {residual <= tol, residual, sc};
}

Digraph digraph_from_laplacian(const Eigen::MatrixXd& L, double tol) {
    if (L.rows() != L.cols())
        throw DimensionError("digraph_from_laplacian: matrix must be square");
    const int n = static_cast<int>(L.rows());
    double thresh = tol * std::max(1.0, L.cwiseAbs().maxCoeff());
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && -L(i, j) > thresh) g.add_edge(i, j, -L(i, j));
    return g;
}

}  // namespace cis
