#include "tubecbf/topology.hpp"

#include <deque>

namespace tubecbf {

Graph::Graph(int n_agents_, Mat weights_, Vec leader_weights_, bool undirected_)
    : n_agents(n_agents_),
      weights(std::move(weights_)),
      leader_weights(std::move(leader_weights_)),
      undirected(undirected_) {
    if (weights.rows() != n_agents || weights.cols() != n_agents)
        throw config_error("Graph: adjacency must be n_agents x n_agents");
    if (leader_weights.size() != n_agents)
        throw config_error("Graph: leader weights must have n_agents entries");
    for (int i = 0; i < n_agents; ++i) {
        if (weights(i, i) != 0.0) throw config_error("Graph: nonzero diagonal entry");
        if (leader_weights[i] < 0.0) throw config_error("Graph: negative leader weight");
        for (int j = 0; j < n_agents; ++j) {
            if (weights(i, j) < 0.0) throw config_error("Graph: negative edge weight");
            if (undirected && weights(i, j) != weights(j, i))
                throw config_error("Graph: undirected flag set but weights asymmetric");
        }
    }
}

std::vector<int> Graph::neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n_agents; ++j)
        if (weights(i, j) > 0.0) out.push_back(j);
    return out;
}

Mat laplacian(const Graph& g) {
    Mat L = -g.weights;
    for (int i = 0; i < g.n_agents; ++i) L(i, i) = g.weights.row(i).sum();
    return L;
}

Mat augmented(const Graph& g) {
    Mat LB = laplacian(g);
    LB.diagonal() += g.leader_weights;
    return LB;
}

bool spanning_tree_check(const Graph& g) {
    std::vector<bool> reached(g.n_agents, false);
    std::deque<int> frontier;
    for (int i = 0; i < g.n_agents; ++i)
        if (g.leader_weights[i] > 0.0) {
            reached[i] = true;
            frontier.push_back(i);
        }
    while (!frontier.empty()) {
        const int j = frontier.front();
        frontier.pop_front();
        for (int i = 0; i < g.n_agents; ++i)
            if (!reached[i] && g.weights(i, j) > 0.0) {  // j -> i
                reached[i] = true;
                frontier.push_back(i);
            }
    }
    for (int i = 0; i < g.n_agents; ++i)
        if (!reached[i]) return false;
    return true;
}

Graph proximity_augment(const Graph& g, const std::vector<Vec>& positions, double phi) {
    if (!(phi > 0.0)) throw config_error("proximity_augment: phi must be positive");
    if (static_cast<int>(positions.size()) != g.n_agents)
        throw config_error("proximity_augment: need one position per agent");
    Graph out = g;
    for (int i = 0; i < g.n_agents; ++i)
        for (int j = i + 1; j < g.n_agents; ++j) {
            if ((positions[i] - positions[j]).norm() > phi) continue;
            if (out.weights(i, j) == 0.0) out.weights(i, j) = 1.0;
            if (out.weights(j, i) == 0.0) out.weights(j, i) = 1.0;
        }
    return out;
}

Vec stability_error(int i, const std::vector<AgentState>& states,
                    const AgentState& leader_state, const FormationSpec& formation,
                    const Vec& lambda, double nu1, double nu2, const Graph& g) {
    if (i < 0 || i >= g.n_agents) throw config_error("stability_error: agent index out of range");
    if (static_cast<int>(states.size()) != g.n_agents)
        throw config_error("stability_error: need one state per agent");
    const int n = states[i].n, d = states[i].d;
    if (lambda.size() != n) throw config_error("stability_error: lambda must have n entries");

    Vec r = Vec::Zero(d);
    for (int p = 1; p <= n; ++p) {
        const Vec own = states[i].block(p) - formation.offset(i, p);
        for (int j = 0; j < g.n_agents; ++j) {
            const double a = g.weights(i, j);
            if (a == 0.0) continue;
            const Vec other = states[j].block(p) - formation.offset(j, p);
            r -= nu1 * lambda[p - 1] * a * (own - other);
        }
        const double b = g.leader_weights[i];
        if (b != 0.0) {
            const Vec lead = leader_state.block(p) - formation.leader_offset(p);
            r -= nu2 * lambda[p - 1] * b * (own - lead);
        }
    }
    return r;
}

}  // namespace tubecbf
