#pragma once

#include <vector>

#include "tubecbf/common.hpp"
#include "tubecbf/model.hpp"

namespace tubecbf {

// Communication graph over follower agents plus leader pinning weights.
struct Graph {
    int n_agents = 0;
    Mat weights;        // a_ij >= 0, zero diagonal; a_ij > 0 means j -> i
    Vec leader_weights; // b_i0 >= 0
    bool undirected = true;

    Graph() = default;
    Graph(int n_agents_, Mat weights_, Vec leader_weights_, bool undirected_ = true);

    std::vector<int> neighbors(int i) const;  // 0-based agent index
};

Mat laplacian(const Graph& g);
Mat augmented(const Graph& g);  // L + B_0

// True iff every agent is reachable from the leader through b_i0 > 0 roots
// and a_ij > 0 edges (information flows j -> i).
bool spanning_tree_check(const Graph& g);

// Adds symmetric unit-weight edges between every pair whose positions are
// within phi; existing edges are preserved.
Graph proximity_augment(const Graph& g, const std::vector<Vec>& positions, double phi);

// Desired state offsets from the leader: offsets[i][p-1] in R^d for agent i
// and block p; leader_offsets[p-1] for the leader.
struct FormationSpec {
    std::vector<std::vector<Vec>> offsets;
    std::vector<Vec> leader_offsets;

    const Vec& offset(int agent, int block) const { return offsets[agent][block - 1]; }
    const Vec& leader_offset(int block) const { return leader_offsets[block - 1]; }
};

// Local weighted stability error
//   r^i = -nu1 sum_p sum_j lambda_p a_ij [(x_p^i - psi_p^i) - (x_p^j - psi_p^j)]
//         -nu2 sum_p lambda_p b_i0 [(x_p^i - psi_p^i) - (x_p^0 - psi_p^0)].
// lambda has n entries (lambda_1 .. lambda_n).
Vec stability_error(int i, const std::vector<AgentState>& states,
                    const AgentState& leader_state, const FormationSpec& formation,
                    const Vec& lambda, double nu1, double nu2, const Graph& g);

}  // namespace tubecbf
