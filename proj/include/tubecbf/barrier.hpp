#pragma once

#include <optional>
#include <vector>

#include "tubecbf/common.hpp"
#include "tubecbf/model.hpp"
#include "tubecbf/tube.hpp"

namespace tubecbf {

// h_ij(x^i, x^j) = ||x1^i - x1^j||^2 - d_min^2, relative degree r = n.
struct PairBarrier {
    double d_min = 0.5;
};

// h_iO(x^i) = ||x1^i - center||^2 - (radius + inflation)^2.
struct ObstacleBarrier {
    Vec center;
    double radius = 0.0;
    double inflation = 0.0;

    double effective_radius() const { return radius + inflation; }
};

// kappa = (kappa_0, ..., kappa_{r-1}) of the comparison polynomial
// s^r + kappa_{r-1} s^{r-1} + ... + kappa_0.
struct EcbfGains {
    Vec kappa;
};

bool hurwitz_check(const EcbfGains& gains);

// Barrier value and its Lie derivatives along the chain drift:
// orders[q] = L^q h for q = 0..r, with orders[r] the drift part only;
// input_row is the coefficient of the agent's own input in L^r h.
struct LieStack {
    std::vector<double> orders;
    Vec input_row;

    int relative_degree() const { return static_cast<int>(orders.size()) - 1; }
};

// Neighbor input u_j is taken from the neighbor's broadcast plan and folded
// into the drift term, keeping the constraint affine in the own input.
LieStack lie_stack_pair(const PairBarrier& b, const AgentState& x_i, const AgentState& x_j,
                        const DriftSpec& drift_i, const DriftSpec& drift_j,
                        const Vec& u_j, double t);

LieStack lie_stack_obstacle(const ObstacleBarrier& b, const AgentState& x_i,
                            const DriftSpec& drift_i, double t);

// Full-state gradients of the pair barrier: g_i has 2 (p_i - p_j) in the
// position block and zeros elsewhere; g_j = -g_i.
struct PairGradients {
    Vec g_i;
    Vec g_j;
};
PairGradients grad_full(const PairBarrier& b, const AgentState& x_i, const AgentState& x_j);
Vec grad_full(const ObstacleBarrier& b, const AgentState& x_i);

double margin_pair(const Vec& g_i, const Vec& g_j, const Ellipsoid& tube_i,
                   const Ellipsoid& tube_j);
double margin_obstacle(const Vec& g_iO, const Ellipsoid& tube_i);

// Affine-in-input row: constant + input_coeff . u >= 0. With delta = 0 this
// is exactly the standard eCBF expression.
struct TightenedConstraint {
    double constant = 0.0;
    Vec input_coeff;
};

TightenedConstraint phi_tight(const LieStack& stack, const EcbfGains& gains, double delta);

inline TightenedConstraint phi_tight_pair(const LieStack& stack, const EcbfGains& gains,
                                          double delta) {
    return phi_tight(stack, gains, delta);
}
inline TightenedConstraint phi_tight_obstacle(const LieStack& stack, const EcbfGains& gains,
                                              double delta) {
    return phi_tight(stack, gains, delta);
}

}  // namespace tubecbf
