#include "tubecbf/barrier.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace tubecbf {

bool hurwitz_check(const EcbfGains& gains) {
    const int r = static_cast<int>(gains.kappa.size());
    if (r == 0) return false;
    // companion matrix of s^r + kappa_{r-1} s^{r-1} + ... + kappa_0
    Mat C = Mat::Zero(r, r);
    if (r > 1) C.topRightCorner(r - 1, r - 1) = Mat::Identity(r - 1, r - 1);
    for (int q = 0; q < r; ++q) C(r - 1, q) = -gains.kappa[q];
    Eigen::EigenSolver<Mat> es(C, false);
    return es.eigenvalues().real().maxCoeff() < 0.0;
}

namespace {

// Kinematic Lie orders shared by both barrier families. For a quadratic
// distance barrier h = ||dp||^2 - r^2 on an n-chain the derivatives along the
// flow are polynomial in the relative blocks, with the drift/input entering
// only at order n.
LieStack chain_stack(int n, const Vec& dp, const Vec& dv, const Vec& da,
                     double h0, const Vec& last_block_drift) {
    LieStack stack;
    stack.orders.resize(n + 1);
    stack.orders[0] = h0;
    switch (n) {
        case 1:
            stack.orders[1] = 2.0 * dp.dot(last_block_drift);
            break;
        case 2:
            stack.orders[1] = 2.0 * dp.dot(dv);
            stack.orders[2] = 2.0 * dv.squaredNorm() + 2.0 * dp.dot(last_block_drift);
            break;
        case 3:
            stack.orders[1] = 2.0 * dp.dot(dv);
            stack.orders[2] = 2.0 * dv.squaredNorm() + 2.0 * dp.dot(da);
            stack.orders[3] = 6.0 * dv.dot(da) + 2.0 * dp.dot(last_block_drift);
            break;
        default:
            throw config_error("lie_stack: closed forms implemented for n <= 3, got n = " +
                               std::to_string(n));
    }
    stack.input_row = 2.0 * dp;
    return stack;
}

}  // namespace

LieStack lie_stack_pair(const PairBarrier& b, const AgentState& x_i, const AgentState& x_j,
                        const DriftSpec& drift_i, const DriftSpec& drift_j,
                        const Vec& u_j, double t) {
    if (x_i.n != x_j.n || x_i.d != x_j.d)
        throw config_error("lie_stack_pair: agent state dimensions differ");
    const int n = x_i.n, d = x_i.d;
    if (u_j.size() != 0 && u_j.size() != d)
        throw config_error("lie_stack_pair: neighbor input dimension mismatch");

    const Vec dp = x_i.block(1) - x_j.block(1);
    const Vec dv = n >= 2 ? Vec(x_i.block(2) - x_j.block(2)) : Vec(Vec::Zero(d));
    const Vec da = n >= 3 ? Vec(x_i.block(3) - x_j.block(3)) : Vec(Vec::Zero(d));

    Vec drift = drift_nonlinearity(drift_i, x_i, t) - drift_nonlinearity(drift_j, x_j, t);
    if (u_j.size() == d) drift -= u_j;

    const double h0 = dp.squaredNorm() - b.d_min * b.d_min;
    return chain_stack(n, dp, dv, da, h0, drift);
}

LieStack lie_stack_obstacle(const ObstacleBarrier& b, const AgentState& x_i,
                            const DriftSpec& drift_i, double t) {
    const int n = x_i.n, d = x_i.d;
    if (b.center.size() != d)
        throw config_error("lie_stack_obstacle: obstacle center dimension mismatch");
    if (!(b.effective_radius() > 0.0))
        throw config_error("lie_stack_obstacle: effective radius must be positive");

    const Vec dp = x_i.block(1) - b.center;
    const Vec dv = n >= 2 ? Vec(x_i.block(2)) : Vec(Vec::Zero(d));
    const Vec da = n >= 3 ? Vec(x_i.block(3)) : Vec(Vec::Zero(d));
    const Vec drift = drift_nonlinearity(drift_i, x_i, t);

    const double reff = b.effective_radius();
    const double h0 = dp.squaredNorm() - reff * reff;
    return chain_stack(n, dp, dv, da, h0, drift);
}

PairGradients grad_full(const PairBarrier&, const AgentState& x_i, const AgentState& x_j) {
    const int n = x_i.n, d = x_i.d;
    PairGradients g;
    g.g_i = Vec::Zero(n * d);
    g.g_i.head(d) = 2.0 * (x_i.block(1) - x_j.block(1));
    g.g_j = -g.g_i;
    return g;
}

Vec grad_full(const ObstacleBarrier& b, const AgentState& x_i) {
    const int n = x_i.n, d = x_i.d;
    Vec g = Vec::Zero(n * d);
    g.head(d) = 2.0 * (x_i.block(1) - b.center);
    return g;
}

double margin_pair(const Vec& g_i, const Vec& g_j, const Ellipsoid& tube_i,
                   const Ellipsoid& tube_j) {
    return support(tube_i, g_i) + support(tube_j, g_j);
}

double margin_obstacle(const Vec& g_iO, const Ellipsoid& tube_i) {
    return support(tube_i, g_iO);
}

TightenedConstraint phi_tight(const LieStack& stack, const EcbfGains& gains, double delta) {
    const int r = stack.relative_degree();
    if (gains.kappa.size() != r)
        throw config_error("phi_tight: gain count must equal the relative degree");
    TightenedConstraint c;
    c.constant = stack.orders[r];
    for (int q = 1; q < r; ++q) c.constant += gains.kappa[q] * stack.orders[q];
    c.constant += gains.kappa[0] * (stack.orders[0] - delta);
    c.input_coeff = stack.input_row;
    return c;
}

}  // namespace tubecbf
