#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tubecbf/common.hpp"

namespace tubecbf {

// Stacked state of one agent: n derivative-chain blocks of dimension d.
// Block p (1-based) holds the (p-1)-th derivative level; flat layout is
// [x_1; x_2; ...; x_n].
struct AgentState {
    int n = 0;
    int d = 0;
    Vec flat;

    AgentState() = default;
    AgentState(int n_, int d_) : n(n_), d(d_), flat(Vec::Zero(n_ * d_)) {
        if (n < 1 || d < 1) throw config_error("AgentState: need n >= 1 and d >= 1");
    }
    AgentState(int n_, int d_, Vec flat_) : n(n_), d(d_), flat(std::move(flat_)) {
        if (n < 1 || d < 1) throw config_error("AgentState: need n >= 1 and d >= 1");
        if (flat.size() != n * d)
            throw config_error("AgentState: flat size " + std::to_string(flat.size()) +
                               " != n*d = " + std::to_string(n * d));
    }

    // p is 1-based: block(1) = position level.
    Eigen::VectorBlock<Vec> block(int p) { return flat.segment((p - 1) * d, d); }
    Eigen::VectorBlock<const Vec> block(int p) const { return flat.segment((p - 1) * d, d); }
};

// Drift families of the closing numerical example plus a per-axis custom
// polynomial family for tests and bespoke scenarios.
enum class DriftKind {
    Leader4,
    Follower1,
    Follower2,
    Follower3,
    Follower4,
    Follower5,
    CustomPolynomial,
};

struct DriftSpec {
    DriftKind kind = DriftKind::CustomPolynomial;
    double k_a = 5.0;  // outer gain; the example leaves follower values open

    // CustomPolynomial coefficients, applied per axis c:
    //   f_c = k_a * (lin1*x1_c + lin2*x2_c + lin3*x3_c + cubic1*x1_c^3
    //                + tanh_amp*tanh(tanh_rate*x1_c) + sin_amp*sin(sin_freq*t + sin_phase))
    double lin1 = 0.0, lin2 = 0.0, lin3 = 0.0;
    double cubic1 = 0.0;
    double tanh_amp = 0.0, tanh_rate = 1.0;
    double sin_amp = 0.0, sin_freq = 0.0, sin_phase = 0.0;
};

// Evaluates only the nonlinearity f^i(x, t) in R^d (the last-block term).
Vec drift_nonlinearity(const DriftSpec& spec, const AgentState& x, double t);

// Full drift field: blocks 1..n-1 shift down the chain, block n is f^i(x, t).
Vec drift_eval(const DriftSpec& spec, const AgentState& x, double t);

// Sum of per-channel sinusoids w_c(t) = A_c sin(omega_c t + phi_c).
struct DisturbanceSignal {
    struct Channel {
        double amplitude = 0.0;
        double omega = 0.0;
        double phase = 0.0;
    };
    std::vector<Channel> channels;  // one per dimension of R^d

    int dim() const { return static_cast<int>(channels.size()); }
};

Vec disturbance_eval(const DisturbanceSignal& sig, double t);

// Euclidean norm of the amplitude vector; a sound upper bound on ||w(t)||.
double disturbance_bound(const DisturbanceSignal& sig);

// Flat-state vector field (x, t) -> xdot.
using VectorField = std::function<Vec(const Vec&, double)>;

// Chain field with constant input u and optional disturbance added in the
// last block: xdot = F_x(x,t) + G u + G w(t).
VectorField make_field(const DriftSpec& spec, int n, int d, const Vec& u);
VectorField make_field(const DriftSpec& spec, int n, int d, const Vec& u,
                       const DisturbanceSignal& w);

// Classical 4-stage Runge-Kutta step.
Vec rk4_step(const VectorField& field, const Vec& x, double t, double dt);

// Integrates over [t, t+dt] in `substeps` equal RK4 steps.
Vec rk4_integrate(const VectorField& field, const Vec& x, double t, double dt,
                  int substeps);

struct LipschitzOptions {
    int samples = 4000;
    double inflation = 1.2;
    std::uint64_t seed = 2024;
    double t_eval = 0.0;
};

// Estimates sup over the box of the spectral norm of d f / d x by sampling
// finite-difference Jacobians at box corners and random interior points,
// inflated by options.inflation.
double lipschitz_estimate(const DriftSpec& spec, int n, int d, const Box& box,
                          const LipschitzOptions& options = {});

}  // namespace tubecbf
