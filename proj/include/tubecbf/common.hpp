#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace tubecbf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Invalid dimensions, unknown kinds, bad parameter values.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gain/Lyapunov synthesis failures (non-Hurwitz closed loop, no solution).
class synthesis_error : public std::runtime_error {
public:
    explicit synthesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lemma-1 precondition violated: lambda_min(Q) <= 2 L_f lambda_max(P).
class tube_infeasible_error : public std::runtime_error {
public:
    tube_infeasible_error(const std::string& msg, double decay_ratio, double lipschitz)
        : std::runtime_error(msg), decay_ratio(decay_ratio), lipschitz(lipschitz) {}
    double decay_ratio;  // lambda_min(Q) / (2 lambda_max(P))
    double lipschitz;    // the L_f it lost against
};

// Non-finite values encountered during numeric evaluation.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Per-coordinate interval set [lo_k, hi_k].
struct Box {
    Vec lo;
    Vec hi;

    Box() = default;
    Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size())
            throw config_error("Box: lo/hi size mismatch");
        for (Eigen::Index k = 0; k < lo.size(); ++k)
            if (!(lo[k] <= hi[k]))
                throw config_error("Box: lo > hi at coordinate " + std::to_string(k));
    }

    static Box centered(const Vec& half_width) {
        return Box(-half_width, half_width);
    }

    Eigen::Index size() const { return lo.size(); }

    bool contains(const Vec& x, double tol = 0.0) const {
        return (x.array() >= lo.array() - tol).all() &&
               (x.array() <= hi.array() + tol).all();
    }

    Vec clamp(const Vec& x) const {
        return x.cwiseMax(lo).cwiseMin(hi);
    }
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace tubecbf
