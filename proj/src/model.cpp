#include "tubecbf/model.hpp"

#include <cmath>
#include <random>

namespace tubecbf {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_dims(const DriftSpec&, const AgentState& x) {
    if (x.n < 1 || x.d < 1 || x.flat.size() != x.n * x.d)
        throw config_error("drift_eval: state dimensions inconsistent");
}

}  // namespace

Vec drift_nonlinearity(const DriftSpec& spec, const AgentState& x, double t) {
    check_dims(spec, x);
    const int d = x.d;
    const double k = spec.k_a;
    Vec f = Vec::Zero(d);

    auto lvl = [&](int p, int c) -> double {
        return (p <= x.n) ? x.flat[(p - 1) * d + c] : 0.0;
    };

    switch (spec.kind) {
        case DriftKind::Leader4: {
            if (d != 2) throw config_error("leader-sec4 drift requires d = 2");
            for (int c = 0; c < 2; ++c) {
                const double p1 = lvl(1, c), p2 = lvl(2, c), p3 = lvl(3, c);
                const double phase = (c == 0) ? 0.0 : kPi / 2.0;
                f[c] = -k * (p3 + 0.36 * p1 + 0.84 * p2 + 0.15 * p1 * p1 * p1 -
                             0.4 * std::sin(0.8 * t + phase));
            }
            break;
        }
        case DriftKind::Follower1: {
            if (d != 2) throw config_error("follower1-sec4 drift requires d = 2");
            for (int c = 0; c < 2; ++c) {
                const double p1 = lvl(1, c), p2 = lvl(2, c), p3 = lvl(3, c);
                f[c] = -k * (p3 + 0.49 * p1 + 1.12 * p2 + 0.12 * p1 * p1 * p1 -
                             0.25 * std::tanh(0.6 * p1));
            }
            break;
        }
        case DriftKind::Follower2: {
            if (d != 2) throw config_error("follower2-sec4 drift requires d = 2");
            for (int c = 0; c < 2; ++c) {
                const double p1 = lvl(1, c), p2 = lvl(2, c), p3 = lvl(3, c);
                const double p1o = lvl(1, 1 - c);  // other axis position
                f[c] = -k * (p3 + 0.36 * p1 + 0.84 * p2 + 0.18 * p1 * p1 * p1 -
                             0.15 * p1o * p1o * std::tanh(p1));
            }
            break;
        }
        case DriftKind::Follower3: {
            if (d != 2) throw config_error("follower3-sec4 drift requires d = 2");
            for (int c = 0; c < 2; ++c) {
                const double p1 = lvl(1, c), p2 = lvl(2, c), p3 = lvl(3, c);
                const double force = (c == 0) ? 0.20 * std::sin(0.7 * t)
                                              : 0.20 * std::sin(0.9 * t + kPi / 3.0);
                f[c] = -k * (p3 + 0.25 * std::tanh(p1) + 0.9 * std::tanh(p2) - force);
            }
            break;
        }
        case DriftKind::Follower4: {
            if (d != 2) throw config_error("follower4-sec4 drift requires d = 2");
            const double s = lvl(1, 0) + lvl(1, 1);
            const double m = lvl(1, 0) - lvl(1, 1);
            f[0] = -k * (lvl(3, 0) + 0.4225 * lvl(1, 0) + 0.975 * lvl(2, 0) +
                         0.08 * s * s * s);
            f[1] = -k * (lvl(3, 1) + 0.4225 * lvl(1, 1) + 0.975 * lvl(2, 1) -
                         0.08 * m * m * m);
            break;
        }
        case DriftKind::Follower5: {
            if (d != 2) throw config_error("follower5-sec4 drift requires d = 2");
            for (int c = 0; c < 2; ++c) {
                const double p1 = lvl(1, c), p2 = lvl(2, c), p3 = lvl(3, c);
                f[c] = -k * (p3 + 0.3025 * p1 + 0.88 * p2 + 0.15 * p1 * p1 * p1 -
                             0.20 * std::tanh(0.5 * p1));
            }
            break;
        }
        case DriftKind::CustomPolynomial: {
            for (int c = 0; c < d; ++c) {
                const double p1 = lvl(1, c), p2 = lvl(2, c), p3 = lvl(3, c);
                f[c] = k * (spec.lin1 * p1 + spec.lin2 * p2 + spec.lin3 * p3 +
                            spec.cubic1 * p1 * p1 * p1 +
                            spec.tanh_amp * std::tanh(spec.tanh_rate * p1) +
                            spec.sin_amp * std::sin(spec.sin_freq * t + spec.sin_phase));
            }
            break;
        }
    }
    return f;
}

Vec drift_eval(const DriftSpec& spec, const AgentState& x, double t) {
    check_dims(spec, x);
    const int n = x.n, d = x.d;
    Vec out(n * d);
    // integrator chain: output block p = state block p+1
    if (n > 1) out.head((n - 1) * d) = x.flat.tail((n - 1) * d);
    out.tail(d) = drift_nonlinearity(spec, x, t);
    return out;
}

Vec disturbance_eval(const DisturbanceSignal& sig, double t) {
    Vec w(sig.dim());
    for (int c = 0; c < sig.dim(); ++c) {
        const auto& ch = sig.channels[c];
        w[c] = ch.amplitude * std::sin(ch.omega * t + ch.phase);
    }
    return w;
}

double disturbance_bound(const DisturbanceSignal& sig) {
    double s = 0.0;
    for (const auto& ch : sig.channels) s += ch.amplitude * ch.amplitude;
    return std::sqrt(s);
}

VectorField make_field(const DriftSpec& spec, int n, int d, const Vec& u) {
    if (u.size() != 0 && u.size() != d)
        throw config_error("make_field: input dimension mismatch");
    Vec u_ = u;
    return [spec, n, d, u_](const Vec& x, double t) -> Vec {
        Vec dx = drift_eval(spec, AgentState(n, d, x), t);
        if (u_.size() == d) dx.tail(d) += u_;
        return dx;
    };
}

VectorField make_field(const DriftSpec& spec, int n, int d, const Vec& u,
                       const DisturbanceSignal& w) {
    if (w.dim() != d) throw config_error("make_field: disturbance dimension mismatch");
    VectorField base = make_field(spec, n, d, u);
    return [base, w, d](const Vec& x, double t) -> Vec {
        Vec dx = base(x, t);
        dx.tail(d) += disturbance_eval(w, t);
        return dx;
    };
}

Vec rk4_step(const VectorField& field, const Vec& x, double t, double dt) {
    if (!(dt > 0.0)) throw config_error("rk4_step: dt must be positive");
    const Vec k1 = field(x, t);
    const Vec k2 = field(x + 0.5 * dt * k1, t + 0.5 * dt);
    const Vec k3 = field(x + 0.5 * dt * k2, t + 0.5 * dt);
    const Vec k4 = field(x + dt * k3, t + dt);
    Vec out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(out)) throw numeric_error("rk4_step: non-finite state");
    return out;
}

Vec rk4_integrate(const VectorField& field, const Vec& x, double t, double dt,
                  int substeps) {
    if (substeps < 1) throw config_error("rk4_integrate: substeps must be >= 1");
    Vec cur = x;
    const double h = dt / substeps;
    for (int s = 0; s < substeps; ++s) cur = rk4_step(field, cur, t + s * h, h);
    return cur;
}

double lipschitz_estimate(const DriftSpec& spec, int n, int d, const Box& box,
                          const LipschitzOptions& options) {
    const int m = n * d;
    if (box.size() != m) throw config_error("lipschitz_estimate: box dimension mismatch");
    if (options.samples < 2) throw config_error("lipschitz_estimate: need samples >= 2");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<Vec> points;
    // box corners catch the boundary-attained suprema of polynomial drifts
    if (m <= 20) {
        const std::int64_t corners = std::int64_t{1} << m;
        if (corners <= options.samples) {
            for (std::int64_t mask = 0; mask < corners; ++mask) {
                Vec p(m);
                for (int k = 0; k < m; ++k)
                    p[k] = (mask >> k) & 1 ? box.hi[k] : box.lo[k];
                points.push_back(std::move(p));
            }
        }
    }
    while (static_cast<int>(points.size()) < options.samples) {
        Vec p(m);
        for (int k = 0; k < m; ++k)
            p[k] = box.lo[k] + unif(rng) * (box.hi[k] - box.lo[k]);
        points.push_back(std::move(p));
    }

    const double t = options.t_eval;
    double worst = 0.0;
    Mat jac(d, m);
    for (const Vec& p : points) {
        for (int k = 0; k < m; ++k) {
            const double width = box.hi[k] - box.lo[k];
            const double eps = std::max(1e-7, 1e-7 * width);
            Vec xp = p, xm = p;
            xp[k] += eps;
            xm[k] -= eps;
            const Vec fp = drift_nonlinearity(spec, AgentState(n, d, xp), t);
            const Vec fm = drift_nonlinearity(spec, AgentState(n, d, xm), t);
            jac.col(k) = (fp - fm) / (2.0 * eps);
        }
        Eigen::JacobiSVD<Mat> svd(jac);
        worst = std::max(worst, svd.singularValues()[0]);
    }
    return options.inflation * worst;
}

}  // namespace tubecbf
