#include "tubecbf/qp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <vector>

namespace tubecbf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rotation helpers for the QR factors maintained by the dual active-set
// method. J starts as L^{-T} (so J J' = G^{-1}) and is kept orthogonal in the
// transformed metric; R is the triangular factor of the active normals.
struct Workspace {
    int n;
    Mat J;
    Mat R;
    std::vector<int> active;   // constraint ids; < n_eq are equalities
    Vec u;                     // multipliers of active constraints
    int q = 0;

    explicit Workspace(int n_) : n(n_), J(Mat::Zero(n_, n_)), R(Mat::Zero(n_, n_)), u(Vec::Zero(n_ + 1)) {
        active.reserve(n_);
    }
};

void compute_steps(const Workspace& ws, const Vec& np, Vec& d, Vec& z, Vec& r) {
    d = ws.J.transpose() * np;
    z = ws.J.rightCols(ws.n - ws.q) * d.tail(ws.n - ws.q);
    r.resize(ws.q);
    // back substitution on the leading q x q block of R
    for (int i = ws.q - 1; i >= 0; --i) {
        double s = d[i];
        for (int k = i + 1; k < ws.q; ++k) s -= ws.R(i, k) * r[k];
        r[i] = s / ws.R(i, i);
    }
}

bool add_constraint(Workspace& ws, Vec& d, double& rnorm) {
    // rotate d[q+1..n-1] into d[q], applying the same rotations to J columns
    for (int k = ws.n - 1; k > ws.q; --k) {
        double a = d[k - 1], b = d[k];
        double h = std::hypot(a, b);
        if (h == 0.0) continue;
        double cc = a / h, ss = b / h;
        if (cc < 0.0) { cc = -cc; ss = -ss; h = -h; }
        d[k - 1] = h;
        d[k] = 0.0;
        // xny trick from the classical implementation keeps precision
        const double xny = ss / (1.0 + cc);
        for (int i = 0; i < ws.n; ++i) {
            const double t1 = ws.J(i, k - 1), t2 = ws.J(i, k);
            ws.J(i, k - 1) = t1 * cc + t2 * ss;
            ws.J(i, k) = xny * (t1 + ws.J(i, k - 1)) - t2;
        }
    }
    rnorm = std::abs(d[ws.q]);
    if (rnorm < 1e-12) return false;  // linearly dependent on active set
    ws.R.col(ws.q).head(ws.q + 1) = d.head(ws.q + 1);
    ++ws.q;
    return true;
}

void delete_constraint(Workspace& ws, int l) {
    // l is the position in the active set
    for (int i = l; i < ws.q - 1; ++i) {
        ws.R.col(i).head(ws.q) = ws.R.col(i + 1).head(ws.q);
        ws.u[i] = ws.u[i + 1];
        ws.active[i] = ws.active[i + 1];
    }
    ws.active.pop_back();
    --ws.q;
    // re-triangularize rows l..q of the shifted R
    for (int j = l; j < ws.q; ++j) {
        double a = ws.R(j, j), b = ws.R(j + 1, j);
        double h = std::hypot(a, b);
        if (h == 0.0) continue;
        double cc = a / h, ss = b / h;
        if (cc < 0.0) { cc = -cc; ss = -ss; h = -h; }
        ws.R(j, j) = h;
        ws.R(j + 1, j) = 0.0;
        const double xny = ss / (1.0 + cc);
        for (int k = j + 1; k < ws.q; ++k) {
            const double t1 = ws.R(j, k), t2 = ws.R(j + 1, k);
            ws.R(j, k) = t1 * cc + t2 * ss;
            ws.R(j + 1, k) = xny * (t1 + ws.R(j, k)) - t2;
        }
        for (int i = 0; i < ws.n; ++i) {
            const double t1 = ws.J(i, j), t2 = ws.J(i, j + 1);
            ws.J(i, j) = t1 * cc + t2 * ss;
            ws.J(i, j + 1) = xny * (ws.J(i, j) + t1) - t2;
        }
    }
}

}  // namespace

QpResult solve_qp(const Mat& G, const Vec& g, const Mat& CE, const Vec& ce0,
                  const Mat& CI, const Vec& ci0) {
    const int n = static_cast<int>(G.rows());
    const int n_eq = static_cast<int>(CE.cols());
    const int n_in = static_cast<int>(CI.cols());
    if (G.cols() != n || g.size() != n)
        throw config_error("solve_qp: objective dimension mismatch");
    if ((n_eq && CE.rows() != n) || ce0.size() != n_eq)
        throw config_error("solve_qp: equality dimension mismatch");
    if ((n_in && CI.rows() != n) || ci0.size() != n_in)
        throw config_error("solve_qp: inequality dimension mismatch");

    QpResult res;
    res.eq_multipliers = Vec::Zero(n_eq);
    res.ineq_multipliers = Vec::Zero(n_in);

    Eigen::LLT<Mat> llt(G);
    if (llt.info() != Eigen::Success)
        throw config_error("solve_qp: G is not positive definite");

    Workspace ws(n);
    // J = L^{-T}
    ws.J = llt.matrixL().solve(Mat::Identity(n, n)).transpose();

    Vec x = -llt.solve(g);

    Vec d(n), z(n), r;
    const int max_ops = 100 * (n + n_eq + n_in + 1);
    int ops = 0;

    // equality constraints first; they can never be dropped
    for (int k = 0; k < n_eq; ++k) {
        const Vec np = CE.col(k);
        compute_steps(ws, np, d, z, r);
        const double s = np.dot(x) + ce0[k];
        const double z2 = z.squaredNorm();
        double t2 = 0.0;
        if (z2 > 1e-24) t2 = -s / z.dot(np);
        else if (std::abs(s) > 1e-9 * (1.0 + std::abs(ce0[k]))) {
            res.status = QpResult::Status::Infeasible;  // inconsistent equality
            return res;
        }
        x += t2 * z;
        for (int i = 0; i < ws.q; ++i) ws.u[i] -= t2 * r[i];
        ws.u[ws.q] = t2;
        double rnorm = 0.0;
        if (!add_constraint(ws, d, rnorm)) {
            if (std::abs(s) > 1e-9 * (1.0 + std::abs(ce0[k]))) {
                res.status = QpResult::Status::Degenerate;
                return res;
            }
            continue;  // dependent but consistent equality
        }
        ws.active.push_back(k);
    }
    const int eq_active = ws.q;

    auto slack = [&](int i) { return CI.col(i).dot(x) + ci0[i]; };

    while (true) {
        if (++ops > max_ops) {
            res.status = QpResult::Status::Degenerate;
            return res;
        }
        // pick the most violated inactive inequality
        int ip = -1;
        double worst = -1e-11;
        for (int i = 0; i < n_in; ++i) {
            bool is_active = false;
            for (int k = eq_active; k < ws.q; ++k)
                if (ws.active[k] == n_eq + i) { is_active = true; break; }
            if (is_active) continue;
            const double s = slack(i);
            if (s < worst) { worst = s; ip = i; }
        }
        if (ip < 0) break;  // all satisfied: optimal

        const Vec np = CI.col(ip);
        double u_plus = 0.0;
        double s_ip = slack(ip);

        while (true) {
            if (++ops > max_ops) {
                res.status = QpResult::Status::Degenerate;
                return res;
            }
            compute_steps(ws, np, d, z, r);

            // partial step limit over active inequalities
            double t1 = kInf;
            int l = -1;
            for (int k = eq_active; k < ws.q; ++k) {
                if (r[k] > 0.0) {
                    const double t = ws.u[k] / r[k];
                    if (t < t1) { t1 = t; l = k; }
                }
            }
            const double z2 = z.squaredNorm();
            const double t2 = (z2 > 1e-24) ? -s_ip / z.dot(np) : kInf;
            const double t = std::min(t1, t2);

            if (t >= kInf) {
                res.status = QpResult::Status::Infeasible;
                return res;
            }
            if (t2 >= kInf) {
                // dual-only step
                for (int k = 0; k < ws.q; ++k) ws.u[k] -= t * r[k];
                u_plus += t;
                delete_constraint(ws, l);
                continue;
            }

            x += t * z;
            for (int k = 0; k < ws.q; ++k) ws.u[k] -= t * r[k];
            u_plus += t;
            s_ip = slack(ip);

            if (t == t2) {
                ws.u[ws.q] = u_plus;
                double rnorm = 0.0;
                if (!add_constraint(ws, d, rnorm)) {
                    // numerically dependent; accept current point for this row
                    break;
                }
                ws.active.push_back(n_eq + ip);
                break;
            }
            delete_constraint(ws, l);
        }
    }

    res.status = QpResult::Status::Optimal;
    res.x = x;
    res.objective = 0.5 * x.dot(G * x) + g.dot(x);
    res.iterations = ops;
    for (int k = 0; k < ws.q; ++k) {
        const int id = ws.active[k];
        if (id < n_eq) res.eq_multipliers[id] = ws.u[k];
        else res.ineq_multipliers[id - n_eq] = ws.u[k];
    }
    return res;
}

}  // namespace tubecbf
