#include "tubecbf/tube.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace tubecbf {

Ellipsoid::Ellipsoid(Mat P_, double rho_) : P(std::move(P_)), rho(rho_) {
    if (P.rows() != P.cols()) throw config_error("Ellipsoid: P must be square");
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, P.cwiseAbs().maxCoeff()))
        throw config_error("Ellipsoid: P not symmetric");
    if (rho < 0.0) throw config_error("Ellipsoid: rho must be >= 0");
    llt_.compute(P);
    if (llt_.info() != Eigen::Success)
        throw config_error("Ellipsoid: P has no Cholesky factorization");
}

Mat chain_A0(int n, int d) {
    Mat A = Mat::Zero(n * d, n * d);
    if (n > 1)
        A.topRightCorner((n - 1) * d, (n - 1) * d) = Mat::Identity((n - 1) * d, (n - 1) * d);
    return A;
}

Mat chain_G(int n, int d) {
    Mat G = Mat::Zero(n * d, d);
    G.bottomRows(d) = Mat::Identity(d, d);
    return G;
}

namespace {

// Coefficients a_0..a_{n-1} of the monic polynomial with the given roots.
std::vector<double> monic_coeffs(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i] * (-r);
            next[i + 1] += c[i];
        }
        c = next;
    }
    c.pop_back();  // drop the leading 1
    return c;      // c[p] = coefficient of s^p
}

}  // namespace

Mat ancillary_gains(const std::vector<std::vector<double>>& poles_per_axis, int n, int d) {
    if (static_cast<int>(poles_per_axis.size()) != d)
        throw config_error("ancillary_gains: need one pole list per axis");
    Mat K = Mat::Zero(d, n * d);
    for (int c = 0; c < d; ++c) {
        const auto& poles = poles_per_axis[c];
        if (static_cast<int>(poles.size()) != n)
            throw config_error("ancillary_gains: need n poles per axis");
        for (double p : poles)
            if (!(p < 0.0))
                throw config_error("ancillary_gains: pole " + std::to_string(p) +
                                   " is not negative");
        const auto a = monic_coeffs(poles);
        // closed loop z^(n) = -k_1 z - ... - k_n z^(n-1): k_p = a_{p-1}
        for (int p = 0; p < n; ++p) K(c, p * d + c) = a[p];
    }
    return K;
}

Mat ancillary_gains(const std::vector<double>& poles, int n, int d) {
    return ancillary_gains(std::vector<std::vector<double>>(d, poles), n, d);
}

double spectral_abscissa(const Mat& A) {
    Eigen::EigenSolver<Mat> es(A, false);
    return es.eigenvalues().real().maxCoeff();
}

Mat gains_from_vector(const Vec& flat, int n, int d, GainLayout layout) {
    if (flat.size() != n * d)
        throw config_error("gains_from_vector: expected " + std::to_string(n * d) +
                           " entries, got " + std::to_string(flat.size()));
    Mat K = Mat::Zero(d, n * d);
    for (int c = 0; c < d; ++c)
        for (int p = 0; p < n; ++p) {
            const double k = layout == GainLayout::AxisMajor ? flat[c * n + p]
                                                             : flat[p * d + c];
            K(c, p * d + c) = k;
        }
    const Mat A_K = chain_A0(n, d) - chain_G(n, d) * K;
    Eigen::EigenSolver<Mat> es(A_K, false);
    const auto ev = es.eigenvalues();
    if (ev.real().maxCoeff() >= 0.0) {
        std::ostringstream msg;
        msg << "gains_from_vector: closed loop not Hurwitz; eigenvalues with Re >= 0:";
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev[i].real() >= 0.0)
                msg << " (" << ev[i].real() << (ev[i].imag() >= 0 ? "+" : "")
                    << ev[i].imag() << "j)";
        throw synthesis_error(msg.str());
    }
    return K;
}

Mat lyapunov_solve(const Mat& A_K, const Mat& Q) {
    const Eigen::Index m = A_K.rows();
    if (A_K.cols() != m || Q.rows() != m || Q.cols() != m)
        throw config_error("lyapunov_solve: dimension mismatch");
    if (spectral_abscissa(A_K) >= 0.0)
        throw synthesis_error("lyapunov_solve: A_K is not Hurwitz, no unique PD solution");

    // vec(A' P + P A) = (I (x) A' + A' (x) I) vec(P)
    const Mat At = A_K.transpose();
    Mat M = Mat::Zero(m * m, m * m);
    for (Eigen::Index i = 0; i < m; ++i)
        M.block(i * m, i * m, m, m) += At;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            M.block(i * m, j * m, m, m) += At(j, i) * Mat::Identity(m, m);

    Vec q(Eigen::Map<const Vec>(Q.data(), m * m));
    Vec p = M.partialPivLu().solve(-q);
    Mat P = Eigen::Map<Mat>(p.data(), m, m);
    P = 0.5 * (P + P.transpose());  // kill round-off asymmetry

    const double resid = (At * P + P * A_K + Q).norm() / Q.norm();
    if (!(resid <= 1e-8))
        throw synthesis_error("lyapunov_solve: residual " + std::to_string(resid) +
                              " exceeds 1e-8");
    return P;
}

double rpi_radius(const Mat& P, const Mat& Q, double L_f, double w_bar) {
    Eigen::SelfAdjointEigenSolver<Mat> esP(P), esQ(Q);
    const double lmaxP = esP.eigenvalues().maxCoeff();
    const double lminQ = esQ.eigenvalues().minCoeff();
    const double denom = lminQ - 2.0 * L_f * lmaxP;
    if (!(denom > 0.0)) {
        const double ratio = lminQ / (2.0 * lmaxP);
        std::ostringstream msg;
        msg << "rpi_radius: tube infeasible, decay ratio lmin(Q)/(2 lmax(P)) = " << ratio
            << " does not exceed L_f = " << L_f;
        throw tube_infeasible_error(msg.str(), ratio, L_f);
    }
    return 2.0 * w_bar * lmaxP / denom;
}

double support(const Ellipsoid& e, const Vec& g) {
    if (g.size() != e.P.rows()) throw config_error("support: direction dimension mismatch");
    if (e.rho == 0.0) return 0.0;
    const Vec y = e.llt().solve(g);
    const double q = g.dot(y);
    return e.rho * std::sqrt(std::max(0.0, q));
}

bool contains(const Ellipsoid& e, const Vec& z) {
    if (z.size() != e.P.rows()) throw config_error("contains: dimension mismatch");
    return z.dot(e.P * z) <= e.rho * e.rho * (1.0 + 1e-12);
}

Box box_tighten(const Box& box, const Ellipsoid& e) {
    return box_tighten(box, e, Mat::Identity(e.P.rows(), e.P.rows()));
}

Box box_tighten(const Box& box, const Ellipsoid& e, const Mat& M) {
    if (M.rows() != box.size())
        throw config_error("box_tighten: map rows must match box size");
    if (M.cols() != e.P.rows())
        throw config_error("box_tighten: map cols must match ellipsoid dimension");
    Vec lo = box.lo, hi = box.hi;
    for (Eigen::Index k = 0; k < box.size(); ++k) {
        const double s = support(e, M.row(k).transpose());
        lo[k] += s;
        hi[k] -= s;
        if (lo[k] > hi[k]) {
            std::ostringstream msg;
            msg << "box_tighten: tightening " << s << " exceeds half-width of coordinate "
                << k << " [" << box.lo[k] << ", " << box.hi[k] << "]";
            throw tube_infeasible_error(msg.str(), s, 0.0);
        }
    }
    return Box(lo, hi);
}

TubeParams synthesize_tube(const Mat& K, int n, int d, double L_f, double w_bar,
                           double q_scale, const TubeSynthesisOptions& options) {
    if (options.rho_inflation < 1.0)
        throw config_error("synthesize_tube: rho_inflation must be >= 1");
    TubeParams tp;
    tp.K = K;
    tp.A_K = chain_A0(n, d) - chain_G(n, d) * K;
    tp.L_f = L_f;
    tp.w_bar = w_bar;

    const Eigen::Index m = n * d;
    Mat Q = Mat::Identity(m, m);
    Mat P = lyapunov_solve(tp.A_K, Q);
    double scale = q_scale;
    if (!(scale > 0.0)) {
        // normalize lmax(P) to 1 so the minimal radius is an exact
        // invariance threshold (boundary points then have ||z|| >= rho)
        Eigen::SelfAdjointEigenSolver<Mat> es(P);
        scale = 1.0 / es.eigenvalues().maxCoeff();
    }
    tp.Q = scale * Q;
    tp.P = scale * P;

    Eigen::SelfAdjointEigenSolver<Mat> esP(tp.P), esQ(tp.Q);
    const double lmaxP = esP.eigenvalues().maxCoeff();
    const double lminQ = esQ.eigenvalues().minCoeff();
    if (!(lminQ > options.precondition_margin * 2.0 * L_f * lmaxP)) {
        const double ratio = lminQ / (2.0 * lmaxP);
        std::ostringstream msg;
        msg << "synthesize_tube: decay ratio " << ratio << " below required margin "
            << options.precondition_margin << " x L_f = "
            << options.precondition_margin * L_f;
        throw tube_infeasible_error(msg.str(), ratio, L_f);
    }
    tp.rho = options.rho_inflation * rpi_radius(tp.P, tp.Q, L_f, w_bar);
    return tp;
}

}  // namespace tubecbf
