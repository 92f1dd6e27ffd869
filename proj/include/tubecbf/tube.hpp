#pragma once

#include <vector>

#include "tubecbf/common.hpp"

namespace tubecbf {

// {z : z' P z <= rho^2}. rho = 0 gives the degenerate point tube used by the
// no-tighten ablation.
struct Ellipsoid {
    Mat P;
    double rho = 0.0;

    Ellipsoid() = default;
    Ellipsoid(Mat P_, double rho_);

    const Eigen::LLT<Mat>& llt() const { return llt_; }

private:
    Eigen::LLT<Mat> llt_;
};

// Per-agent robust-tube bundle.
struct TubeParams {
    Mat K;     // d x (n d) ancillary gains, u = ubar - K z
    Mat A_K;   // A_0 - G K, Hurwitz
    Mat P;     // Lyapunov pair
    Mat Q;
    double rho = 0.0;
    double L_f = 0.0;
    double w_bar = 0.0;

    Ellipsoid tube() const { return Ellipsoid(P, rho); }
};

// Chain matrices of the stacked error dynamics: A_0 shifts blocks, G injects
// into the last block.
Mat chain_A0(int n, int d);
Mat chain_G(int n, int d);

// How a flat gain vector maps onto the d x (n d) matrix.
//   AxisMajor:     [k1_x, k2_x, ..., kn_x, k1_y, ...]
//   PositionMajor: [k1_x, k1_y, k2_x, k2_y, ...]
enum class GainLayout { AxisMajor, PositionMajor };

// Companion-form gains from per-axis closed-loop poles (real, negative).
// poles_per_axis has d entries of n poles each.
Mat ancillary_gains(const std::vector<std::vector<double>>& poles_per_axis, int n, int d);
// Same poles replicated across all axes.
Mat ancillary_gains(const std::vector<double>& poles, int n, int d);

// Per-axis companion gains read from a flat vector; rejects the result if
// A_0 - G K is not Hurwitz.
Mat gains_from_vector(const Vec& flat, int n, int d,
                      GainLayout layout = GainLayout::AxisMajor);

// Largest real part over the eigenvalues of A.
double spectral_abscissa(const Mat& A);

// Unique symmetric positive-definite P with A_K' P + P A_K = -Q, via the
// vectorized Kronecker system. Sizes here are tiny.
Mat lyapunov_solve(const Mat& A_K, const Mat& Q);

// Minimal admissible RPI radius 2 w_bar lmax(P) / (lmin(Q) - 2 L_f lmax(P)).
double rpi_radius(const Mat& P, const Mat& Q, double L_f, double w_bar);

// Support function rho sqrt(g' P^{-1} g).
double support(const Ellipsoid& e, const Vec& g);

bool contains(const Ellipsoid& e, const Vec& z);

// Pontryagin-style tightening: coordinate k of the box shrinks by
// support(e, M' e_k). M defaults to identity (state boxes); pass the gain
// matrix K for input boxes.
Box box_tighten(const Box& box, const Ellipsoid& e);
Box box_tighten(const Box& box, const Ellipsoid& e, const Mat& M);

struct TubeSynthesisOptions {
    double rho_inflation = 1.0;      // >= 1
    double precondition_margin = 1.25;  // require lmin(Q) > margin * 2 L_f lmax(P)
};

// Bundles the full pipeline: Lyapunov solve with Q scaled so lmax(P) = 1
// (which makes the minimal radius an exact invariance threshold), then the
// Lemma-style radius.
TubeParams synthesize_tube(const Mat& K, int n, int d, double L_f, double w_bar,
                           double q_scale /* <= 0 means normalize lmax(P)=1 */,
                           const TubeSynthesisOptions& options = {});

}  // namespace tubecbf
