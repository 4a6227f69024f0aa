#pragma once

#include <cstdint>
#include <vector>

#include "drainage/joint.hpp"
#include "drainage/statutil.hpp"

namespace drainage {

/// Diffusive scaling constants: paths are rescaled as
/// pi^(n)(sigma,gamma)(t) = pi(n^2 gamma t) / (n sigma).
struct ScalingParams {
    double sigma = 1.0;
    double gamma = 1.0;
    int n = 1;
};

/// Monte Carlo estimates of gamma = E[Y1] and sigma = sd(X1) from N
/// independent first increments.
struct ScalingEstimate {
    Estimate gamma_hat;
    Estimate sigma_hat;
};
ScalingEstimate estimate_scaling(const ModelParams& params, long n_samples,
                                 int threads = 1);

/// Sample of rescaled path endpoints pi^(n)(sigma,gamma)(t) at t = 1,
/// one per replicate seed, built from the renewal-time interpolation
/// S_{N(T)} + remainder.
std::vector<double> rescaled_endpoint_sample(const ModelParams& params,
                                             const ScalingParams& scaling,
                                             long n_replicates, int threads = 1);

/// First open vertex at or right of the rescaled coordinate:
/// ( floor(n sigma x1) + i, floor(n^2 gamma x2) ) with minimal i >= 1.
struct GridStart {
    LatticePoint point;
    std::int64_t offset = 0;  // the i that hit an open vertex
};
GridStart grid_start(const ModelParams& params, const ScalingParams& scaling,
                     double x1, double x2);

/// Estimated probabilities that walkers started from every lattice point
/// of a width ceil(n sigma epsilon)+3 window at level 0 occupy >= 2
/// (>= 3) distinct positions at level n^2 gamma t.
struct EtaEstimate {
    double t = 0.0;
    double epsilon = 0.0;
    std::int64_t window_width = 0;
    Proportion ge2;
    Proportion ge3;
    long n = 0;
};
EtaEstimate eta_estimate(const ModelParams& params, const ScalingParams& scaling,
                         double t, double epsilon, long n_replicates,
                         int threads = 1);

/// Window variant in raw lattice units: walkers start on every point of
/// [0, width] x {0} and are counted at the first knot at or above level H.
EtaEstimate eta_window_estimate(const ModelParams& params, std::int64_t width,
                                std::int64_t H, long n_replicates, int threads = 1);

/// Mean renewal-to-renewal gap increment binned by the current gap Z_l,
/// pooled over pair runs restarted from the given initial offsets (d=2).
struct DriftBin {
    std::int64_t gap = 0;
    Estimate increment;       // E[Z_{l+1} - Z_l | Z_l = gap]
    double mean_square = 0.0; // E[(Z_{l+1} - Z_l)^2 | Z_l = gap]
};
std::vector<DriftBin> martingale_drift(const ModelParams& params,
                                       const std::vector<std::int64_t>& start_gaps,
                                       long n_transitions, int threads = 1);

/// Foster-Lyapunov probe (d=3): mean of f(Z_1) - f(x) over pair runs
/// started with spatial gap x, f(x) = sqrt(ln(1 + |x|^2)).
double lyapunov_f(double g1, double g2);

/// Plain sample mean of f(Z_1) - f(x), and the control-variate version
/// that subtracts the first-order term grad f(x) . (Z_1 - x). The gap
/// increment has mean zero up to the exponentially small environment
/// reuse between the walkers, so both target the same drift; the
/// controlled estimator removes the dominant symmetric fluctuation and
/// shrinks the standard error by roughly the gap size.
struct LyapunovDrift {
    Estimate plain;
    Estimate controlled;
};
LyapunovDrift lyapunov_drift(const ModelParams& params, std::int64_t gap1,
                             std::int64_t gap2, long n_replicates, int threads = 1);

/// Squared-gap change over one simultaneous renewal of two walkers in
/// independent environments (d=3): alpha plus the moment checks of the
/// drift machinery.
struct AlphaEstimate {
    Estimate alpha;            // E[ |x + psi_u - psi_v|^2 - |x|^2 ]
    Estimate second_moment;    // E[ (...)^2 ]
    // Per-sample margin of the bound E[delta^2] >= 2 alpha |x|^2, i.e.
    // mean of delta^2 - 2 |x|^2 delta; nonnegative in expectation.
    Estimate second_moment_margin;
    Estimate third_moment;     // E[ (...)^3 ]
    double third_ratio = 0.0;  // |third| / |x|^2
};
AlphaEstimate alpha_estimate(const ModelParams& params, std::int64_t gap1,
                             std::int64_t gap2, long n_replicates, int threads = 1);

/// Mean collision quantities of triples over a grid of gap pairs, with
/// linear and quadratic fits against the gap product (y-x)(z-y).
struct TripleGridPoint {
    std::int64_t gap1 = 0, gap2 = 0;
    double product = 0.0;
    Estimate mean_nu;
    Estimate mean_nsteps;
    Estimate mean_T1;
    long censored = 0;
    long n = 0;
};
struct NuRegression {
    std::vector<TripleGridPoint> grid;
    LineFit nu_line;
    QuadFit nu_quad;
    LineFit nsteps_line;
    QuadFit nsteps_quad;
};
NuRegression nu_regression(const ModelParams& params,
                           const std::vector<std::pair<std::int64_t, std::int64_t>>& gaps,
                           long n_each, std::int64_t t_cap, int threads = 1);

}  // namespace drainage
