#pragma once

#include <span>
#include <vector>

// Accuracy-refusal curves: the latent-Gaussian iso-RI family
// a(r; rho) = Phi2(tau_r, tau_w; rho) and algebraic iso-score curves for
// the heuristic metrics.

namespace ri::curves {

struct CurvePoint {
    double r = 0.0;
    double a = 0.0;
    bool feasible = true;
};

// a(r) along the grid for fixed rho and overall accuracy mu. The grid
// endpoints r = 0 and r = 1 are handled analytically: a(0) = mu, a(1) = 0.
// Throws std::domain_error unless 0 < mu < 1.
std::vector<CurvePoint> iso_ri_curve(double rho, double mu,
                                     std::span<const double> r_grid);

enum class ScoreMetric { COverA, FScore, Weighted };

// Solves the metric formula for c at each r. Points whose implied c falls
// outside [0, 1 - r] are emitted with feasible = false rather than dropped.
std::vector<CurvePoint> iso_score_curve(ScoreMetric metric, double value,
                                        double p, std::span<const double> r_grid);

// Evenly spaced grid of `points` values covering [0, 1].
std::vector<double> uniform_grid(int points);

}  // namespace ri::curves
