#include "ri/curves.hpp"

#include <stdexcept>

#include "ri/numerics.hpp"

namespace ri::curves {

std::vector<CurvePoint> iso_ri_curve(double rho, double mu,
                                     std::span<const double> r_grid) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error("iso_ri_curve: mu must be in (0,1)");
    if (!(rho > -1.0 && rho < 1.0))
        throw std::domain_error("iso_ri_curve: |rho| must be < 1");

    const double tau_w = numerics::std_normal_quantile(mu);
    std::vector<CurvePoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        if (!(r >= 0.0 && r <= 1.0))
            throw std::domain_error("iso_ri_curve: grid value outside [0,1]");
        CurvePoint pt;
        pt.r = r;
        if (r == 0.0) {
            pt.a = mu;
        } else if (r == 1.0) {
            pt.a = 0.0;
        } else {
            const double tau_r = numerics::std_normal_quantile(1.0 - r);
            pt.a = numerics::bvn_cdf(tau_r, tau_w, rho);
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<CurvePoint> iso_score_curve(ScoreMetric metric, double value,
                                        double p, std::span<const double> r_grid) {
    std::vector<CurvePoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        if (!(r >= 0.0 && r <= 1.0))
            throw std::domain_error("iso_score_curve: grid value outside [0,1]");
        double c;
        switch (metric) {
            case ScoreMetric::COverA: c = value * (1.0 - r); break;
            case ScoreMetric::FScore: c = value * (2.0 - r) / 2.0; break;
            case ScoreMetric::Weighted: c = value + p * (1.0 - r); break;
            default: throw std::invalid_argument("iso_score_curve: unknown metric");
        }
        CurvePoint pt;
        pt.r = r;
        pt.a = c;
        pt.feasible = (c >= 0.0 && c <= 1.0 - r);
        out.push_back(pt);
    }
    return out;
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need >= 2 points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

}  // namespace ri::curves
