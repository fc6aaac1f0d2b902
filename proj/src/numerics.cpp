#include "ri/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ri::numerics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
}

double std_normal_cdf(double x) {
    if (std::isnan(x)) return x;
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("std_normal_quantile: p must be in (0,1)");

    // Wichura (1988), algorithm AS241, PPND16.
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// P(Z1 > dh, Z2 > dk); translation of Genz's BVND (tvpack), based on
// Drezner & Wesolowsky (1990).
double bvn_upper(double dh, double dk, double r) {
    if (dh == kInf || dk == kInf) return 0.0;
    if (dh == -kInf) return (dk == -kInf) ? 1.0 : std_normal_cdf(-dk);
    if (dk == -kInf) return std_normal_cdf(-dh);

    static const std::array<double, 3> w6 = {0.1713244923791705,
                                             0.3607615730481384,
                                             0.4679139345726904};
    static const std::array<double, 3> x6 = {0.9324695142031522,
                                             0.6612093864662647,
                                             0.2386191860831970};
    static const std::array<double, 6> w12 = {0.04717533638651177, 0.1069393259953183,
                                              0.1600783285433464,  0.2031674267230659,
                                              0.2334925365383547,  0.2491470458134029};
    static const std::array<double, 6> x12 = {0.9815606342467191, 0.9041172563704750,
                                              0.7699026741943050, 0.5873179542866171,
                                              0.3678314989981802, 0.1252334085114692};
    static const std::array<double, 10> w20 = {
        0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
        0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
        0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
        0.1527533871307259};
    static const std::array<double, 10> x20 = {
        0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
        0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
        0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
        0.07652652113349733};

    const double* w = w20.data();
    const double* x = x20.data();
    int lg = 10;
    if (std::fabs(r) < 0.3) {
        w = w6.data(); x = x6.data(); lg = 3;
    } else if (std::fabs(r) < 0.75) {
        w = w12.data(); x = x12.data(); lg = 6;
    }

    double h = dh, k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (std::fabs(r) < 0.925) {
        if (std::fabs(r) > 0.0) {
            const double hs = (h * h + k * k) / 2.0;
            const double asr = std::asin(r);
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double sn = std::sin(asr * (is * x[i] + 1.0) / 2.0);
                    bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (2.0 * kTwoPi);
        }
        bvn += std_normal_cdf(-h) * std_normal_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::fabs(r) < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 16.0;
            double asr = -(bs / as + hk) / 2.0;
            if (asr > -100.0)
                bvn = a * std::exp(asr) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                       c * d * as * as / 5.0);
            if (-hk < 100.0) {
                const double b = std::sqrt(bs);
                bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) *
                       std_normal_cdf(-b / a) * b *
                       (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double xs = std::pow(a * (is * x[i] + 1.0), 2);
                    const double rs = std::sqrt(1.0 - xs);
                    asr = -(bs / xs + hk) / 2.0;
                    if (asr > -100.0) {
                        bvn += a * w[i] * std::exp(asr) *
                               (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                                (1.0 + c * xs * (1.0 + d * xs)));
                    }
                }
            }
            bvn = -bvn / kTwoPi;
        }
        if (r > 0.0) {
            bvn += std_normal_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            bvn += std::max(0.0, std_normal_cdf(k) - std_normal_cdf(h));
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bvn_cdf(double x, double y, double rho) {
    if (!(std::fabs(rho) < 1.0))
        throw std::domain_error("bvn_cdf: |rho| must be < 1");
    return bvn_upper(-x, -y, rho);
}

double bvn_survival(double x, double y, double rho) {
    if (!(std::fabs(rho) < 1.0))
        throw std::domain_error("bvn_survival: |rho| must be < 1");
    return bvn_upper(x, y, rho);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("regularized_incomplete_beta: a,b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // Continued fraction (modified Lentz).
    auto betacf = [](double aa, double bb, double xx) {
        const double fpmin = 1e-300;
        const double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::fabs(d) < fpmin) d = fpmin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 500; ++m) {
            const int m2 = 2 * m;
            double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            h *= d * c;
            num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < 1e-15) break;
        }
        return h;
    };

    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - lbeta) *
                     betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_cdf: nu must be > 0");
    if (std::isnan(t)) return t;
    if (t == kInf) return 1.0;
    if (t == -kInf) return 0.0;
    if (nu >= 1e5) {
        // Asymptotic normal expansion; next term is O(nu^-2).
        return std_normal_cdf(t) - (t * t * t + t) / (4.0 * nu) * std_normal_pdf(t);
    }
    if (t == 0.0) return 0.5;
    const double x = nu / (nu + t * t);
    const double half_tail = 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, x);
    return (t > 0.0) ? 1.0 - half_tail : half_tail;
}

double student_t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("student_t_quantile: p must be in (0,1)");
    if (!(nu > 0.0)) throw std::domain_error("student_t_quantile: nu must be > 0");
    if (p == 0.5) return 0.0;

    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, nu) > p) lo *= 2.0;
    while (student_t_cdf(hi, nu) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (student_t_cdf(mid, nu) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Adaptive Simpson on [a,b] with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (a >= b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, tol, 48);
}

}  // namespace

double bvt_cdf(double x, double y, double rho, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("bvt_cdf: nu must be > 0");
    if (!(std::fabs(rho) < 1.0)) throw std::domain_error("bvt_cdf: |rho| must be < 1");
    if (std::isnan(x) || std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
    if (x == -kInf || y == -kInf) return 0.0;
    if (x == kInf && y == kInf) return 1.0;
    if (x == kInf) return student_t_cdf(y, nu);
    if (y == kInf) return student_t_cdf(x, nu);

    // Substitute t = sqrt(nu) tan(theta): f_nu(t) dt = K cos^{nu-1}(theta) dtheta
    // with the conditional T2 | T1=t a scaled t with nu+1 degrees of freedom.
    const double kconst =
        std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) /
        std::sqrt(kPi);
    const double sn = std::sqrt(nu);
    const double cscale = std::sqrt((1.0 - rho * rho) / (nu + 1.0));
    auto integrand = [&](double theta) {
        const double ct = std::cos(theta);
        if (ct <= 0.0) return 0.0;
        const double t = sn * std::tan(theta);
        const double sigma = cscale * std::sqrt(nu + t * t);
        const double z = (y - rho * t) / sigma;
        const double weight = kconst * std::exp((nu - 1.0) * std::log(ct));
        return weight * student_t_cdf(z, nu + 1.0);
    };

    const double theta_hi = std::atan(x / sn);
    // Fixed split points keep the adaptive pass from skipping the sharp
    // peak at theta = 0 when nu is large.
    std::vector<double> knots = {-kPi / 2.0};
    for (double s : {-1.5, -1.0, -0.5, -0.2, -0.05, -0.01, -0.002, 0.0,
                     0.002, 0.01, 0.05, 0.2, 0.5, 1.0, 1.5}) {
        if (s > -kPi / 2.0 && s < theta_hi) knots.push_back(s);
    }
    knots.push_back(theta_hi);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += integrate(integrand, knots[i], knots[i + 1],
                           1e-10 / static_cast<double>(knots.size()));
    return std::clamp(total, 0.0, 1.0);
}

double minimize_scalar_bounded(const std::function<double(double)>& objective,
                               double lo, double hi, double tol) {
    if (!(lo < hi))
        throw std::invalid_argument("minimize_scalar_bounded: need lo < hi");

    // Brent's bounded method (golden section with parabolic refinement).
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    const double sqrt_eps = std::sqrt(2.2e-16);
    const int maxfun = 500;

    double a = lo, b = hi;
    double xf = a + golden * (b - a);
    double nfc = xf, fulc = xf;
    double rat = 0.0, e = 0.0;
    double fx = objective(xf);
    int nfev = 1;
    double fnfc = fx, ffulc = fx;
    double xm = 0.5 * (a + b);
    double tol1 = sqrt_eps * std::fabs(xf) + tol / 3.0;
    double tol2 = 2.0 * tol1;

    while (std::fabs(xf - xm) > tol2 - 0.5 * (b - a)) {
        bool use_golden = true;
        if (std::fabs(e) > tol1) {
            double r = (xf - nfc) * (fx - ffulc);
            double q = (xf - fulc) * (fx - fnfc);
            double p = (xf - fulc) * q - (xf - nfc) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            r = e;
            e = rat;
            if (std::fabs(p) < std::fabs(0.5 * q * r) && p > q * (a - xf) &&
                p < q * (b - xf)) {
                rat = p / q;
                const double xtrial = xf + rat;
                if ((xtrial - a) < tol2 || (b - xtrial) < tol2) {
                    const double si = (xm - xf >= 0.0) ? 1.0 : -1.0;
                    rat = tol1 * si;
                }
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (xf >= xm) ? a - xf : b - xf;
            rat = golden * e;
        }
        const double si = (rat >= 0.0) ? 1.0 : -1.0;
        const double xtrial = xf + si * std::max(std::fabs(rat), tol1);
        const double fu = objective(xtrial);
        ++nfev;

        if (fu <= fx) {
            if (xtrial >= xf)
                a = xf;
            else
                b = xf;
            fulc = nfc; ffulc = fnfc;
            nfc = xf; fnfc = fx;
            xf = xtrial; fx = fu;
        } else {
            if (xtrial < xf)
                a = xtrial;
            else
                b = xtrial;
            if (fu <= fnfc || nfc == xf) {
                fulc = nfc; ffulc = fnfc;
                nfc = xtrial; fnfc = fu;
            } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
                fulc = xtrial; ffulc = fu;
            }
        }
        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * std::fabs(xf) + tol / 3.0;
        tol2 = 2.0 * tol1;
        if (nfev >= maxfun) break;
    }
    return xf;
}

}  // namespace ri::numerics
