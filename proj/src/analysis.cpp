#include "rootldpc/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rootldpc::analysis {

void Chi2Params::validate() const {
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("Chi2Params: negative weight");
    if (std::abs(a + b - 1.0) > 1e-12) throw std::invalid_argument("Chi2Params: a + b != 1");
}

bool Chi2Params::balanced() const { return std::abs(a - b) < 1e-9; }

double chi2_pdf(double y, const Chi2Params& p) {
    p.validate();
    if (y < 0.0) throw std::invalid_argument("chi2_pdf: negative argument");
    if (p.balanced()) return 4.0 * y * std::exp(-2.0 * y);
    const double d = p.a - p.b;
    // e^{-y/a} - e^{-y/b} = e^{-y/b} expm1(y d / (ab)), stable near a = b
    return std::exp(-y / p.b) * std::expm1(y * d / (p.a * p.b)) / d;
}

double chi2_cdf(double t, const Chi2Params& p) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("chi2_cdf: negative argument");
    if (p.a == 0.0 || p.b == 0.0) return -std::expm1(-t); // single exponential term
    if (p.balanced()) return 1.0 - std::exp(-2.0 * t) * (1.0 + 2.0 * t);
    const double d = p.a - p.b;
    // (a e^{-t/a} - b e^{-t/b}) / d = e^{-t/b} (1 + (a/d) expm1(t d / (ab)))
    return 1.0 - std::exp(-t / p.b) * (1.0 + p.a / d * std::expm1(t * d / (p.a * p.b)));
}

Chi2Loss chi2_coding_loss_db(const Chi2Params& p) {
    p.validate();
    Chi2Loss loss;
    if (p.a == 0.0 || p.b == 0.0) {
        // F degenerates to T + o(T): first-order diversity, unbounded loss
        loss.diversity_order = 1;
        loss.loss_db = std::numeric_limits<double>::infinity();
        return loss;
    }
    loss.loss_db = 5.0 * std::log10(1.0 / (4.0 * p.a * p.b));
    return loss;
}

namespace {

inline double q_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, eps / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, eps / 2.0, depth - 1);
}

} // namespace

double g_function(double alpha1, double alpha2, double sigma2) {
    if (alpha1 <= 0.0 || alpha2 <= 0.0 || sigma2 <= 0.0)
        throw std::invalid_argument("g_function: parameters must be positive");
    const double sigma = std::sqrt(sigma2);
    const double m1 = alpha1 * alpha1, s1 = alpha1 * sigma;
    const double m2 = alpha2 * alpha2, s2 = alpha2 * sigma;
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * s1 * s1);
    auto integrand = [&](double t) {
        double d1 = (t - m1) / s1, d2 = (t + m1) / s1;
        double folded = norm * (std::exp(-0.5 * d1 * d1) + std::exp(-0.5 * d2 * d2));
        double tail = q_tail((t - m2) / s2) + q_tail((t + m2) / s2);
        return folded * tail;
    };
    const double upper = m1 + 13.0 * s1;
    double mid = 0.5 * upper;
    double val = adaptive_simpson(integrand, 0.0, upper, integrand(0.0), integrand(mid),
                                  integrand(upper), 1e-8, 48);
    if (!std::isfinite(val))
        throw std::runtime_error("g_function: quadrature did not converge");
    return 1.0 - val;
}

G4Report g4_parity_bounds(double alpha1, double alpha2, double sigma2) {
    G4Report rep;
    double g = g_function(alpha1, alpha2, sigma2);
    rep.g4 = g * g * g * g;
    rep.at_least_one_sixteenth = rep.g4 >= 1.0 / 16.0 - 1e-9;
    rep.complement_at_most_fifteen_sixteenths = 1.0 - rep.g4 <= 15.0 / 16.0 + 1e-9;
    return rep;
}

} // namespace rootldpc::analysis
