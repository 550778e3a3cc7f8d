#pragma once

namespace rootldpc::analysis {

/// Weight split of the combined gain Y = a alpha1^2 + b alpha2^2,
/// normalized so a + b = 1.
struct Chi2Params {
    double a = 0.5;
    double b = 0.5;

    void validate() const;
    bool balanced() const;
};

/// Density of Y at y >= 0: 4 y e^{-2y} when balanced, else
/// (e^{-y/a} - e^{-y/b}) / (a - b).
double chi2_pdf(double y, const Chi2Params& p);

/// F(a, b, T) = Pr(Y < T), exact closed form per branch.
double chi2_cdf(double t, const Chi2Params& p);

struct Chi2Loss {
    double loss_db = 0.0;    // SNR shift of the T^2 asymptote vs the balanced split
    int diversity_order = 2; // drops to 1 when a or b vanishes
};

/// Coding loss of an unbalanced split: 5 log10(1/(4ab)) dB while both
/// weights are positive; a zero weight collapses the diversity order.
Chi2Loss chi2_coding_loss_db(const Chi2Params& p);

/// G(alpha1, alpha2, sigma2) = Pr(|X2| < |X1|) for independent
/// X_i ~ Normal(alpha_i^2, alpha_i^2 sigma2), by adaptive quadrature
/// of the tail-product integral to absolute tolerance 1e-7.
double g_function(double alpha1, double alpha2, double sigma2);

struct G4Report {
    double g4 = 0.0;
    bool at_least_one_sixteenth = false;         // G^4 >= 1/16
    bool complement_at_most_fifteen_sixteenths = false; // 1 - G^4 <= 15/16
};

/// Fourth power of G with the bound checks used for the parity-bit
/// diversity argument (tight at alpha1 = alpha2 where G = 1/2).
G4Report g4_parity_bounds(double alpha1, double alpha2, double sigma2);

} // namespace rootldpc::analysis
