#pragma once

/**
 * @file cara.hpp
 * @brief Coordination game played by agents with CARA utility −exp(−γx).
 *
 * The positions L, F, S keep their complete-market prices; only the lottery
 * created by the coordination game and the regulator is evaluated in
 * utility. All arithmetic goes through u(x) = e^{γx} − 1 and its
 * overflow-free rearrangements, never through raw utilities.
 *
 * γ = 0 is outside this module's domain; the risk-neutral Game is the γ → 0
 * object.
 */

#include "preempt/equilibrium.hpp"

namespace preempt {

/// Constant absolute risk aversion, γ > 0 (per currency unit).
class RiskAversion {
public:
    explicit RiskAversion(double gamma);
    double gamma() const { return gamma_; }

private:
    double gamma_;
};

/// u(x) = e^{γx} − 1. `saturated` is set (and value = +inf) when γx > 700.
struct UtilityValue {
    double value = 0.0;
    bool saturated = false;
};

inline constexpr double kSaturationExponent = 700.0;

UtilityValue cara_u(double x, RiskAversion gamma);

/// p_γ = u(L − F)/u(L − S) on [Y_L, Y_F), the all-share (qS = 1) strategy.
double p_gamma(const Game& game, double y, RiskAversion gamma);

/// P_{i,γ} = p_γ/(q_i p_γ + qS). Requires min(q1, q2, qS) > 0.
MixedProbabilities mixed_probabilities_gamma(const Game& game, double y, RiskAversion gamma);

struct GammaThresholds {
    double y_1 = 0.0;
    double y_2 = 0.0;
    bool y1_at_limit = false;  ///< root lost to underflow, Y_F returned
    bool y2_at_limit = false;
};

/// Levels where the risk-averse indifference probabilities reach one.
/// Collapsed regimes report the same collapsed values as the risk-neutral
/// thresholds.
GammaThresholds thresholds_gamma(const Game& game, RiskAversion gamma);

/// Game-stage outcome at the risk-averse mixed equilibrium.
OutcomeDistribution outcome_gamma(const Game& game, double y, RiskAversion gamma);

/// Certainty equivalents e_i = U⁻¹(E_i^γ) of the risk-averse mixed
/// equilibrium. Requires qS > 0 and Y_L ≤ y < Y_{1,γ}.
ExpectedPayoffs indifference_value(const Game& game, double y, RiskAversion gamma);

}  // namespace preempt
