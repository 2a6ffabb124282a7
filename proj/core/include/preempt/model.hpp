#pragma once

/**
 * @file model.hpp
 * @brief Closed-form values of the follower, leader and sharing positions.
 *
 * The profit level Y follows dY = Y(ν dt + η dW) and is spanned by a traded
 * asset dP = P(μ dt + σ dW). Under the unique risk-neutral measure Y drifts at
 * ν − ηλ with λ = (μ − r)/σ, so a perpetual stream D·Y is worth D·y/δ with
 * δ = ηλ − (ν − r).
 *
 * Every value here is a pure function of immutable inputs.
 */

namespace preempt {

/// Market and project constants. Units: rates per year, volatilities per
/// sqrt-year, K in currency, D1/D2 in units sold per agent.
struct ModelParams {
    double nu = 0.0;     ///< drift of the profit process Y
    double eta = 0.0;    ///< volatility of Y
    double mu = 0.0;     ///< drift of the traded asset
    double sigma = 0.0;  ///< volatility of the traded asset
    double r = 0.0;      ///< risk-free rate
    double K = 0.0;      ///< sunk investment cost
    double D1 = 0.0;     ///< monopoly quantity
    double D2 = 0.0;     ///< duopoly quantity, 0 < D2 < D1
};

/// Constants computed once from ModelParams.
struct Derived {
    double lambda = 0.0;  ///< Sharpe ratio of the traded asset
    double delta = 0.0;   ///< effective discount gap, > 0
    double beta = 0.0;    ///< positive root of the characteristic quadratic, > 1
    double y_f = 0.0;     ///< follower investment threshold
};

/// Leader, follower and simultaneous-sharing values at one profit level.
struct PayoffTriple {
    double l = 0.0;
    double f = 0.0;
    double s = 0.0;
};

/// Throws InvalidModel unless 0 < D2 < D1, η, σ, K, r > 0 and all finite.
void validate(const ModelParams& params);

/// Computes λ, δ, β and Y_F. β comes from the explicit quadratic root.
/// Throws InvalidModel if the parameters are invalid or δ ≤ 0.
Derived derive(const ModelParams& params);

/// Validated parameters together with their derived constants.
class Model {
public:
    explicit Model(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    const Derived& derived() const { return derived_; }

    double y_f() const { return derived_.y_f; }

    /// Value D·y/δ of a perpetual stream of D units sold at profit level y.
    double perpetuity(double y, double quantity) const;

    /// Perpetual American call (D2·y/δ − K)⁺ exercised optimally at Y_F.
    double follower_value(double y) const;

    /// Investing first: monopoly stream until the follower enters at Y_F.
    double leader_value(double y) const;

    /// Both invest at once and share the market at D2 each.
    double sharing_value(double y) const;

    PayoffTriple payoff_triple(double y) const;

private:
    // (y/Y_F)^β with y = 0 mapped to 0.
    double scaled_power(double y) const;

    ModelParams params_;
    Derived derived_;
};

}  // namespace preempt
