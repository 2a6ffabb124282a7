#include "preempt/cara.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "preempt/errors.hpp"
#include "roots.hpp"

namespace preempt {

namespace {

constexpr double kUpperBracket = 1.0 - 1e-9;  // × Y_F
constexpr double kRootTolerance = 1e-10;     // × Y_F

void require_open_interval(const Game& game, double y, const char* what) {
    const Thresholds& th = game.thresholds();
    if (!(y >= th.y_l - game.boundary_tolerance() && y < th.y_f)) {
        throw std::domain_error(std::string(what) + ": profit level outside [Y_L, Y_F)");
    }
}

void require_interior_law(const RegulatorLaw& law, const char* what) {
    if (!(law.q1 > 0.0 && law.q2 > 0.0 && law.qS > 0.0)) {
        throw std::invalid_argument(std::string(what) + " requires min(q1, q2, qS) > 0");
    }
}

// w·e^x − w without overflowing for large x.
double weighted_expm1(double w, double x) {
    if (w == 0.0) return 0.0;
    if (x > kSaturationExponent) return std::exp(std::log(w) + x) - w;
    return w * std::expm1(x);
}

// Sign-equivalent form of (q + qS)u(L − F) − qS u(L − S) with every exponent
// non-positive on [Y_L, Y_F].
double gamma_dominance(const Model& model, double q, double qS, double gamma, double y) {
    const PayoffTriple t = model.payoff_triple(y);
    const double lead_gap = std::max(t.l - t.f, 0.0);
    const double share_gap = std::max(t.f - t.s, 0.0);
    return -q * std::exp(-gamma * share_gap) * std::expm1(-gamma * lead_gap) +
           qS * std::expm1(-gamma * share_gap);
}

struct RootResult {
    double y = 0.0;
    bool at_limit = false;
};

RootResult gamma_root(const Game& game, double q, double gamma) {
    const Thresholds& th = game.thresholds();
    const double qS = game.law().qS;
    if (q <= 0.0) return {th.y_f, false};
    const auto g = [&](double y) { return gamma_dominance(game.model(), q, qS, gamma, y); };
    const double hi = kUpperBracket * th.y_f;
    if (!(g(hi) > 0.0)) return {th.y_f, true};
    return {detail::bracketed_root(g, th.y_l, hi, kRootTolerance * th.y_f, "risk-averse threshold"), false};
}

}  // namespace

RiskAversion::RiskAversion(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("risk aversion gamma must be finite and > 0");
    }
}

UtilityValue cara_u(double x, RiskAversion gamma) {
    const double z = gamma.gamma() * x;
    if (z > kSaturationExponent) return {std::numeric_limits<double>::infinity(), true};
    return {std::expm1(z), false};
}

double p_gamma(const Game& game, double y, RiskAversion gamma) {
    require_open_interval(game, y, "p_gamma");
    const PayoffTriple t = game.model().payoff_triple(y);
    const double g = gamma.gamma();
    const double lead_gap = std::max(t.l - t.f, 0.0);
    const double share_gap = t.l - t.s;
    if (lead_gap == 0.0) return 0.0;
    // u(a)/u(b) = e^{−γ(b−a)} (1 − e^{−γa})/(1 − e^{−γb})
    return std::exp(-g * (share_gap - lead_gap)) * std::expm1(-g * lead_gap) / std::expm1(-g * share_gap);
}

MixedProbabilities mixed_probabilities_gamma(const Game& game, double y, RiskAversion gamma) {
    const RegulatorLaw& law = game.law();
    require_interior_law(law, "mixed_probabilities_gamma");
    const double p = p_gamma(game, y, gamma);
    return {p / (law.q1 * p + law.qS), p / (law.q2 * p + law.qS), false};
}

GammaThresholds thresholds_gamma(const Game& game, RiskAversion gamma) {
    using Kind = Regime::Kind;
    const Thresholds& th = game.thresholds();
    const Regime& regime = game.regime();
    GammaThresholds out;
    switch (regime.kind) {
        case Kind::kCournot:
        case Kind::kStackelbergFairCoin:
        case Kind::kStackelbergUnfairCoin:
        case Kind::kWeakStackelberg:
            out.y_1 = th.y_1;
            out.y_2 = th.y_2;
            return out;
        case Kind::kDegenerateNoShare:
        case Kind::kGeneral:
            break;
    }
    const RegulatorLaw& law = game.law();
    const RootResult first = gamma_root(game, law.elect(th.favored), gamma.gamma());
    out.y_1 = first.y;
    out.y1_at_limit = first.at_limit;
    if (regime.kind == Kind::kDegenerateNoShare) {
        out.y_2 = th.y_f;
    } else {
        const RootResult second = gamma_root(game, law.elect(3 - th.favored), gamma.gamma());
        out.y_2 = second.y;
        out.y2_at_limit = second.at_limit;
    }
    return out;
}

OutcomeDistribution outcome_gamma(const Game& game, double y, RiskAversion gamma) {
    const MixedProbabilities mixed = mixed_probabilities_gamma(game, y, gamma);
    if (mixed.p1 == 0.0 && mixed.p2 == 0.0) return {0.5, 0.5, 0.0};
    if (mixed.p1 > 1.0 || mixed.p2 > 1.0) {
        throw std::domain_error("outcome_gamma: profit level beyond the risk-averse mixing region");
    }
    return outcome_distribution({mixed.p1, mixed.p2});
}

ExpectedPayoffs indifference_value(const Game& game, double y, RiskAversion gamma) {
    const RegulatorLaw& law = game.law();
    require_interior_law(law, "indifference_value");
    const PayoffTriple t = game.model().payoff_triple(y);
    const OutcomeDistribution o = outcome_gamma(game, y, gamma);
    const double g = gamma.gamma();
    const double lead_gap = t.l - t.f;
    const double share_gap = t.f - t.s;

    // −E_i^γ = e^{−γF}[w_l e^{−γ(L−F)} + w_f + w_s e^{γ(F−S)}] with w_l + w_f + w_s = 1,
    // so e_i = F − log1p(w_l·expm1(−γ(L−F)) + w_s·expm1(γ(F−S)))/γ.
    const auto certainty_equivalent = [&](double w_lead, double w_share) {
        const double excess = w_lead * std::expm1(-g * lead_gap) + weighted_expm1(w_share, g * share_gap);
        if (!(excess > -1.0) || !std::isfinite(excess)) {
            throw NumericalFailure("indifference_value: expected utility is not invertible");
        }
        return t.f - std::log1p(excess) / g;
    };
    return {certainty_equivalent(o.a1 + o.aS * law.q1, o.aS * law.qS),
            certainty_equivalent(o.a2 + o.aS * law.q2, o.aS * law.qS)};
}

}  // namespace preempt
