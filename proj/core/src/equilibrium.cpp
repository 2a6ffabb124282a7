#include "preempt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "roots.hpp"

namespace preempt {

namespace {

constexpr double kLowerBracket = 1e-6;       // × Y_F
constexpr double kUpperBracket = 1.0 - 1e-9;  // × Y_F
constexpr double kRootTolerance = 1e-10;     // × Y_F

// Root of q(L − F) − qS(F − S) on [Y_L, Y_F): the level at which the
// opponent of the agent with election share q stops mixing. Y_F when the
// function never turns positive.
double dominance_root(const Model& model, double q, double qS, double y_l) {
    const double y_f = model.y_f();
    if (q <= 0.0) return y_f;
    const auto g = [&](double y) {
        const PayoffTriple t = model.payoff_triple(y);
        return q * (t.l - t.f) - qS * (t.f - t.s);
    };
    const double hi = kUpperBracket * y_f;
    if (!(g(hi) > 0.0)) return y_f;
    return detail::bracketed_root(g, y_l, hi, kRootTolerance * y_f, "dominance threshold");
}

}  // namespace

double preemption_threshold(const Model& model) {
    const double y_f = model.y_f();
    const auto gap = [&](double y) { return model.leader_value(y) - model.follower_value(y); };
    return detail::bracketed_root(gap, kLowerBracket * y_f, kUpperBracket * y_f, kRootTolerance * y_f,
                                  "preemption threshold");
}

Thresholds solve_thresholds(const Model& model, const RegulatorLaw& law) {
    if (!is_reduced(law)) throw std::invalid_argument("solve_thresholds expects a reduced law");
    using Kind = Regime::Kind;
    Thresholds th;
    th.y_f = model.y_f();
    th.y_l = preemption_threshold(model);
    th.favored = law.q1 >= law.q2 ? 1 : 2;

    const Regime regime = classify(law);
    switch (regime.kind) {
        case Kind::kCournot:
            th.y_1 = th.y_2 = th.y_f;
            th.y1_collapsed = th.y2_collapsed = true;
            break;
        case Kind::kStackelbergFairCoin:
        case Kind::kStackelbergUnfairCoin:
            th.y_1 = th.y_2 = th.y_l;
            th.y1_collapsed = th.y2_collapsed = true;
            break;
        case Kind::kWeakStackelberg:
            th.favored = regime.favored;
            th.y_1 = th.y_l;
            th.y_2 = th.y_f;
            th.y1_collapsed = th.y2_collapsed = true;
            break;
        case Kind::kDegenerateNoShare:
            th.favored = regime.favored;
            th.y_1 = dominance_root(model, law.elect(regime.favored), law.qS, th.y_l);
            th.y_2 = th.y_f;
            th.y2_collapsed = true;
            break;
        case Kind::kGeneral: {
            const int other = 3 - th.favored;
            th.y_1 = dominance_root(model, law.elect(th.favored), law.qS, th.y_l);
            th.y_2 = dominance_root(model, law.elect(other), law.qS, th.y_l);
            break;
        }
    }
    return th;
}

OutcomeDistribution outcome_distribution(const StrategyProfile& pr) {
    if (!(std::max(pr.p1, pr.p2) > 0.0)) {
        throw std::invalid_argument("outcome_distribution requires max(p1, p2) > 0");
    }
    if (pr.p1 < 0.0 || pr.p1 > 1.0 || pr.p2 < 0.0 || pr.p2 > 1.0) {
        throw std::invalid_argument("action probabilities must lie in [0, 1]");
    }
    const double denom = pr.p1 + pr.p2 - pr.p1 * pr.p2;
    return {pr.p1 * (1.0 - pr.p2) / denom, pr.p2 * (1.0 - pr.p1) / denom, pr.p1 * pr.p2 / denom};
}

SettledOutcome settled_outcome(const OutcomeDistribution& o, const RegulatorLaw& law) {
    return {o.a1 + o.aS * law.q1, o.a2 + o.aS * law.q2, o.aS * law.qS};
}

ExpectedPayoffs expected_payoff(const StrategyProfile& profile, const PayoffTriple& t,
                                const RegulatorLaw& law) {
    const OutcomeDistribution o = outcome_distribution(profile);
    return {(o.a1 + o.aS * law.q1) * t.l + (o.a2 + o.aS * law.q2) * t.f + o.aS * law.qS * t.s,
            (o.a2 + o.aS * law.q2) * t.l + (o.a1 + o.aS * law.q1) * t.f + o.aS * law.qS * t.s};
}

std::string to_string(Region region) {
    switch (region) {
        case Region::kDefer: return "defer";
        case Region::kPreemptBoundary: return "preempt-boundary";
        case Region::kMixed: return "mixed";
        case Region::kFavoredLeads: return "favored-leads";
        case Region::kJointExercise: return "joint-exercise";
        case Region::kImmediateExercise: return "immediate-exercise";
    }
    return "unknown";
}

std::string to_string(const RegionLabel& label) {
    if (label.region == Region::kFavoredLeads) return "agent" + std::to_string(label.leader) + "-leads";
    return to_string(label.region);
}

Game::Game(const Model& model, const RegulatorLaw& law)
    : model_(model), law_(reduce(law)), regime_(classify(law_)), thresholds_(solve_thresholds(model_, law_)) {}

double Game::boundary_tolerance() const { return kRootTolerance * thresholds_.y_f; }

void Game::require_interval(double y, const char* what) const {
    if (!(y >= thresholds_.y_l - boundary_tolerance() && y <= thresholds_.y_f)) {
        throw std::domain_error(std::string(what) + ": profit level outside [Y_L, Y_F]");
    }
}

double Game::p0(double y) const {
    require_interval(y, "p0");
    if (y >= thresholds_.y_f) return 1.0;
    if (y <= thresholds_.y_l + boundary_tolerance()) return 0.0;
    const PayoffTriple t = model_.payoff_triple(y);
    return std::clamp((t.l - t.f) / (t.l - t.s), 0.0, 1.0);
}

MixedProbabilities Game::mixed_probabilities(double y) const {
    const double p = p0(y);
    MixedProbabilities out;
    const auto one = [&](double q) {
        const double denom = q * p + law_.qS;
        if (denom > 0.0) return p / denom;
        if (p > 0.0) return std::numeric_limits<double>::infinity();
        // 0/0: for qS = 0 the ratio is 1/q for every p0 > 0.
        out.at_limit = true;
        return q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity();
    };
    out.p1 = one(law_.q1);
    out.p2 = one(law_.q2);
    return out;
}

StrategyProfile Game::favored_leads() const {
    return thresholds_.favored == 1 ? StrategyProfile{1.0, 0.0} : StrategyProfile{0.0, 1.0};
}

NashSolution Game::nash_equilibria(double y) const {
    const Thresholds& th = thresholds_;
    if (!(y > th.y_l && y < th.y_f)) {
        throw std::domain_error("nash_equilibria: profit level outside (Y_L, Y_F)");
    }
    NashSolution sol;
    if (y < th.y_1) {
        const MixedProbabilities mixed = mixed_probabilities(y);
        const StrategyProfile trembling{mixed.p1, mixed.p2};
        sol.nash_case = NashCase::kMixed;
        sol.equilibria = {{1.0, 0.0}, {0.0, 1.0}, trembling};
        sol.selected = regime_.kind == Regime::Kind::kDegenerateNoShare ? favored_leads() : trembling;
    } else if (y < th.y_2) {
        sol.nash_case = NashCase::kFavoredLeads;
        sol.equilibria = {favored_leads()};
        sol.selected = favored_leads();
    } else {
        sol.nash_case = NashCase::kJointExercise;
        sol.equilibria = {{1.0, 1.0}};
        sol.selected = {1.0, 1.0};
    }
    return sol;
}

StrategyDecision Game::strategy_at(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("strategy_at: profit level must be >= 0");
    const Thresholds& th = thresholds_;
    const PayoffTriple t = model_.payoff_triple(y);
    StrategyDecision d;

    if (y >= th.y_f) {
        d.label = {Region::kImmediateExercise, 0};
        d.profile = {1.0, 1.0};
        d.outcome = OutcomeDistribution{0.0, 0.0, 1.0};
        d.settled = settled_outcome(*d.outcome, law_);
        d.payoffs = {t.s, t.s};
        return d;
    }
    if (y < th.y_l - boundary_tolerance()) {
        // Both wait for τ(Y_L), where each collects L(Y_L) = F(Y_L); discounted
        // back this is F(y) because F is a pure power below Y_F.
        d.label = {Region::kDefer, 0};
        d.profile = {0.0, 0.0};
        d.payoffs = {t.f, t.f};
        return d;
    }
    const bool one_sided = regime_.kind == Regime::Kind::kWeakStackelberg ||
                           regime_.kind == Regime::Kind::kDegenerateNoShare;
    if (y <= th.y_l + boundary_tolerance() && !one_sided) {
        d.label = {Region::kPreemptBoundary, 0};
        d.profile = {0.0, 0.0};
        d.outcome = OutcomeDistribution{0.5, 0.5, 0.0};
        d.settled = SettledOutcome{0.5, 0.5, 0.0};
        const double e = 0.5 * (t.l + t.f);
        d.payoffs = {e, e};
        return d;
    }

    StrategyProfile selected;
    if (y <= th.y_l + boundary_tolerance()) {
        selected = favored_leads();
    } else {
        selected = nash_equilibria(y).selected;
    }
    d.profile = selected;
    if (selected.p1 == 1.0 && selected.p2 == 1.0) {
        d.label = {Region::kJointExercise, 0};
    } else if ((selected.p1 == 1.0 && selected.p2 == 0.0) || (selected.p1 == 0.0 && selected.p2 == 1.0)) {
        d.label = {Region::kFavoredLeads, selected.p1 == 1.0 ? 1 : 2};
    } else {
        d.label = {Region::kMixed, 0};
    }
    d.outcome = outcome_distribution(selected);
    d.settled = settled_outcome(*d.outcome, law_);
    d.payoffs = expected_payoff(selected, t, law_);
    return d;
}

}  // namespace preempt
