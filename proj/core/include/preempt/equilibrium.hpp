#pragma once

/**
 * @file equilibrium.hpp
 * @brief Strategic thresholds and equilibria of the regulated preemption game.
 *
 * Between the preemption threshold Y_L (where L = F) and the follower
 * threshold Y_F both agents want to lead, and a simultaneous request is
 * settled by the regulator. Each agent's readiness to act is summarised by
 *
 *     p0(y)  = (L − F)/(L − S),
 *     P_i(y) = p0/(q_i p0 + qS) = (L − F)/(L − S_j),  j = 3 − i,
 *
 * where P_i is the probability that makes the opponent indifferent. The
 * dominance thresholds Y_1 ≤ Y_2 are where the favored and the other agent's
 * indifference probability reaches one.
 *
 * A Game caches the reduced law, its regime and its thresholds at
 * construction and is immutable afterwards.
 */

#include <optional>
#include <string>
#include <vector>

#include "preempt/model.hpp"
#include "preempt/regulator.hpp"

namespace preempt {

struct Thresholds {
    double y_l = 0.0;
    double y_1 = 0.0;  ///< favored agent starts to lead alone
    double y_2 = 0.0;  ///< both agents request at once
    double y_f = 0.0;
    int favored = 1;   ///< agent whose dominance threshold is y_1
    bool y1_collapsed = false;  ///< y_1 pinned to Y_L or Y_F by the regime
    bool y2_collapsed = false;
};

/// Action probabilities (p1, p2) in the repeated coordination game.
struct StrategyProfile {
    double p1 = 0.0;
    double p2 = 0.0;

    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

/// Indifference probabilities. Values above 1 are returned raw. `at_limit`
/// marks a 0/0 form (qS = 0 and p0 = 0) replaced by its limit in p0.
struct MixedProbabilities {
    double p1 = 0.0;
    double p2 = 0.0;
    bool at_limit = false;
};

/// Game-stage outcome before the regulator rules on a simultaneous move.
struct OutcomeDistribution {
    double a1 = 0.0;  ///< agent 1 acts alone first
    double a2 = 0.0;  ///< agent 2 acts alone first
    double aS = 0.0;  ///< both act in the same round
};

/// Final positions once the regulator has ruled.
struct SettledOutcome {
    double leader1 = 0.0;
    double leader2 = 0.0;
    double shared = 0.0;
};

struct ExpectedPayoffs {
    double e1 = 0.0;
    double e2 = 0.0;
};

/// Unique root of L − F on (0, Y_F).
double preemption_threshold(const Model& model);

/// Thresholds for a reduced law. Regimes without an interior root report the
/// collapsed values: Cournot Y_1 = Y_2 = Y_F, Stackelberg Y_1 = Y_2 = Y_L,
/// one-sided laws Y_2 = Y_F.
Thresholds solve_thresholds(const Model& model, const RegulatorLaw& reduced_law);

/// a1 = p1(1−p2)/(p1+p2−p1p2), a2 symmetric, aS = p1p2/(p1+p2−p1p2).
/// Throws std::invalid_argument when max(p1, p2) = 0.
OutcomeDistribution outcome_distribution(const StrategyProfile& profile);

SettledOutcome settled_outcome(const OutcomeDistribution& outcome, const RegulatorLaw& reduced_law);

/// E1 = (a1 + aS q1)L + (a2 + aS q2)F + aS qS S, E2 with the roles swapped.
ExpectedPayoffs expected_payoff(const StrategyProfile& profile, const PayoffTriple& t,
                                const RegulatorLaw& reduced_law);

enum class Region {
    kDefer,              ///< y < Y_L: wait for the profit level to rise
    kPreemptBoundary,    ///< y = Y_L: each agent leads with probability 1/2
    kMixed,              ///< Y_L < y < Y_1: mixed strategies (P1, P2)
    kFavoredLeads,       ///< Y_1 ≤ y < Y_2: favored agent invests, the other follows
    kJointExercise,      ///< Y_2 ≤ y < Y_F: both request, regulator settles
    kImmediateExercise,  ///< y ≥ Y_F: both invest at once
};

struct RegionLabel {
    Region region = Region::kDefer;
    int leader = 0;  ///< set for kFavoredLeads

    friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

std::string to_string(Region region);
std::string to_string(const RegionLabel& label);

enum class NashCase { kMixed, kFavoredLeads, kJointExercise };

struct NashSolution {
    NashCase nash_case = NashCase::kMixed;
    std::vector<StrategyProfile> equilibria;
    StrategyProfile selected;
};

/// Everything the equilibrium prescribes at one profit level.
struct StrategyDecision {
    RegionLabel label;
    StrategyProfile profile;
    std::optional<OutcomeDistribution> outcome;  ///< empty while deferring
    std::optional<SettledOutcome> settled;
    ExpectedPayoffs payoffs;
};

class Game {
public:
    /// Reduces `law` (validating it) and solves the thresholds once.
    Game(const Model& model, const RegulatorLaw& law);

    const Model& model() const { return model_; }
    const RegulatorLaw& law() const { return law_; }
    const Regime& regime() const { return regime_; }
    const Thresholds& thresholds() const { return thresholds_; }

    /// Half-width of the band treated as y = Y_L.
    double boundary_tolerance() const;

    /// Requires Y_L ≤ y ≤ Y_F; 0 within boundary_tolerance() of Y_L and the
    /// limit 1 at y = Y_F.
    double p0(double y) const;

    MixedProbabilities mixed_probabilities(double y) const;

    /// Requires Y_L < y < Y_F. Below Y_1 it reports the two pure equilibria and
    /// the mixed one; the mixed one is selected unless the law never lets the
    /// unfavored agent win a simultaneous move (steady-hand selection).
    NashSolution nash_equilibria(double y) const;

    /// Equilibrium prescription for any y ≥ 0.
    StrategyDecision strategy_at(double y) const;

private:
    void require_interval(double y, const char* what) const;
    StrategyProfile favored_leads() const;

    Model model_;
    RegulatorLaw law_;
    Regime regime_;
    Thresholds thresholds_;
};

}  // namespace preempt
