#pragma once

/**
 * @file sim.hpp
 * @brief Monte Carlo and brute-force oracles for the preemption game.
 *
 * Paths are stepped exactly in log space on a uniform grid; first passages
 * are monitored on that grid only. Each trial owns an mt19937_64 seeded from
 * (seed, trial index), so results do not depend on the thread count.
 *
 * Investment payoffs are realised as perpetuity values at the investment
 * dates: a leader entering at t collects e^{−rt}(D1·Y_t/δ − K) and gives up
 * e^{−rτ}(D1 − D2)Y_τ/δ when the follower enters at τ, which collects
 * e^{−rτ}(D2·Y_τ/δ − K). A position still open at the horizon T is valued
 * by its closed form at Y_T and discounted.
 */

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "preempt/equilibrium.hpp"

namespace preempt {

enum class Measure { kPhysical, kRiskNeutral };

struct SimConfig {
    std::uint64_t n_paths = 100000;
    double dt = 1.0 / 365.0;
    double horizon = 20.0;
    std::uint64_t seed = 1;
    Measure measure = Measure::kRiskNeutral;
    unsigned threads = 1;
};

/// Throws std::invalid_argument unless n_paths ≥ 1, dt > 0, horizon > 0.
void validate(const SimConfig& config);

/// Number of steps covering the horizon, ceil(horizon/dt).
std::size_t step_count(const SimConfig& config);

/// Generator for one trial. Depends only on (seed, trial).
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);

/// Drift of Y under the chosen measure: ν or ν − ηλ.
double drift(const Model& model, Measure measure);

/// Y at times 0, dt, ..., step_count·dt. Requires y0 > 0.
std::vector<double> sample_path(const Model& model, double y0, const SimConfig& config, std::mt19937_64& rng);

/// First grid time with path ≥ level, or nothing if the level is never reached.
std::optional<double> first_passage(std::span<const double> path, double level, double dt);

enum class RoundOutcome { kAgentOneLeads, kAgentTwoLeads, kSimultaneous };

struct RoundResult {
    RoundOutcome outcome = RoundOutcome::kSimultaneous;
    std::optional<Alternative> alternative;  ///< set when both acted in the deciding round
    std::uint64_t rounds = 0;
    std::uint64_t regulator_draws = 0;
};

inline constexpr std::uint64_t kRoundCap = 1000000;

/// Bernoulli rounds until someone acts. A simultaneous action is sent to the
/// regulator, which is asked again after each refusal while both requests
/// stand. The returned outcome is the settled one: kSimultaneous only under
/// kAdmitBoth. Throws NumericalFailure past kRoundCap rounds or draws.
RoundResult play_round_game(double p1, double p2, const RegulatorLaw& law, std::mt19937_64& rng);

/// Exercise rule of one agent: request once Y has reached `threshold`, with
/// action probability action_prob(y) when the opponent requests too.
struct StrategyRule {
    double threshold = 0.0;
    std::function<double(double)> action_prob;
};

/// Both agents follow the selected equilibrium of `game`.
std::array<StrategyRule, 2> equilibrium_rules(const Game& game);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;  ///< NaN for a single observation
};

struct PassageStats {
    double level = 0.0;
    double hit_fraction = 0.0;
    Estimate time;  ///< over hitting trials
};

struct SimReport {
    std::uint64_t n_paths = 0;
    std::uint64_t settled = 0;            ///< trials where someone invested
    std::uint64_t truncated = 0;          ///< nobody invested within the horizon
    std::uint64_t follower_pending = 0;   ///< leader in, follower not by the horizon
    std::array<Estimate, 3> outcome;      ///< game stage: agent 1 first, agent 2 first, both
    std::array<Estimate, 3> settled_outcome;  ///< agent 1 leads, agent 2 leads, shared
    std::array<Estimate, 2> payoff;       ///< discounted realised payoffs
    Estimate rounds;
    std::uint64_t regulator_draws = 0;
    PassageStats leader_passage;          ///< first passage of the lower rule threshold
    PassageStats follower_passage;        ///< first passage of Y_F
};

/// Simulates the game from y0 with per-agent rules. The law may include a
/// refusal probability. A step on which only one rule has fired lets that
/// agent invest alone. When both fire the round game is played with
/// probabilities evaluated at y0 on the first step and at the higher fired
/// threshold after a crossing; if both are zero there, a fair coin picks the
/// leader.
SimReport simulate_game(const Model& model, const RegulatorLaw& law, double y0,
                        const std::array<StrategyRule, 2>& rules, const SimConfig& config);

/// Monte Carlo value of ∫_0^T e^{−rt} quantity·Y_t dt by the trapezoid rule.
Estimate discounted_cashflow(const Model& model, double y0, double quantity, const SimConfig& config);

/// Profiles where each action probability is a best response to the other
/// over the grid {0, 1/(n−1), ..., 1} ∪ extra. (0, 0) is excluded. Requires
/// Y_L < y < Y_F.
std::vector<StrategyProfile> best_response_grid(const Game& game, double y, std::size_t grid_n,
                                                std::span<const double> extra = {});

/// Distinct settled outcomes of a set of profiles, merged within `tol`.
std::vector<SettledOutcome> distinct_settled(std::span<const StrategyProfile> profiles, const RegulatorLaw& law,
                                             double tol = 1e-9);

}  // namespace preempt
