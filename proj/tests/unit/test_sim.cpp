#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "preempt/errors.hpp"
#include "preempt/sim.hpp"

namespace preempt {
namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

bool same(const Estimate& a, const Estimate& b) {
    return a.mean == b.mean && (a.se == b.se || (std::isnan(a.se) && std::isnan(b.se)));
}

bool same(const SimReport& a, const SimReport& b) {
    for (int j = 0; j < 3; ++j) {
        if (!same(a.outcome[j], b.outcome[j]) || !same(a.settled_outcome[j], b.settled_outcome[j])) return false;
    }
    return same(a.payoff[0], b.payoff[0]) && same(a.payoff[1], b.payoff[1]) && a.truncated == b.truncated &&
           a.settled == b.settled && a.regulator_draws == b.regulator_draws && same(a.rounds, b.rounds) &&
           same(a.follower_passage.time, b.follower_passage.time);
}

class Sim : public ::testing::Test {
protected:
    Model model{testing::reference_params()};
    Game game{model, testing::reference_law()};
};

TEST_F(Sim, ConfigValidation) {
    SimConfig c;
    c.n_paths = 0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = SimConfig{};
    c.dt = 0.0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = SimConfig{};
    c.horizon = -1.0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = SimConfig{};
    c.horizon = 1.0;
    c.dt = 0.25;
    EXPECT_EQ(step_count(c), 4u);
}

TEST_F(Sim, DeterministicPathWithoutVolatility) {
    ModelParams p = testing::reference_params();
    p.eta = 1e-12;
    p.nu = 0.0;  // keeps δ = 0.03 > 0
    const Model m(p);
    SimConfig c;
    c.horizon = 5.0;
    c.dt = 0.5;
    c.measure = Measure::kPhysical;
    std::mt19937_64 rng = trial_engine(1, 0);
    const auto path = sample_path(m, 2.0, c, rng);
    for (std::size_t k = 0; k < path.size(); ++k) {
        EXPECT_NEAR(path[k], 2.0 * std::exp(p.nu * 0.5 * k), 1e-9);
    }
    c.measure = Measure::kRiskNeutral;
    const auto rn = sample_path(m, 2.0, c, rng);
    EXPECT_NEAR(rn.back(), 2.0 * std::exp(drift(m, Measure::kRiskNeutral) * 5.0), 1e-9);
}

TEST_F(Sim, PathsAreReproducible) {
    SimConfig c;
    c.horizon = 2.0;
    std::mt19937_64 a = trial_engine(42, 17), b = trial_engine(42, 17), other = trial_engine(42, 18);
    const auto pa = sample_path(model, 1.0, c, a);
    const auto pb = sample_path(model, 1.0, c, b);
    const auto po = sample_path(model, 1.0, c, other);
    EXPECT_EQ(pa, pb);
    EXPECT_NE(pa, po);
    EXPECT_THROW(sample_path(model, 0.0, c, a), std::domain_error);
}

TEST_F(Sim, GainsProcessIsMartingale) {
    // e^{-rt} D2 Y_t/δ plus the discounted cash flow received up to t.
    const ModelParams& p = model.params();
    const double delta = model.derived().delta;
    SimConfig c;
    c.dt = 1.0 / 52.0;
    c.horizon = 20.0;
    const int n = 100000;
    const std::size_t checkpoints[] = {260, 520, 1040};
    double sum[3] = {0, 0, 0}, sum2[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng = trial_engine(99, i);
        const auto path = sample_path(model, 1.0, c, rng);
        double integral = 0.0;
        int j = 0;
        for (std::size_t k = 1; k < path.size() && j < 3; ++k) {
            const double t0 = (k - 1) * c.dt, t1 = k * c.dt;
            integral += 0.5 * c.dt * p.D2 * (std::exp(-p.r * t0) * path[k - 1] + std::exp(-p.r * t1) * path[k]);
            if (k == checkpoints[j]) {
                const double g = std::exp(-p.r * t1) * p.D2 * path[k] / delta + integral;
                sum[j] += g;
                sum2[j] += g * g;
                ++j;
            }
        }
    }
    const double target = p.D2 * 1.0 / delta;
    for (int j = 0; j < 3; ++j) {
        const double mean = sum[j] / n;
        const double se = std::sqrt((sum2[j] / n - mean * mean) / (n - 1));
        EXPECT_NEAR(mean, target, 3.0 * se) << checkpoints[j];
    }
}

TEST_F(Sim, FirstPassageEdgeCases) {
    const std::vector<double> path = {1.0, 1.2, 0.9, 1.5};
    EXPECT_EQ(first_passage(path, 0.5, 0.1), 0.0);
    EXPECT_NEAR(*first_passage(path, 1.3, 0.1), 0.3, 1e-15);
    EXPECT_FALSE(first_passage(path, 1e12, 0.1));
    EXPECT_THROW(first_passage(path, 0.0, 0.1), std::domain_error);
}

TEST_F(Sim, HittingProbabilityMatchesClosedForm) {
    // P(max X ≥ a on [0, T]) for X Brownian with drift m, barrier shifted by
    // the discrete-monitoring correction e^{0.5826 s √dt}.
    SimConfig c;
    c.horizon = 10.0;
    c.dt = 1.0 / 365.0;
    const double y0 = 1.0;
    const double s = model.params().eta;
    const double m = drift(model, Measure::kRiskNeutral) - 0.5 * s * s;
    const double a = std::log(model.y_f() / y0) + 0.5826 * s * std::sqrt(c.dt);
    const double T = c.horizon;
    const double exact = normal_cdf((-a + m * T) / (s * std::sqrt(T))) +
                         std::exp(2.0 * m * a / (s * s)) * normal_cdf((-a - m * T) / (s * std::sqrt(T)));
    const int n = 20000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng = trial_engine(5, i);
        if (first_passage(sample_path(model, y0, c, rng), model.y_f(), c.dt)) ++hits;
    }
    const double p = static_cast<double>(hits) / n;
    EXPECT_NEAR(p, exact, 3.0 * std::sqrt(exact * (1.0 - exact) / n));
}

TEST_F(Sim, RoundGamePureProfiles) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const RoundResult r = play_round_game(1.0, 0.0, game.law(), rng);
        EXPECT_EQ(r.outcome, RoundOutcome::kAgentOneLeads);
        EXPECT_EQ(r.rounds, 1u);
        EXPECT_FALSE(r.alternative);
    }
    const RoundResult both = play_round_game(1.0, 1.0, RegulatorLaw{0, 0, 0, 1}, rng);
    EXPECT_EQ(both.outcome, RoundOutcome::kSimultaneous);
    EXPECT_EQ(both.alternative, Alternative::kAdmitBoth);
    EXPECT_THROW(play_round_game(0.0, 0.0, game.law(), rng), std::invalid_argument);
}

TEST_F(Sim, RoundGameCap) {
    std::mt19937_64 rng(2);
    EXPECT_THROW(play_round_game(1e-12, 0.0, game.law(), rng), NumericalFailure);
}

TEST_F(Sim, RoundGameMatchesMixedOutcome) {
    const double y = 0.45;
    const MixedProbabilities m = game.mixed_probabilities(y);
    const OutcomeDistribution o = outcome_distribution({m.p1, m.p2});
    const SettledOutcome s = settled_outcome(o, game.law());
    const int n = 100000;
    std::mt19937_64 rng(3);
    int first[3] = {0, 0, 0}, settled[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const RoundResult r = play_round_game(m.p1, m.p2, game.law(), rng);
        const int idx = r.outcome == RoundOutcome::kAgentOneLeads ? 0 : r.outcome == RoundOutcome::kAgentTwoLeads ? 1 : 2;
        ++settled[idx];
        ++first[r.alternative ? 2 : idx];
    }
    const double want_first[3] = {o.a1, o.a2, o.aS};
    const double want_settled[3] = {s.leader1, s.leader2, s.shared};
    for (int j = 0; j < 3; ++j) {
        const double f = static_cast<double>(first[j]) / n;
        const double g = static_cast<double>(settled[j]) / n;
        EXPECT_NEAR(f, want_first[j], 3.0 * std::sqrt(want_first[j] * (1 - want_first[j]) / n));
        EXPECT_NEAR(g, want_settled[j], 3.0 * std::sqrt(want_settled[j] * (1 - want_settled[j]) / n));
    }
    const double p0 = game.p0(y);
    EXPECT_NEAR(s.shared, p0 / (2.0 - p0), 1e-12);
}

TEST_F(Sim, RoundGameRefusalInvariance) {
    const RegulatorLaw raw{0.3, 0.35, 0.14, 0.21};
    const RegulatorLaw reduced = reduce(raw);
    const int n = 100000;
    std::mt19937_64 rng_a(4), rng_b(5);
    double fa[3] = {0, 0, 0}, fb[3] = {0, 0, 0};
    std::uint64_t refusals = 0;
    for (int i = 0; i < n; ++i) {
        const RoundResult a = play_round_game(0.6, 0.7, raw, rng_a);
        const RoundResult b = play_round_game(0.6, 0.7, reduced, rng_b);
        fa[static_cast<int>(a.outcome)] += 1.0 / n;
        fb[static_cast<int>(b.outcome)] += 1.0 / n;
        refusals += a.regulator_draws > 1 ? 1 : 0;
    }
    EXPECT_GT(refusals, 0u);
    for (int j = 0; j < 3; ++j) {
        const double se = std::sqrt(fa[j] * (1 - fa[j]) / n + fb[j] * (1 - fb[j]) / n);
        EXPECT_NEAR(fa[j], fb[j], 3.0 * se) << j;
    }
}

TEST_F(Sim, ImmediateSettlementAboveFollowerThreshold) {
    SimConfig c;
    c.n_paths = 2000;
    c.horizon = 1.0;
    const double y0 = 2.2;
    const SimReport r = simulate_game(model, game.law(), y0, equilibrium_rules(game), c);
    EXPECT_EQ(r.settled, c.n_paths);
    EXPECT_EQ(r.truncated, 0u);
    EXPECT_NEAR(r.payoff[0].mean, model.sharing_value(y0), 1e-12);
    EXPECT_NEAR(r.payoff[1].mean, model.sharing_value(y0), 1e-12);
    EXPECT_EQ(r.outcome[2].mean, 1.0);
}

TEST_F(Sim, SymmetricSplitFromBelowPreemptionThreshold) {
    SimConfig c;
    c.n_paths = 20000;
    c.horizon = 30.0;
    c.dt = 1.0 / 100.0;
    const SimReport r = simulate_game(model, game.law(), 0.3, equilibrium_rules(game), c);
    ASSERT_GT(r.settled, 1000u);
    EXPECT_NEAR(r.settled_outcome[0].mean, 0.5, 3.0 * r.settled_outcome[0].se);
    EXPECT_EQ(r.settled_outcome[2].mean, 0.0);
    EXPECT_EQ(r.truncated + r.settled, r.n_paths);
}

TEST_F(Sim, ReproducibleAndThreadInvariant) {
    SimConfig c;
    c.n_paths = 3000;
    c.horizon = 5.0;
    c.seed = 77;
    const auto rules = equilibrium_rules(game);
    const SimReport a = simulate_game(model, game.law(), 0.45, rules, c);
    const SimReport b = simulate_game(model, game.law(), 0.45, rules, c);
    c.threads = 3;
    const SimReport t = simulate_game(model, game.law(), 0.45, rules, c);
    EXPECT_TRUE(same(a, b));
    EXPECT_TRUE(same(a, t));
    c.seed = 78;
    const SimReport d = simulate_game(model, game.law(), 0.45, rules, c);
    EXPECT_FALSE(same(a, d));
}

TEST_F(Sim, SinglePathReportHasUndefinedErrors) {
    SimConfig c;
    c.n_paths = 1;
    c.horizon = 1.0;
    const SimReport r = simulate_game(model, game.law(), 1.0, equilibrium_rules(game), c);
    EXPECT_TRUE(std::isnan(r.payoff[0].se));
    EXPECT_EQ(r.settled, 1u);
}

TEST_F(Sim, RentEqualizationInMixedRegion) {
    SimConfig c;
    c.n_paths = 100000;
    c.horizon = 10.0;
    c.seed = 2024;
    const double y0 = 0.45;
    const SimReport r = simulate_game(model, game.law(), y0, equilibrium_rules(game), c);
    const double f = model.follower_value(y0);
    EXPECT_NEAR(r.payoff[0].mean, f, 3.0 * r.payoff[0].se);
    EXPECT_NEAR(r.payoff[1].mean, f, 3.0 * r.payoff[1].se);
}

TEST_F(Sim, BestResponseGridCases) {
    const auto fixed_b = best_response_grid(game, 0.6, 201);
    const auto outcomes_b = distinct_settled(fixed_b, game.law());
    ASSERT_EQ(outcomes_b.size(), 1u);
    EXPECT_NEAR(outcomes_b[0].leader1, 1.0, 1e-12);

    const auto fixed_c = best_response_grid(game, 1.0, 201);
    ASSERT_EQ(fixed_c.size(), 1u);
    EXPECT_EQ(fixed_c[0], (StrategyProfile{1.0, 1.0}));

    const MixedProbabilities m = game.mixed_probabilities(0.45);
    const double extra[] = {m.p1, m.p2};
    const auto fixed_a = best_response_grid(game, 0.45, 201, extra);
    const auto has = [&](StrategyProfile p) { return std::find(fixed_a.begin(), fixed_a.end(), p) != fixed_a.end(); };
    EXPECT_TRUE(has({1.0, 0.0}));
    EXPECT_TRUE(has({0.0, 1.0}));
    EXPECT_TRUE(has({m.p1, m.p2}));
    EXPECT_EQ(distinct_settled(fixed_a, game.law()).size(), 3u);
    EXPECT_THROW(best_response_grid(game, 0.2, 11), std::domain_error);
}

}  // namespace
}  // namespace preempt
