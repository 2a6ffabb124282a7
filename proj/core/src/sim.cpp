#include "preempt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "preempt/errors.hpp"

namespace preempt {

namespace {

// Runs body(i) for i in [0, n) on up to `threads` threads, contiguous chunks.
template <class Body>
void for_each_trial(std::uint64_t n, unsigned threads, Body body) {
    const std::uint64_t workers = std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(n, 1));
    if (workers == 1) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * chunk;
        const std::uint64_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &body] {
            for (std::uint64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

class Accumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::uint64_t count() const { return n_; }
    Estimate estimate() const {
        if (n_ == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        if (n_ == 1) return {mean_, std::numeric_limits<double>::quiet_NaN()};
        const double n = static_cast<double>(n_);
        return {mean_, std::sqrt(m2_ / (n - 1.0) / n)};
    }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

constexpr int kNone = -1;

struct Trial {
    int outcome = kNone;  // 0, 1: agent first; 2: both
    int settled = kNone;  // 0, 1: agent leads; 2: shared
    bool follower_pending = false;
    double pay[2] = {0.0, 0.0};
    std::uint64_t rounds = 0;
    std::uint64_t draws = 0;
    double leader_hit = -1.0;
    double follower_hit = -1.0;
};

struct Stepper {
    double log_drift;
    double vol;

    Stepper(const Model& model, const SimConfig& config) {
        const double eta = model.params().eta;
        log_drift = (drift(model, config.measure) - 0.5 * eta * eta) * config.dt;
        vol = eta * std::sqrt(config.dt);
    }
};

}  // namespace

void validate(const SimConfig& config) {
    if (config.n_paths < 1) throw std::invalid_argument("sim: n_paths must be >= 1");
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw std::invalid_argument("sim: dt must be > 0");
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
        throw std::invalid_argument("sim: horizon must be > 0");
    }
}

std::size_t step_count(const SimConfig& config) {
    validate(config);
    return static_cast<std::size_t>(std::ceil(config.horizon / config.dt - 1e-9));
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

double drift(const Model& model, Measure measure) {
    const ModelParams& p = model.params();
    return measure == Measure::kPhysical ? p.nu : p.nu - p.eta * model.derived().lambda;
}

std::vector<double> sample_path(const Model& model, double y0, const SimConfig& config, std::mt19937_64& rng) {
    if (!(y0 > 0.0)) throw std::domain_error("sample_path: y0 must be > 0");
    const std::size_t n = step_count(config);
    const Stepper step(model, config);
    std::normal_distribution<double> normal;
    std::vector<double> path(n + 1);
    double x = std::log(y0);
    path[0] = y0;
    for (std::size_t k = 1; k <= n; ++k) {
        x += step.log_drift + step.vol * normal(rng);
        path[k] = std::exp(x);
    }
    return path;
}

std::optional<double> first_passage(std::span<const double> path, double level, double dt) {
    if (!(level > 0.0)) throw std::domain_error("first_passage: level must be > 0");
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (path[k] >= level) return static_cast<double>(k) * dt;
    }
    return std::nullopt;
}

RoundResult play_round_game(double p1, double p2, const RegulatorLaw& law, std::mt19937_64& rng) {
    if (!(std::max(p1, p2) > 0.0) || p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
        throw std::invalid_argument("play_round_game requires p1, p2 in [0, 1] with max(p1, p2) > 0");
    }
    validate(law);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    RoundResult res;
    while (res.rounds < kRoundCap) {
        ++res.rounds;
        const bool act1 = unif(rng) < p1;
        const bool act2 = unif(rng) < p2;
        if (act1 && !act2) {
            res.outcome = RoundOutcome::kAgentOneLeads;
            res.alternative.reset();
            return res;
        }
        if (act2 && !act1) {
            res.outcome = RoundOutcome::kAgentTwoLeads;
            res.alternative.reset();
            return res;
        }
        if (!act1) continue;
        // Both requests stand until the regulator rules on them.
        double u = 0.0;
        do {
            if (res.regulator_draws == kRoundCap) throw NumericalFailure("play_round_game: regulator draw cap exceeded");
            ++res.regulator_draws;
            u = unif(rng);
        } while (u < law.q0);
        if (u < law.q0 + law.q1) {
            res.alternative = Alternative::kElectOne;
            res.outcome = RoundOutcome::kAgentOneLeads;
        } else if (u < law.q0 + law.q1 + law.q2) {
            res.alternative = Alternative::kElectTwo;
            res.outcome = RoundOutcome::kAgentTwoLeads;
        } else {
            res.alternative = Alternative::kAdmitBoth;
            res.outcome = RoundOutcome::kSimultaneous;
        }
        return res;
    }
    throw NumericalFailure("play_round_game: round cap exceeded");
}

std::array<StrategyRule, 2> equilibrium_rules(const Game& game) {
    const double y_l = game.thresholds().y_l;
    return {StrategyRule{y_l, [game](double y) { return game.strategy_at(y).profile.p1; }},
            StrategyRule{y_l, [game](double y) { return game.strategy_at(y).profile.p2; }}};
}

SimReport simulate_game(const Model& model, const RegulatorLaw& law, double y0,
                        const std::array<StrategyRule, 2>& rules, const SimConfig& config) {
    validate(law);
    if (!(y0 > 0.0)) throw std::domain_error("simulate_game: y0 must be > 0");
    for (const StrategyRule& rule : rules) {
        if (!(rule.threshold >= 0.0) || !rule.action_prob) {
            throw std::invalid_argument("simulate_game: each rule needs a threshold >= 0 and an action probability");
        }
    }
    const std::size_t n_steps = step_count(config);
    const Stepper step(model, config);
    const ModelParams& p = model.params();
    const double delta = model.derived().delta;
    const double beta = model.derived().beta;
    const double y_f = model.y_f();
    const double log_f = std::log(y_f);
    const double log_rule[2] = {std::log(rules[0].threshold), std::log(rules[1].threshold)};
    const double low_level = std::min(rules[0].threshold, rules[1].threshold);
    const double log_low = std::log(low_level);
    const double horizon = static_cast<double>(n_steps) * config.dt;

    std::vector<Trial> trials(config.n_paths);
    for_each_trial(config.n_paths, config.threads, [&](std::uint64_t i) {
        std::mt19937_64 rng = trial_engine(config.seed, i);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Trial& tr = trials[i];
        int leader = kNone;
        bool done = false;
        double x = std::log(y0);
        for (std::size_t k = 0;; ++k) {
            const double t = static_cast<double>(k) * config.dt;
            const double disc = std::exp(-p.r * t);
            if (tr.leader_hit < 0.0 && x >= log_low) tr.leader_hit = t;
            const bool at_f = x >= log_f;
            if (at_f && tr.follower_hit < 0.0) tr.follower_hit = t;

            if (tr.settled == kNone) {
                const bool fired[2] = {x >= log_rule[0], x >= log_rule[1]};
                if (fired[0] || fired[1]) {
                    const double y = std::exp(x);
                    if (fired[0] && fired[1]) {
                        const double level = k == 0 ? y0 : std::max(rules[0].threshold, rules[1].threshold);
                        const double a1 = rules[0].action_prob(level);
                        const double a2 = rules[1].action_prob(level);
                        if (!(std::max(a1, a2) > 0.0)) {
                            tr.outcome = tr.settled = unif(rng) < 0.5 ? 0 : 1;
                        } else {
                            const RoundResult rr = play_round_game(a1, a2, law, rng);
                            tr.rounds = rr.rounds;
                            tr.draws = rr.regulator_draws;
                            tr.outcome = rr.alternative ? 2 : (rr.outcome == RoundOutcome::kAgentOneLeads ? 0 : 1);
                            tr.settled = rr.outcome == RoundOutcome::kSimultaneous
                                             ? 2
                                             : (rr.outcome == RoundOutcome::kAgentOneLeads ? 0 : 1);
                        }
                    } else {
                        tr.outcome = tr.settled = fired[0] ? 0 : 1;
                    }
                    if (tr.settled == 2) {
                        tr.pay[0] = tr.pay[1] = disc * (p.D2 * y / delta - p.K);
                        done = true;
                    } else {
                        leader = tr.settled;
                        tr.pay[leader] = disc * (p.D1 * y / delta - p.K);
                    }
                }
            }
            if (leader != kNone && !done && at_f) {
                const double y = std::exp(x);
                tr.pay[leader] -= disc * (p.D1 - p.D2) * y / delta;
                tr.pay[1 - leader] = disc * (p.D2 * y / delta - p.K);
                done = true;
            }
            if (done && tr.follower_hit >= 0.0) break;
            if (k == n_steps) {
                if (done) break;
                const double y = std::exp(x);
                const double disc_t = std::exp(-p.r * horizon);
                const double waiting = disc_t * model.follower_value(y);
                if (leader == kNone) {
                    tr.pay[0] = tr.pay[1] = waiting;
                } else {
                    tr.follower_pending = true;
                    const double scaled = std::exp(beta * std::log(y / y_f));
                    tr.pay[leader] -= disc_t * (p.D1 - p.D2) * y_f / delta * scaled;
                    tr.pay[1 - leader] = waiting;
                }
                break;
            }
            x += step.log_drift + step.vol * normal(rng);
        }
    });

    SimReport rep;
    rep.n_paths = config.n_paths;
    rep.leader_passage.level = low_level;
    rep.follower_passage.level = y_f;
    std::array<Accumulator, 3> outcome, settled;
    std::array<Accumulator, 2> payoff;
    Accumulator rounds, lead_time, follow_time;
    std::uint64_t lead_hits = 0, follow_hits = 0;
    for (const Trial& tr : trials) {
        payoff[0].add(tr.pay[0]);
        payoff[1].add(tr.pay[1]);
        if (tr.leader_hit >= 0.0) {
            ++lead_hits;
            lead_time.add(tr.leader_hit);
        }
        if (tr.follower_hit >= 0.0) {
            ++follow_hits;
            follow_time.add(tr.follower_hit);
        }
        if (tr.follower_pending) ++rep.follower_pending;
        if (tr.settled == kNone) {
            ++rep.truncated;
            continue;
        }
        ++rep.settled;
        for (int j = 0; j < 3; ++j) {
            outcome[j].add(tr.outcome == j ? 1.0 : 0.0);
            settled[j].add(tr.settled == j ? 1.0 : 0.0);
        }
        rounds.add(static_cast<double>(tr.rounds));
        rep.regulator_draws += tr.draws;
    }
    for (int j = 0; j < 3; ++j) {
        rep.outcome[j] = outcome[j].estimate();
        rep.settled_outcome[j] = settled[j].estimate();
    }
    rep.payoff = {payoff[0].estimate(), payoff[1].estimate()};
    rep.rounds = rounds.estimate();
    const double n = static_cast<double>(config.n_paths);
    rep.leader_passage.hit_fraction = static_cast<double>(lead_hits) / n;
    rep.leader_passage.time = lead_time.estimate();
    rep.follower_passage.hit_fraction = static_cast<double>(follow_hits) / n;
    rep.follower_passage.time = follow_time.estimate();
    return rep;
}

Estimate discounted_cashflow(const Model& model, double y0, double quantity, const SimConfig& config) {
    if (!(y0 > 0.0)) throw std::domain_error("discounted_cashflow: y0 must be > 0");
    const std::size_t n_steps = step_count(config);
    const Stepper step(model, config);
    const double r = model.params().r;
    std::vector<double> values(config.n_paths);
    for_each_trial(config.n_paths, config.threads, [&](std::uint64_t i) {
        std::mt19937_64 rng = trial_engine(config.seed, i);
        std::normal_distribution<double> normal;
        double x = std::log(y0);
        double sum = 0.5 * y0;
        for (std::size_t k = 1; k <= n_steps; ++k) {
            x += step.log_drift + step.vol * normal(rng);
            const double w = k == n_steps ? 0.5 : 1.0;
            sum += w * std::exp(x - r * static_cast<double>(k) * config.dt);
        }
        values[i] = quantity * sum * config.dt;
    });
    Accumulator acc;
    for (double v : values) acc.add(v);
    return acc.estimate();
}

std::vector<StrategyProfile> best_response_grid(const Game& game, double y, std::size_t grid_n,
                                                std::span<const double> extra) {
    const Thresholds& th = game.thresholds();
    if (!(y > th.y_l && y < th.y_f)) throw std::domain_error("best_response_grid: profit level outside (Y_L, Y_F)");
    if (grid_n < 2) throw std::invalid_argument("best_response_grid: grid_n must be >= 2");
    std::vector<double> grid;
    grid.reserve(grid_n + extra.size());
    for (std::size_t i = 0; i < grid_n; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(grid_n - 1));
    for (double e : extra) {
        if (e >= 0.0 && e <= 1.0) grid.push_back(e);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const PayoffTriple t = game.model().payoff_triple(y);
    const double tol = 1e-10 * (std::abs(t.l) + std::abs(t.f) + std::abs(t.s) + game.model().params().K);
    const std::size_t n = grid.size();
    const double excluded = -std::numeric_limits<double>::infinity();
    std::vector<double> e1(n * n, excluded), e2(n * n, excluded);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            const ExpectedPayoffs e = expected_payoff({grid[i], grid[j]}, t, game.law());
            e1[i * n + j] = e.e1;
            e2[i * n + j] = e.e2;
        }
    }
    std::vector<double> best1(n, excluded), best2(n, excluded);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            best1[j] = std::max(best1[j], e1[i * n + j]);
            best2[i] = std::max(best2[i], e2[i * n + j]);
        }
    }
    std::vector<StrategyProfile> fixed;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            if (e1[i * n + j] >= best1[j] - tol && e2[i * n + j] >= best2[i] - tol) {
                fixed.push_back({grid[i], grid[j]});
            }
        }
    }
    return fixed;
}

std::vector<SettledOutcome> distinct_settled(std::span<const StrategyProfile> profiles, const RegulatorLaw& law,
                                             double tol) {
    const RegulatorLaw reduced = reduce(law);
    std::vector<SettledOutcome> out;
    for (const StrategyProfile& pr : profiles) {
        const SettledOutcome s = settled_outcome(outcome_distribution(pr), reduced);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const SettledOutcome& o) {
            return std::abs(o.leader1 - s.leader1) <= tol && std::abs(o.leader2 - s.leader2) <= tol &&
                   std::abs(o.shared - s.shared) <= tol;
        });
        if (!seen) out.push_back(s);
    }
    return out;
}

}  // namespace preempt
