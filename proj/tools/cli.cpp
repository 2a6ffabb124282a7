#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "preempt/cara.hpp"
#include "preempt/equilibrium.hpp"
#include "preempt/errors.hpp"

namespace preempt::cli {

using json = nlohmann::ordered_json;

namespace {

double number(const json& section, const char* section_name, const char* key) {
    if (!section.contains(key)) throw ConfigError(fmt::format("config: missing {}.{}", section_name, key));
    const json& v = section.at(key);
    if (!v.is_number()) throw ConfigError(fmt::format("config: {}.{} must be a number", section_name, key));
    return v.get<double>();
}

double number_or(const json& section, const char* section_name, const char* key, double fallback) {
    return section.contains(key) ? number(section, section_name, key) : fallback;
}

std::uint64_t count_or(const json& section, const char* key, std::uint64_t fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(fmt::format("config: sim.{} must be a non-negative integer", key));
    return v.get<std::uint64_t>();
}

const json& section(const json& doc, const char* name) {
    if (!doc.contains(name) || !doc.at(name).is_object()) {
        throw ConfigError(fmt::format("config: missing section '{}'", name));
    }
    return doc.at(name);
}

std::string measure_name(Measure m) { return m == Measure::kPhysical ? "physical" : "risk-neutral"; }

Game make_game(const RunConfig& config) { return Game(Model(config.model), config.law); }

std::string collapse_note(bool collapsed) { return collapsed ? "collapsed" : ""; }

std::string cell_text(const Cell& cell, Format format) {
    if (const double* d = std::get_if<double>(&cell)) {
        if (std::isnan(*d)) return format == Format::kCsv ? "nan" : "n/a";
        return format == Format::kCsv ? fmt::format("{}", *d) : fmt::format("{:.10g}", *d);
    }
    if (const std::int64_t* i = std::get_if<std::int64_t>(&cell)) return fmt::format("{}", *i);
    return std::get<std::string>(cell);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace

RunConfig default_config() {
    RunConfig c;
    c.model = {0.01, 0.2, 0.04, 0.3, 0.03, 10.0, 1.0, 0.35};
    c.law = {0.0, 0.5, 0.2, 0.3};
    c.sim = SimSection{};
    return c;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    RunConfig c;
    const json& m = section(doc, "model");
    c.model = {number(m, "model", "nu"), number(m, "model", "eta"), number(m, "model", "mu"),
               number(m, "model", "sigma"), number(m, "model", "r"), number(m, "model", "K"),
               number(m, "model", "D1"), number(m, "model", "D2")};
    const json& l = section(doc, "law");
    c.law = {number_or(l, "law", "q0", 0.0), number(l, "law", "q1"), number(l, "law", "q2"), number(l, "law", "qS")};
    if (doc.contains("gamma") && !doc.at("gamma").is_null()) {
        const json& g = doc.at("gamma");
        if (!g.is_number()) throw ConfigError("config: gamma must be a number or null");
        c.gamma = g.get<double>();
    }
    if (doc.contains("sim") && !doc.at("sim").is_null()) {
        const json& s = section(doc, "sim");
        SimSection sim;
        sim.config.n_paths = count_or(s, "n_paths", sim.config.n_paths);
        sim.config.dt = number_or(s, "sim", "dt", sim.config.dt);
        sim.config.horizon = number_or(s, "sim", "horizon", sim.config.horizon);
        sim.config.seed = count_or(s, "seed", sim.config.seed);
        sim.config.threads = static_cast<unsigned>(count_or(s, "threads", sim.config.threads));
        if (s.contains("measure")) {
            const json& mv = s.at("measure");
            if (mv == "physical") {
                sim.config.measure = Measure::kPhysical;
            } else if (mv == "risk-neutral") {
                sim.config.measure = Measure::kRiskNeutral;
            } else {
                throw ConfigError("config: sim.measure must be 'physical' or 'risk-neutral'");
            }
        }
        sim.max_truncated = number_or(s, "sim", "max_truncated", sim.max_truncated);
        c.sim = sim;
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config: '{}' is not valid JSON: {}", path, e.what()));
    }
    return parse_config(doc);
}

json to_json(const RunConfig& c) {
    json doc;
    doc["model"] = {{"nu", c.model.nu}, {"eta", c.model.eta}, {"mu", c.model.mu}, {"sigma", c.model.sigma},
                    {"r", c.model.r},   {"K", c.model.K},     {"D1", c.model.D1}, {"D2", c.model.D2}};
    doc["law"] = {{"q0", c.law.q0}, {"q1", c.law.q1}, {"q2", c.law.q2}, {"qS", c.law.qS}};
    doc["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
    if (c.sim) {
        const SimConfig& s = c.sim->config;
        doc["sim"] = {{"n_paths", s.n_paths},
                      {"dt", s.dt},
                      {"horizon", s.horizon},
                      {"seed", s.seed},
                      {"measure", measure_name(s.measure)},
                      {"threads", s.threads},
                      {"max_truncated", c.sim->max_truncated}};
    } else {
        doc["sim"] = nullptr;
    }
    return doc;
}

Format parse_format(const std::string& name) {
    if (name == "table") return Format::kTable;
    if (name == "csv") return Format::kCsv;
    if (name == "json") return Format::kJson;
    throw std::invalid_argument("unknown format '" + name + "'");
}

void render(const Table& table, Format format, std::ostream& out) {
    switch (format) {
        case Format::kCsv: {
            for (std::size_t j = 0; j < table.columns.size(); ++j) {
                out << (j ? "," : "") << csv_field(table.columns[j]);
            }
            out << '\n';
            for (const auto& row : table.rows) {
                for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_field(cell_text(row[j], format));
                out << '\n';
            }
            return;
        }
        case Format::kJson: {
            json rows = json::array();
            for (const auto& row : table.rows) {
                json obj = json::object();
                for (std::size_t j = 0; j < row.size(); ++j) {
                    std::visit(
                        [&](const auto& v) {
                            using T = std::decay_t<decltype(v)>;
                            if constexpr (std::is_same_v<T, double>) {
                                obj[table.columns[j]] = std::isfinite(v) ? json(v) : json(nullptr);
                            } else {
                                obj[table.columns[j]] = v;
                            }
                        },
                        row[j]);
                }
                rows.push_back(std::move(obj));
            }
            out << rows.dump(2) << '\n';
            return;
        }
        case Format::kTable: {
            std::vector<std::size_t> width(table.columns.size());
            for (std::size_t j = 0; j < width.size(); ++j) width[j] = table.columns[j].size();
            std::vector<std::vector<std::string>> text;
            for (const auto& row : table.rows) {
                auto& line = text.emplace_back();
                for (std::size_t j = 0; j < row.size(); ++j) {
                    line.push_back(cell_text(row[j], format));
                    width[j] = std::max(width[j], line.back().size());
                }
            }
            const auto emit = [&](const std::vector<std::string>& cells) {
                std::string line;
                for (std::size_t j = 0; j < cells.size(); ++j) {
                    line += fmt::format("{:<{}}", cells[j], width[j]);
                    if (j + 1 < cells.size()) line += "  ";
                }
                while (!line.empty() && line.back() == ' ') line.pop_back();
                out << line << '\n';
            };
            emit(table.columns);
            for (const auto& line : text) emit(line);
            return;
        }
    }
}

Table cmd_value(const RunConfig& config, double y) {
    if (!(y >= 0.0)) throw std::domain_error("value: --y must be >= 0");
    const Game game = make_game(config);
    const PayoffTriple t = game.model().payoff_triple(y);
    const BlendedPayoffs b = blended_payoffs(t, game.law());
    const StrategyDecision d = game.strategy_at(y);
    Table tab;
    tab.columns = {"quantity", "value"};
    tab.rows = {{"y", y},
                {"L", t.l},
                {"F", t.f},
                {"S", t.s},
                {"S1", b.s1},
                {"S2", b.s2},
                {"preference_option", preference_option(game.model(), y)},
                {"region", to_string(d.label)}};
    return tab;
}

Table cmd_thresholds(const RunConfig& config) {
    const Game game = make_game(config);
    const Thresholds& th = game.thresholds();
    const std::string regime = to_string(game.regime());
    Table tab;
    tab.columns = {"threshold", "value", "regime", "note"};
    tab.rows = {{"Y_L", th.y_l, regime, ""},
                {"Y_1", th.y_1, regime, collapse_note(th.y1_collapsed)},
                {"Y_2", th.y_2, regime, collapse_note(th.y2_collapsed)},
                {"Y_F", th.y_f, regime, ""}};
    if (config.gamma) {
        const RiskAversion gamma(*config.gamma);
        const GammaThresholds g = thresholds_gamma(game, gamma);
        const auto note = [](bool collapsed, bool at_limit) {
            return at_limit ? std::string("at-limit") : collapse_note(collapsed);
        };
        tab.rows.push_back({"Y_1_gamma", g.y_1, regime, note(th.y1_collapsed, g.y1_at_limit)});
        tab.rows.push_back({"Y_2_gamma", g.y_2, regime, note(th.y2_collapsed, g.y2_at_limit)});
    }
    return tab;
}

Table cmd_strategy(const RunConfig& config, double y) {
    if (!(y >= 0.0)) throw std::domain_error("strategy: --y must be >= 0");
    const Game game = make_game(config);
    const StrategyDecision d = game.strategy_at(y);
    Table tab;
    tab.columns = {"quantity", "value"};
    tab.rows = {{"y", y}, {"region", to_string(d.label)}, {"p1", d.profile.p1}, {"p2", d.profile.p2}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const OutcomeDistribution o = d.outcome.value_or(OutcomeDistribution{nan, nan, nan});
    const SettledOutcome s = d.settled.value_or(SettledOutcome{nan, nan, nan});
    tab.rows.insert(tab.rows.end(), {{"a1", o.a1},
                                     {"a2", o.a2},
                                     {"aS", o.aS},
                                     {"leader1", s.leader1},
                                     {"leader2", s.leader2},
                                     {"shared", s.shared},
                                     {"E1", d.payoffs.e1},
                                     {"E2", d.payoffs.e2}});
    if (config.gamma && game.regime().kind == Regime::Kind::kGeneral) {
        const RiskAversion gamma(*config.gamma);
        const GammaThresholds g = thresholds_gamma(game, gamma);
        // Risk-averse agents mix on (Y_L, Y_1_gamma).
        if (y > game.thresholds().y_l && y < g.y_1) {
            const MixedProbabilities pg = mixed_probabilities_gamma(game, y, gamma);
            const ExpectedPayoffs ce = indifference_value(game, y, gamma);
            tab.rows.insert(tab.rows.end(), {{"p1_gamma", pg.p1},
                                             {"p2_gamma", pg.p2},
                                             {"certainty_equivalent1", ce.e1},
                                             {"certainty_equivalent2", ce.e2}});
        }
    }
    return tab;
}

Table cmd_regime(const RunConfig& config) {
    const Game game = make_game(config);
    const RegulatorLaw& law = game.law();
    Table tab;
    tab.columns = {"quantity", "value"};
    tab.rows = {{"regime", to_string(game.regime())},
                {"favored", static_cast<std::int64_t>(game.thresholds().favored)},
                {"q1", law.q1},
                {"q2", law.q2},
                {"qS", law.qS}};
    return tab;
}

Table cmd_sweep(const RunConfig& config, const SweepRequest& req) {
    if (req.n < 2) throw std::invalid_argument("sweep: --grid must be >= 2");
    const Game game = make_game(config);
    Table tab;
    if (req.quantity == "thresholds_vs_gamma") {
        if (!(req.gamma_min > 0.0 && req.gamma_min < req.gamma_max)) {
            throw std::invalid_argument("sweep: need 0 < gamma_min < gamma_max");
        }
        tab.columns = {"gamma", "Y_1_gamma", "Y_2_gamma"};
        for (double lg : linspace(std::log(req.gamma_min), std::log(req.gamma_max), req.n)) {
            const double g = std::exp(lg);
            const GammaThresholds th = thresholds_gamma(game, RiskAversion(g));
            tab.rows.push_back({g, th.y_1, th.y_2});
        }
        return tab;
    }
    if (!(req.y_min >= 0.0 && req.y_min < req.y_max)) throw std::invalid_argument("sweep: need 0 <= y_min < y_max");
    const std::vector<double> ys = linspace(req.y_min, req.y_max, req.n);
    if (req.quantity == "p1p2") {
        tab.columns = {"y", "p1", "p2", "region"};
        for (double y : ys) {
            const StrategyDecision d = game.strategy_at(y);
            tab.rows.push_back({y, d.profile.p1, d.profile.p2, to_string(d.label)});
        }
        return tab;
    }
    if (req.quantity == "options") {
        const Model& model = game.model();
        const Game cournot(model, RegulatorLaw{0.0, 0.0, 0.0, 1.0});
        const Game weak(model, RegulatorLaw{0.0, 1.0, 0.0, 0.0});
        tab.columns = {"y", "L", "F", "S", "priority_option", "preference_option", "lead_gap"};
        for (double y : ys) {
            const PayoffTriple t = model.payoff_triple(y);
            const double base = cournot.strategy_at(y).payoffs.e1;
            tab.rows.push_back({y, t.l, t.f, t.s, game.strategy_at(y).payoffs.e1 - base,
                                weak.strategy_at(y).payoffs.e1 - base, t.l - t.f});
        }
        return tab;
    }
    throw std::invalid_argument("sweep: unknown quantity '" + req.quantity + "'");
}

Table cmd_simulate(const RunConfig& config, double y0) {
    if (!config.sim) throw std::invalid_argument("simulate: config has no sim section");
    if (!(y0 > 0.0)) throw std::domain_error("simulate: --y must be > 0");
    const SimSection& sim = *config.sim;
    const Game game = make_game(config);
    const SimReport rep = simulate_game(game.model(), config.law, y0, equilibrium_rules(game), sim.config);
    const double truncated = static_cast<double>(rep.truncated) / static_cast<double>(rep.n_paths);
    if (truncated > sim.max_truncated) {
        throw NumericalFailure(fmt::format("simulate: {:.4g} of the trials never invested within the horizon", truncated));
    }

    const StrategyDecision d = game.strategy_at(y0);
    // Below Y_L the game is played on reaching Y_L.
    const StrategyDecision at_play = d.outcome ? d : game.strategy_at(game.thresholds().y_l);
    const OutcomeDistribution o = *at_play.outcome;
    const SettledOutcome s = *at_play.settled;

    Table tab;
    tab.columns = {"quantity", "analytic", "empirical", "se", "check"};
    const auto compare = [&](const char* name, double analytic, const Estimate& e) {
        std::string check = "n/a";
        if (std::isfinite(e.se)) {
            const double diff = std::abs(e.mean - analytic);
            check = diff <= 3.0 * e.se || diff <= 1e-12 * std::max(1.0, std::abs(analytic)) ? "PASS" : "FAIL";
        }
        tab.rows.push_back({name, analytic, e.mean, e.se, check});
    };
    compare("a1", o.a1, rep.outcome[0]);
    compare("a2", o.a2, rep.outcome[1]);
    compare("aS", o.aS, rep.outcome[2]);
    compare("leader1", s.leader1, rep.settled_outcome[0]);
    compare("leader2", s.leader2, rep.settled_outcome[1]);
    compare("shared", s.shared, rep.settled_outcome[2]);
    compare("E1", d.payoffs.e1, rep.payoff[0]);
    compare("E2", d.payoffs.e2, rep.payoff[1]);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto info = [&](const char* name, double value) { tab.rows.push_back({name, nan, value, nan, ""}); };
    info("n_paths", static_cast<double>(rep.n_paths));
    info("truncated", static_cast<double>(rep.truncated));
    info("follower_pending", static_cast<double>(rep.follower_pending));
    info("mean_rounds", rep.rounds.mean);
    info("regulator_draws", static_cast<double>(rep.regulator_draws));
    info("hit_fraction_leader_level", rep.leader_passage.hit_fraction);
    info("mean_passage_leader_level", rep.leader_passage.time.mean);
    info("hit_fraction_Y_F", rep.follower_passage.hit_fraction);
    info("mean_passage_Y_F", rep.follower_passage.time.mean);
    if (rep.n_paths == 1) tab.warnings.push_back("n_paths = 1: standard errors are undefined");
    if (rep.truncated > 0) {
        tab.warnings.push_back(fmt::format("{} trials reached the horizon without investment", rep.truncated));
    }
    return tab;
}

}  // namespace preempt::cli
