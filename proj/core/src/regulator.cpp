#include "preempt/regulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "preempt/errors.hpp"

namespace preempt {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kLawTolerance; }

void require_agent(int agent) {
    if (agent != 1 && agent != 2) throw std::invalid_argument("agent index must be 1 or 2");
}

}  // namespace

void validate(const RegulatorLaw& law) {
    for (double q : {law.q0, law.q1, law.q2, law.qS}) {
        if (!std::isfinite(q) || q < 0.0 || q > 1.0 + kLawTolerance) {
            throw InvalidModel("regulator probabilities must lie in [0, 1]");
        }
    }
    if (!near(law.q0 + law.q1 + law.q2 + law.qS, 1.0)) {
        throw InvalidModel("regulator probabilities must sum to 1");
    }
    if (!(law.q0 < 1.0)) throw InvalidModel("q0 must be < 1");
}

bool is_reduced(const RegulatorLaw& law) { return law.q0 == 0.0; }

RegulatorLaw reduce(const RegulatorLaw& law) {
    validate(law);
    if (is_reduced(law)) return law;
    const double scale = 1.0 - law.q0;
    return {0.0, law.q1 / scale, law.q2 / scale, law.qS / scale};
}

Regime classify(const RegulatorLaw& law) {
    using Kind = Regime::Kind;
    if (near(law.qS, 1.0)) return {Kind::kCournot, 0};
    if (near(law.q1, 1.0)) return {Kind::kWeakStackelberg, 1};
    if (near(law.q2, 1.0)) return {Kind::kWeakStackelberg, 2};
    if (near(law.qS, 0.0)) {
        if (near(law.q1, 0.5) && near(law.q2, 0.5)) return {Kind::kStackelbergFairCoin, 0};
        return {Kind::kStackelbergUnfairCoin, 0};
    }
    if (near(law.q2, 0.0)) return {Kind::kDegenerateNoShare, 1};
    if (near(law.q1, 0.0)) return {Kind::kDegenerateNoShare, 2};
    return {Kind::kGeneral, 0};
}

std::string to_string(const Regime& regime) {
    using Kind = Regime::Kind;
    switch (regime.kind) {
        case Kind::kCournot: return "cournot";
        case Kind::kStackelbergFairCoin: return "stackelberg-fair-coin";
        case Kind::kStackelbergUnfairCoin: return "stackelberg-unfair-coin";
        case Kind::kWeakStackelberg: return "weak-stackelberg(" + std::to_string(regime.favored) + ")";
        case Kind::kDegenerateNoShare: return "degenerate-no-share(" + std::to_string(regime.favored) + ")";
        case Kind::kGeneral: return "general";
    }
    return "unknown";
}

BlendedPayoffs blended_payoffs(const PayoffTriple& t, const RegulatorLaw& law) {
    return {law.q1 * t.l + law.q2 * t.f + law.qS * t.s, law.q2 * t.l + law.q1 * t.f + law.qS * t.s};
}

double preference_option(const Model& model, double y) {
    return std::max(model.leader_value(y) - model.follower_value(y), 0.0);
}

double settlement(Alternative alternative, Position position, const PayoffTriple& t, int agent) {
    require_agent(agent);
    const bool elected = (alternative == Alternative::kElectOne && agent == 1) ||
                         (alternative == Alternative::kElectTwo && agent == 2);
    switch (alternative) {
        case Alternative::kRefuseBoth:
            return 0.0;
        case Alternative::kAdmitBoth:
            switch (position) {
                case Position::kFirstMover: return t.l;
                case Position::kSimultaneous: return t.s;
                case Position::kLaterMover: return t.f;
            }
            break;
        case Alternative::kElectOne:
        case Alternative::kElectTwo:
            if (elected) return position == Position::kLaterMover ? t.f : t.l;
            return position == Position::kSimultaneous ? t.f : 0.0;
    }
    return 0.0;
}

}  // namespace preempt
