#pragma once

#include <string>

#include "preempt/model.hpp"

namespace preempt {

/// The regulator's law over {refuse both, elect agent 1, elect agent 2,
/// admit both}. Orientation q1 >= q2 is not required.
struct RegulatorLaw {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double qS = 0.0;

    /// Share of agent 1 (index 1) or agent 2 (index 2).
    double elect(int agent) const { return agent == 1 ? q1 : q2; }
};

inline constexpr double kLawTolerance = 1e-12;

/// Throws InvalidModel unless every component is in [0, 1], they sum to 1
/// within kLawTolerance and q0 < 1.
void validate(const RegulatorLaw& law);

bool is_reduced(const RegulatorLaw& law);

/// Drops the refusal alternative: (0, q1, q2, qS)/(1 − q0). Idempotent.
/// Refusal only postpones the game, so payoffs and strategies are unchanged.
RegulatorLaw reduce(const RegulatorLaw& law);

struct Regime {
    enum class Kind {
        kCournot,                ///< (0, 0, 1): simultaneous moves always share
        kStackelbergFairCoin,    ///< (1/2, 1/2, 0)
        kStackelbergUnfairCoin,  ///< qS = 0, q1, q2 in (0, 1)
        kWeakStackelberg,        ///< q_i = 1 for the favored agent
        kDegenerateNoShare,      ///< q_j = 0 < qS, q_i > 0
        kGeneral,                ///< min(q1, q2, qS) > 0
    };
    Kind kind = Kind::kGeneral;
    int favored = 0;  ///< agent index for the weak Stackelberg / no-share cases

    friend bool operator==(const Regime&, const Regime&) = default;
};

/// Total classification of a reduced law, exact up to kLawTolerance.
Regime classify(const RegulatorLaw& reduced_law);

std::string to_string(const Regime& regime);

/// Expected settlements (S1, S2) when both agents move at once.
struct BlendedPayoffs {
    double s1 = 0.0;
    double s2 = 0.0;
};

/// S1 = q1 L + q2 F + qS S and S2 = q2 L + q1 F + qS S for a reduced law.
BlendedPayoffs blended_payoffs(const PayoffTriple& t, const RegulatorLaw& reduced_law);

/// Marginal value of being preferred by the regulator: (L − F)⁺.
double preference_option(const Model& model, double y);

enum class Alternative { kRefuseBoth, kElectOne, kElectTwo, kAdmitBoth };

/// Timing of agent i's request relative to the opponent's.
enum class Position { kFirstMover, kSimultaneous, kLaterMover };

/// Payoff received by `agent` (1 or 2) requesting to invest, given the
/// regulator's alternative and the relative timing of the requests.
double settlement(Alternative alternative, Position position, const PayoffTriple& t, int agent);

}  // namespace preempt
