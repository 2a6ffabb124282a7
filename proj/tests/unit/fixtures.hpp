#pragma once

#include "preempt/equilibrium.hpp"
#include "preempt/model.hpp"
#include "preempt/regulator.hpp"

namespace preempt::testing {

inline ModelParams reference_params() { return {0.01, 0.2, 0.04, 0.3, 0.03, 10.0, 1.0, 0.35}; }
inline RegulatorLaw reference_law() { return {0.0, 0.5, 0.2, 0.3}; }

// 40-digit evaluations of the closed forms, rounded to double.
inline constexpr double kBeta = 1.7103478913550020;
inline constexpr double kYF = 1.8344845093457154;
inline constexpr double kYL = 0.36638570145393556;
inline constexpr double kY1 = 0.52963073018429157;
inline constexpr double kY2 = 0.71811428100395814;

}  // namespace preempt::testing
