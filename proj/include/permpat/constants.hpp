#pragma once

// Library version and the fixed constants of the bounds pipeline. Every
// machine-readable report embeds these so output is self-describing.

namespace permpat {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Growth base and coefficient of the per-length quadratic error term
// error(n,k) = 3.5 * 1.57^k * C(n,k)^2 / k!.
inline constexpr double kErrorGrowthBase = 1.57;
inline constexpr double kErrorCoefficient = 3.5;

// Exponent D of the error envelope 3.5 * n * 2^(D * n^(2/3)).
inline constexpr double kEnvelopeExponent = 5.02;

// Coefficient of the ln-term in the consecutive-mode reference bound
// (n^2/2) * (1 - 17 ln n / n).
inline constexpr double kConsecutiveLogCoefficient = 17.0;

// Reference lines printed by ratio reports: the proven lower ratio for
// E(X)/2^n and the best known upper ratio.
inline constexpr double kRefLineHalf = 0.5;
inline constexpr double kRefLineUpper = 0.608;

// Normal-approximation multiplier for 95% confidence intervals.
inline constexpr double kCiMultiplier = 1.96;

}  // namespace permpat
