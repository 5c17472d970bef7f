#pragma once

namespace gnpb {

/// Global comparison tolerance for amplitudes, probabilities and ledgers.
inline constexpr double kTol = 1e-9;

/// Pairwise orthogonality threshold applied to post-measurement states.
inline constexpr double kOrthoTol = 1e-8;

/// Relative singular-value cut used for every rank decision.
inline constexpr double kRankCut = 1e-8;

}  // namespace gnpb
