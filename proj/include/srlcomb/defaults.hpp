#pragma once

#include <cstdint>

namespace srlcomb::defaults {

inline constexpr double kGamma = 0.1;            // softmax temperature
inline constexpr double kBias = 0.30;            // O, score of an unselected candidate
inline constexpr int kKernelDegree = 2;
inline constexpr int kEpochs = 5;
inline constexpr double kSvmC = 1.0;
inline constexpr double kSvmTolerance = 1e-3;
inline constexpr int kBootstrapSamples = 1000;
inline constexpr double kBootstrapLevel = 0.95;
inline constexpr int kNgramCap = 10;             // chunk sequences longer than this keep start/end n-grams
inline constexpr int kPathGeneralizeThreshold = 3;
inline constexpr std::uint64_t kNodeBudget = 20'000'000;
inline constexpr std::uint64_t kSeed = 1;

}  // namespace srlcomb::defaults
