// Hand-checked worked examples shared by the unit and acceptance suites.
// The two error matrices are small enough that every number below can be
// recomputed by hand; several were, independently, before the library
// existed. Tolerances belong to the tests, not to this header.

#pragma once

#include <array>
#include <cstddef>

namespace golden {

// ---- 5 individuals x 4 cases, absolute errors -----------------------------

inline constexpr std::size_t kAbsRows = 5;
inline constexpr std::size_t kAbsCols = 4;

inline constexpr std::array<double, kAbsRows * kAbsCols> kAbsErrors = {
    2, 2, 4, 2,
    1, 2, 4, 3,
    2, 2, 3, 4,
    0, 2, 5, 5,
    0, 3, 5, 2,
};

inline constexpr std::array<double, kAbsRows> kAbsMeanError = {2.5, 2.5, 2.75, 3.0, 2.5};

// Cases on which each individual holds the exact column minimum.
inline constexpr std::array<std::array<int, kAbsCols>, kAbsRows> kAbsEliteCases = {{
    {1, 3, -1, -1},
    {1, -1, -1, -1},
    {1, 2, -1, -1},
    {0, 1, -1, -1},
    {0, 3, -1, -1},
}};

// Published to two decimals; the exact values are 1/4, 0, 1/3, 5/24, 5/24.
inline constexpr std::array<double, kAbsRows> kAbsPlex = {0.25, 0.00, 0.33, 0.21, 0.21};

// Size-2 tournament, sampling with replacement, ties sharing a rank class.
inline constexpr std::array<double, kAbsRows> kAbsPtourn = {0.28, 0.28, 0.12, 0.04, 0.28};

// ---- 9 individuals x 5 cases, clustered errors ----------------------------

inline constexpr std::size_t kCluRows = 9;
inline constexpr std::size_t kCluCols = 5;

inline constexpr std::array<double, kCluRows * kCluCols> kCluErrors = {
    0.0, 1.1, 2.2, 3.0, 5.0,
    0.1, 1.2, 2.0, 2.0, 6.0,
    0.2, 1.0, 2.1, 1.0, 7.0,
    1.0, 2.1, 0.2, 0.0, 8.0,
    1.1, 2.2, 0.0, 4.0, 4.0,
    1.2, 2.0, 0.1, 5.0, 3.0,
    2.0, 0.1, 1.2, 6.0, 2.0,
    2.1, 0.2, 1.0, 7.0, 1.0,
    2.2, 0.0, 1.1, 8.0, 0.0,
};

// Per-case median absolute deviation of the columns above.
inline constexpr std::array<double, kCluCols> kCluEps = {0.9, 0.9, 0.9, 2.0, 2.0};

// Pass flags under kCluEps: 0 = within eps of the column minimum.
inline constexpr std::array<int, kCluRows * kCluCols> kCluPassFlags = {
    0, 1, 1, 1, 1,
    0, 1, 1, 0, 1,
    0, 1, 1, 0, 1,
    1, 1, 0, 0, 1,
    1, 1, 0, 1, 1,
    1, 1, 0, 1, 1,
    1, 0, 1, 1, 0,
    1, 0, 1, 1, 0,
    1, 0, 1, 1, 0,
};

// Selection probabilities published to three decimals; every underlying
// value is an exact multiple of 1/120 (one per case order).
inline constexpr std::array<double, kCluRows> kCluPlex = {
    0.2, 0.0, 0.0, 0.2, 0.2, 0.0, 0.0, 0.0, 0.4};
inline constexpr std::array<double, kCluRows> kCluPtourn = {
    0.111, 0.111, 0.111, 0.111, 0.111, 0.111, 0.111, 0.111, 0.111};
inline constexpr std::array<double, kCluRows> kCluPStatic = {
    0.000, 0.150, 0.150, 0.300, 0.000, 0.000, 0.133, 0.133, 0.133};
inline constexpr std::array<double, kCluRows> kCluPSemi = {
    0.067, 0.117, 0.117, 0.200, 0.050, 0.050, 0.133, 0.133, 0.133};
inline constexpr std::array<double, kCluRows> kCluPDyn = {
    0.033, 0.200, 0.117, 0.167, 0.050, 0.033, 0.133, 0.217, 0.050};

// One dynamic-variant selection event traced by hand: drawing the cases in
// the order (1, 0, 2) narrows the pool {all} -> {6,7,8} -> {6,7} -> {7}.
inline constexpr std::array<std::size_t, 3> kCluDynTraceOrder = {1, 0, 2};
inline constexpr std::size_t kCluDynTraceWinner = 7;

// ---- closed-form case-appearance probabilities ----------------------------

// p_first(t, n) = 1 - ((t-1)/t)^n.
inline constexpr double kPFirst10x10 = 0.6513215599;
inline constexpr double kPFirstLo = 0.50; // p_first(1433, 1000) bounds
inline constexpr double kPFirstHi = 0.51;

} // namespace golden
