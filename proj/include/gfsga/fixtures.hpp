#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "registers.hpp"
#include "taps.hpp"

/*!
  \file fixtures.hpp
  \brief Published reference values

  Every number the report command compares against lives here. Tap sets are
  given either as positions or as consecutive differences starting at cell 1.
*/

namespace gfsga::reference
{

/* one row of a (constant, greedy, cyclic) cost comparison */
struct ModeRow
{
  label_t length = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  /* consecutive differences; empty when positions are given */
  std::vector<label_t> differences;
  std::vector<label_t> positions;
  std::optional<std::size_t> lambda;
  double constant = 0.0;
  double greedy = 0.0;
  double cyclic = 0.0;

  TapSet taps() const
  {
    return differences.empty() ? TapSet( positions, length ) : TapSet::from_differences( differences, length );
  }
};

/* costs when the taps have high divisibility */
inline std::vector<ModeRow> bad_taps_table()
{
  return {
      { 80, 9, 2, { 12, 3, 6, 12, 6, 4, 24, 12 }, {}, {}, 43.97, 67.97, 62.97 },
      { 120, 11, 3, { 5, 10, 15, 4, 5, 10, 5, 15, 20, 25 }, {}, {}, 37.7, 63, 69.7 },
      { 160, 15, 6, { 14, 7, 3, 14, 7, 7, 14, 7, 14, 28, 7, 14, 14, 7 }, {}, {}, 32.97, 32.97, 50.97 } };
}

/* costs for algorithmically chosen taps */
inline std::vector<ModeRow> algorithmic_table()
{
  return {
      { 80, 7, 2, { 5, 13, 7, 26, 11, 17 }, {}, {}, 69.97, 63.97, 59.97 },
      { 120, 13, 3, { 5, 7, 3, 13, 6, 11, 5, 11, 7, 13, 21, 17 }, {}, {}, 99.7, 104, 78.7 },
      { 160, 17, 6, { 5, 11, 4, 3, 7, 9, 1, 2, 23, 15, 5, 13, 7, 26, 11, 17 }, {}, {}, 86.97, 79.97, 41.97 },
      { 200, 21, 7, { 3, 7, 9, 13, 18, 7, 9, 1, 2, 9, 1, 2, 23, 15, 5, 13, 7, 26, 11, 17 }, {}, {}, 108.9, 96.93, 68.93 } };
}

/* full positive difference sets against the algorithmic choice, same (L, n, m) per row pair */
inline std::vector<ModeRow> fpds_table()
{
  return {
      { 80, 7, 2, {}, { 1, 3, 8, 14, 22, 23, 26 }, {}, 35.97, 37.97, 57.97 },
      { 120, 13, 3, {}, { 1, 3, 6, 26, 38, 44, 60, 71, 86, 90, 99, 100, 107 }, {}, 86.72, 90.72, 95.72 },
      { 160, 15, 4, {}, { 1, 5, 21, 31, 58, 60, 63, 77, 101, 112, 124, 137, 145, 146, 152 }, {}, 96.97, 105.97, 116.97 },
      { 200, 17, 5, {}, { 1, 6, 8, 18, 53, 57, 68, 81, 82, 101, 123, 139, 160, 166, 169, 192, 200 }, {}, 113.93, 123.93, 132.93 },
      { 80, 7, 2, { 5, 13, 7, 26, 11, 17 }, {}, 1, 69.97, 63.97, 59.97 },
      { 120, 13, 3, { 5, 7, 3, 13, 6, 11, 5, 11, 7, 13, 21, 17 }, {}, 3, 99.7, 104, 78.7 },
      { 160, 15, 4, { 5, 3, 7, 1, 9, 17, 15, 23, 5, 13, 7, 26, 11, 17 }, {}, 3, 114.97, 124.97, 101.97 },
      { 200, 17, 5, { 7, 13, 10, 13, 7, 1, 9, 17, 15, 23, 5, 13, 7, 26, 11, 17 }, {}, 3, 120.93, 120.93, 113.93 } };
}

/* per-sample repeat table of a variable schedule */
struct ScheduleTable
{
  std::vector<label_t> steps;
  std::vector<std::size_t> q;
  std::vector<std::vector<label_t>> repeated_sets;
  std::size_t samples = 0;
  std::size_t total = 0;
  double cost = 0.0;
};

/* taps {1, 6, 19, 26, 52, 63, 80} at (n, m, L) = (7, 2, 80) */
inline TapSet example1_taps()
{
  return TapSet( { 1, 6, 19, 26, 52, 63, 80 }, 80 );
}

inline ScheduleTable greedy_table()
{
  ScheduleTable t;
  t.steps = { 5, 13, 7, 26, 11, 17, 5, 11, 17, 5, 2, 11, 7, 26, 11, 17, 5, 2, 11, 7, 26 };
  t.q = { 1, 2, 3, 4, 5, 6, 2, 2, 3, 2, 2, 3, 3, 4, 5, 6, 2, 2, 3, 3, 4 };
  t.repeated_sets = { { 6 },
                      { 19, 24 },
                      { 26, 31, 44 },
                      { 52, 57, 70, 77 },
                      { 63, 68, 81, 88, 114 },
                      { 80, 85, 98, 105, 131, 142 },
                      { 85, 103 },
                      { 114, 147 },
                      { 131, 164, 175 },
                      { 118, 136 },
                      { 125, 138 },
                      { 131, 136, 182 },
                      { 138, 143, 156 },
                      { 164, 169, 182, 189 },
                      { 175, 180, 193, 200, 226 },
                      { 192, 197, 210, 217, 243, 254 },
                      { 197, 215 },
                      { 199, 217 },
                      { 210, 215, 261 },
                      { 217, 222, 235 },
                      { 243, 248, 261, 268 } };
  t.samples = 22;
  t.total = 67;
  t.cost = 63.97;
  return t;
}

inline ScheduleTable cyclic_table()
{
  ScheduleTable t;
  for ( std::size_t j = 0; j < 21; ++j )
  {
    static constexpr label_t d[] = { 5, 13, 7, 26, 11, 17 };
    t.steps.push_back( d[j % 6] );
  }
  t.q = { 1, 2, 3, 4, 5, 6, 2, 2, 3, 4, 5, 6, 2, 2, 3, 4, 5, 6, 2, 2, 3 };
  t.repeated_sets = { { 6 },
                      { 19, 24 },
                      { 26, 31, 44 },
                      { 52, 57, 70, 77 },
                      { 63, 68, 81, 88, 114 },
                      { 80, 85, 98, 105, 131, 142 },
                      { 85, 103 },
                      { 98, 103 },
                      { 105, 110, 123 },
                      { 131, 136, 149, 156 },
                      { 142, 147, 160, 167, 193 },
                      { 159, 164, 177, 184, 210, 221 },
                      { 164, 182 },
                      { 177, 182 },
                      { 184, 189, 202 },
                      { 210, 215, 228, 235 },
                      { 221, 226, 239, 246, 272 },
                      { 238, 243, 256, 263, 289, 300 },
                      { 243, 261 },
                      { 256, 261 },
                      { 263, 268, 281 } };
  t.samples = 22;
  t.total = 72;
  t.cost = 59.97;
  return t;
}

/* constant sampling on the same taps */
struct ConstantReference
{
  double optimum = 69.97;
  std::vector<label_t> optimal_sigmas{ 1, 13, 37 };
  /* printed counts for these steps; the r-list sums to 28, not 24 */
  std::size_t samples = 16;
  std::size_t repeats = 24;
  std::vector<std::size_t> r{ 0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 3, 3, 4, 4, 4 };
};

/* two sampling steps on a 20-cell register */
struct WorkedExample
{
  TapSet taps{ { 3, 5, 10, 14, 16 }, 20 };
  std::vector<label_t> steps{ 5, 2 };
  std::vector<std::size_t> q{ 1, 2 };
  std::vector<label_t> first_repeat{ 10 };
  std::vector<label_t> second_repeat{ 10, 21 };
};

/* NFSR window attack: L = 128, n = 8, m = 1 */
struct WindowExample
{
  TapSet taps{ { 1, 7, 21, 26, 52, 67, 89, 105 }, 128 };
  std::size_t m = 1;
  std::size_t p = 23;
  std::vector<std::size_t> q{ 0, 0, 0, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 4, 5, 5, 5, 5, 5, 5 };
  std::size_t recovered = 122;
  std::size_t exponent = 106;
  /* memory stays below 2^15 bits */
  double memory_bound_log2 = 15.0;
  std::size_t data_bits = 150;

  /* 1 + b_t + b_{t+26} + ... written in cells, b_{t+i} is cell i + 1 */
  static NfsrSpec nfsr()
  {
    return { 128,
             true,
             { { 1 }, { 27 }, { 57 }, { 92 }, { 97 }, { 4, 68 }, { 12, 14 }, { 18, 19 }, { 28, 60 }, { 41, 49 },
               { 62, 66 }, { 69, 85 } } };
  }
};

/* hybrid window attack: two 128-cell registers, n = 17, m = 1 */
struct HybridExample
{
  /* NFSR taps */
  TapSet nfsr_taps{ { 2, 12, 15, 36, 45, 64, 73, 89, 95 }, 128 };
  /* LFSR taps */
  TapSet lfsr_taps{ { 8, 13, 20, 42, 60, 79, 93, 95 }, 128 };
  std::size_t m = 1;
  std::size_t p = 33;
  std::vector<std::size_t> q{ 0, 1, 2, 2, 3, 4, 5, 5, 7, 8, 8, 8, 8, 9, 9, 10,
                              10, 11, 13, 13, 14, 15, 15, 15, 15, 15, 15, 15, 15, 15, 15 };
  std::size_t first_sample_bits = 17;
  std::size_t repeated_sum = 227;
  std::size_t recovered = 244;
  std::size_t first_exponent = 16;
  std::size_t window_exponent = 196;
  std::size_t guess_exponent = 12;
  std::size_t exponent = 224;
  std::size_t data_bits = 261;
  double memory_log2 = 25.0;
};

/* restricted annihilator arithmetic for L = 87 */
struct AnnihilatorExample
{
  std::vector<double> sizes{ 5.0, 2.5 };
  std::vector<std::size_t> counts{ 1, 42 };
  std::size_t length = 87;
  double omega = 2.807;
  double cost = 76.32;
};

/* Grain-128 registers used as filter generator drivers; m is not published */
inline std::vector<ModeRow> grain_lfsr_table()
{
  return { { 128, 8, 0, {}, { 8, 13, 20, 42, 60, 79, 93, 95 }, {}, 108, 125, 118 },
           { 128, 8, 0, {}, { 1, 16, 27, 54, 71, 95, 108, 127 }, {}, 129, 132, 123 } };
}

inline std::vector<ModeRow> grain_nfsr_table()
{
  return { { 128, 9, 0, {}, { 2, 12, 15, 36, 45, 64, 73, 89, 95 }, {}, 114, 125, 122 },
           { 128, 9, 0, {}, { 3, 10, 29, 42, 59, 67, 88, 103, 126 }, {}, 130, 139, 125 } };
}

} // namespace gfsga::reference
