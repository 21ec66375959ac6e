#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gfsga;

namespace
{

std::vector<label_t> to_vector( std::set<label_t> const& s )
{
  return { s.begin(), s.end() };
}

} // namespace

TEST( sampling, consecutive_differences )
{
  EXPECT_EQ( consecutive_differences( reference::example1_taps() ), ( std::vector<label_t>{ 5, 13, 7, 26, 11, 17 } ) );
  EXPECT_EQ( consecutive_differences( TapSet( { 3, 5, 10, 14, 16 }, 20 ) ), ( std::vector<label_t>{ 2, 5, 4, 2 } ) );
  EXPECT_TRUE( consecutive_differences( TapSet( { 4 }, 20 ) ).empty() );
}

TEST( sampling, difference_scheme_rows )
{
  auto const s = difference_scheme( TapSet( { 3, 5, 10, 14, 16 }, 20 ) );
  EXPECT_EQ( s.table, ( std::vector<std::vector<label_t>>{ { 2, 5, 4, 2 }, { 7, 9, 6 }, { 11, 11 }, { 13 } } ) );
  EXPECT_EQ( difference_scheme( TapSet( { 2, 9 }, 20 ) ).table, ( std::vector<std::vector<label_t>>{ { 7 } } ) );
}

TEST( sampling, difference_scheme_entries_are_partial_sums )
{
  std::mt19937_64 rng( 1 );
  for ( int trial = 0; trial < 100; ++trial )
  {
    auto const pos = oracle::random_taps( 60, 2 + rng() % 8, rng );
    auto const s = difference_scheme( TapSet( pos, 60 ) );
    for ( std::size_t k = 0; k < s.table.size(); ++k )
    {
      for ( std::size_t j = 0; j < s.table[k].size(); ++j )
      {
        EXPECT_EQ( s.table[k][j], pos[j + k + 1] - pos[j] );
      }
    }
  }
}

TEST( sampling, worked_example_two_steps )
{
  reference::WorkedExample const ex;
  auto const p = repetition_profile( ex.taps, SamplingSchedule::custom( ex.steps ), StopRule::whole_schedule() );
  EXPECT_EQ( p.q, ex.q );
  EXPECT_EQ( p.repeated_sets[0], ex.first_repeat );
  EXPECT_EQ( p.repeated_sets[1], ex.second_repeat );
  auto const d = oracle::direct_profile( ex.taps.positions(), ex.steps );
  EXPECT_EQ( p.q, d.q );
}

TEST( sampling, step_beyond_span_repeats_nothing )
{
  TapSet const taps( { 3, 5, 10, 14, 16 }, 20 );
  auto const p = repetition_profile( taps, SamplingSchedule::custom( { 14 } ), StopRule::whole_schedule() );
  EXPECT_EQ( p.q, ( std::vector<std::size_t>{ 0 } ) );
}

TEST( sampling, greedy_reproduces_published_rows )
{
  auto const ref = reference::greedy_table();
  auto const p = greedy_schedule( reference::example1_taps(), StopRule::samples( ref.samples ) );
  EXPECT_EQ( p.steps, ref.steps );
  EXPECT_EQ( p.q, ref.q );
  EXPECT_EQ( p.repeated_sets, ref.repeated_sets );
  EXPECT_EQ( p.total, ref.total );
}

TEST( sampling, greedy_rank_stop_is_the_minimal_overdefined_count )
{
  auto const taps = reference::example1_taps();
  auto const p = greedy_schedule( taps );
  auto const ref = reference::greedy_table();
  auto const d = oracle::direct_rank_profile( taps.positions(), 80,
                                              [&]( auto const& steps ) { return ref.steps[steps.size()]; } );
  ASSERT_TRUE( d );
  EXPECT_EQ( p.samples, d->samples );
  EXPECT_EQ( p.total, d->total );
  /* the published 22 samples and 67 repeats sit one sample past this point */
  EXPECT_EQ( p.samples, 21u );
  EXPECT_EQ( p.total, 63u );
}

TEST( sampling, constant_sigma_one_matches_printed_list_at_sixteen_samples )
{
  reference::ConstantReference const ref;
  auto const taps = reference::example1_taps();
  auto const p = constant_profile( taps, 1, StopRule::samples( 16 ) );
  EXPECT_EQ( p.q, ref.r );
  EXPECT_EQ( p.total, 28u );
  auto const rank = constant_profile( taps, 1 );
  EXPECT_EQ( rank.samples, 15u );
  EXPECT_EQ( rank.total, 24u );
}

TEST( sampling, constant_sigma_thirteen_steady_increment )
{
  auto const taps = reference::example1_taps();
  auto const p = constant_profile( taps, 13 );
  std::vector<label_t> steps( p.samples - 1, 13 );
  EXPECT_EQ( p.q, oracle::direct_profile( taps.positions(), steps ).q );
  ASSERT_GE( p.q.size(), 3u );
  EXPECT_EQ( p.q[0], 1u );
  for ( std::size_t j = 1; j < p.q.size(); ++j )
  {
    EXPECT_EQ( p.q[j], 2u );
  }
  EXPECT_EQ( p.samples, 16u );
  EXPECT_EQ( p.total, 29u );
}

TEST( sampling, constant_sigma_equal_to_length_has_no_overlap )
{
  auto const taps = reference::example1_taps();
  auto const p = constant_profile( taps, 80 );
  for ( auto q : p.q )
  {
    EXPECT_EQ( q, 0u );
  }
  EXPECT_EQ( p.samples, std::size_t( ( 80 + 1 + 7 - 1 ) / 7 ) );
}

TEST( sampling, constant_closed_form_examples )
{
  EXPECT_EQ( repeated_count_constant( { 2, 5, 4, 2 }, 7, 3 ), 2u );
  EXPECT_EQ( repeated_count_constant( { 2, 5, 4, 2 }, 14, 5 ), 0u );
  EXPECT_THROW( repeated_count_constant( { 2 }, 0, 3 ), std::invalid_argument );
}

TEST( sampling, variable_closed_form_counts_column_once )
{
  EXPECT_EQ( repeated_count_variable( { 2, 5, 4, 2 }, { 5, 2 } ), 3u );
  EXPECT_EQ( repeated_counts_variable( { 2, 5, 4, 2 }, { 5, 2 } ), ( std::vector<std::size_t>{ 1, 2 } ) );
  EXPECT_EQ( repeated_count_variable( { 2, 5, 4, 2 }, {} ), 0u );
}

TEST( sampling, greedy_prefix )
{
  auto const p = greedy_schedule( reference::example1_taps() );
  std::vector<label_t> const steps{ 5, 13, 7, 26, 11, 17, 5, 11, 17, 5, 2 };
  std::vector<std::size_t> const q{ 1, 2, 3, 4, 5, 6, 2, 2, 3, 2, 2 };
  EXPECT_TRUE( std::equal( steps.begin(), steps.end(), p.steps.begin() ) );
  EXPECT_TRUE( std::equal( q.begin(), q.end(), p.q.begin() ) );
}

TEST( sampling, greedy_single_tap_takes_unit_steps )
{
  auto const p = greedy_schedule( TapSet( { 5 }, 20 ) );
  for ( auto s : p.steps )
  {
    EXPECT_EQ( s, 1 );
  }
  for ( auto q : p.q )
  {
    EXPECT_EQ( q, 0u );
  }
}

TEST( sampling, greedy_steps_are_maximal )
{
  std::mt19937_64 rng( 2 );
  for ( int trial = 0; trial < 30; ++trial )
  {
    label_t const L = 20 + label_t( rng() % 40 );
    auto const pos = oracle::random_taps( L, 3 + rng() % 6, rng );
    auto const p = greedy_schedule( TapSet( pos, L ) );
    std::vector<label_t> prefix;
    for ( std::size_t j = 0; j < p.steps.size(); ++j )
    {
      std::size_t best = 0;
      label_t arg = 0;
      for ( label_t s = 1; s <= L; ++s )
      {
        auto trial_steps = prefix;
        trial_steps.push_back( s );
        auto const q = oracle::direct_profile( pos, trial_steps ).q.back();
        if ( arg == 0 || q > best )
        {
          best = q;
          arg = s;
        }
      }
      ASSERT_EQ( p.steps[j], arg );
      ASSERT_EQ( p.q[j], best );
      prefix.push_back( arg );
    }
  }
}

TEST( sampling, cyclic_reproduces_published_rows )
{
  auto const ref = reference::cyclic_table();
  auto const p = cyclic_schedule( reference::example1_taps() );
  EXPECT_EQ( p.steps, ref.steps );
  EXPECT_EQ( p.q, ref.q );
  EXPECT_EQ( p.repeated_sets, ref.repeated_sets );
  EXPECT_EQ( p.total, 72u );
  EXPECT_EQ( p.samples, 22u );
}

TEST( sampling, cyclic_with_two_taps_is_constant )
{
  TapSet const taps( { 4, 11 }, 30 );
  auto const a = cyclic_schedule( taps );
  auto const b = constant_profile( taps, 7 );
  EXPECT_EQ( a.q, b.q );
  EXPECT_EQ( a.samples, b.samples );
}

TEST( sampling, cyclic_lower_bound )
{
  std::mt19937_64 rng( 3 );
  for ( int trial = 0; trial < 200; ++trial )
  {
    label_t const L = 20 + label_t( rng() % 80 );
    auto const n = 2 + rng() % 8;
    auto const p = cyclic_schedule( TapSet( oracle::random_taps( L, n, rng ), L ), StopRule::samples( 4 * n ) );
    for ( std::size_t j = 0; j < p.q.size(); ++j )
    {
      auto const i = j % ( n - 1 ) + 1;
      EXPECT_GE( p.q[j], i );
    }
  }
}

TEST( sampling, lambda_examples )
{
  EXPECT_EQ( lambda_order( reference::WindowExample{}.taps ), 1u );
  EXPECT_EQ( lambda_order( TapSet::from_differences( { 5, 7, 3, 13, 6, 11, 5, 11, 7, 13, 21, 17 }, 120 ) ), 3u );
  EXPECT_EQ( lambda_order( TapSet( { 1, 2 }, 4 ) ), 1u );
}

TEST( sampling, fpds_examples )
{
  EXPECT_TRUE( is_fpds( TapSet( { 1, 3, 8, 14, 22, 23, 26 }, 80 ) ) );
  EXPECT_TRUE( is_fpds( TapSet( { 3, 6, 12, 24 }, 30 ) ) );
  EXPECT_FALSE( is_fpds( TapSet( { 1, 2, 3 }, 10 ) ) );
}

TEST( sampling, window_profile_matches_published_rows )
{
  reference::WindowExample const ex;
  auto const w = window_profile( ex.taps );
  EXPECT_EQ( w.p, ex.p );
  EXPECT_EQ( w.q, ex.q );
  EXPECT_EQ( w.recovered, ex.recovered );
}

TEST( sampling, hybrid_per_register_model_matches_published_rows )
{
  reference::HybridExample const ex;
  auto const w = hybrid_window_profile( { ex.lfsr_taps, ex.nfsr_taps }, HybridModel::per_register );
  EXPECT_EQ( w.p, ex.p );
  EXPECT_EQ( w.q, ex.q );
  EXPECT_EQ( w.recovered, ex.recovered );
}

TEST( sampling, hybrid_merged_model_deviates )
{
  reference::HybridExample const ex;
  auto const w = hybrid_window_profile( { ex.lfsr_taps, ex.nfsr_taps }, HybridModel::merged );
  EXPECT_NE( w.q, ex.q );
  std::size_t const total = std::accumulate( w.q.begin(), w.q.end(), std::size_t{ 0 } );
  EXPECT_EQ( w.recovered, 17u * 32u - total );
}

TEST( sampling, invalid_schedules_are_rejected )
{
  TapSet const taps( { 3, 5, 10, 14, 16 }, 20 );
  EXPECT_THROW( repetition_profile( taps, SamplingSchedule::custom( { 21 } ) ), std::invalid_argument );
  EXPECT_THROW( repetition_profile( taps, SamplingSchedule::custom( { 0 } ) ), std::invalid_argument );
  EXPECT_THROW( repetition_profile( taps, SamplingSchedule::custom( { 5 } ) ), no_overdefined_system );
  EXPECT_THROW( constant_profile( taps, 21 ), std::invalid_argument );
}
