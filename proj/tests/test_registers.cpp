#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gfsga;

TEST( registers, zero_state_is_a_fixed_point )
{
  auto const spec = primitive_lfsr( 20 );
  RegisterState const zero( 20 );
  EXPECT_EQ( lfsr_step( zero, spec ), zero );
}

TEST( registers, hand_traced_lfsr_step )
{
  RegisterState s( 4 );
  s.set( 0 );
  auto const next = lfsr_step( s, LfsrSpec{ 4, { 1, 4 } } );
  EXPECT_EQ( next.to_string(), "0001" );
}

TEST( registers, bit_born_at_step_tau_walks_down_the_register )
{
  std::mt19937_64 rng( 1 );
  auto const spec = primitive_lfsr( 16 );
  auto s = oracle::random_state( 16, rng );
  std::vector<bool> born;
  std::vector<RegisterState> history{ s };
  for ( int t = 0; t < 10; ++t )
  {
    s = lfsr_step( s, spec );
    born.push_back( s.get( 15 ) );
    history.push_back( s );
  }
  for ( std::size_t tau = 1; tau <= 10; ++tau )
  {
    for ( std::size_t t = tau; t <= 10 && t - tau < 16; ++t )
    {
      EXPECT_EQ( history[t].get( 15 - ( t - tau ) ), born[tau - 1] );
    }
  }
}

TEST( registers, constant_anf_feeds_ones )
{
  NfsrSpec const spec{ 8, true, {} };
  RegisterState s( 8 );
  for ( int t = 0; t < 8; ++t )
  {
    s = nfsr_step( s, spec );
    EXPECT_TRUE( s.get( 7 ) );
  }
}

TEST( registers, window_nfsr_update_matches_independent_anf )
{
  std::mt19937_64 rng( 128 );
  auto const spec = reference::WindowExample::nfsr();
  auto const s = oracle::random_state( 128, rng );
  auto const next = nfsr_step( s, spec );
  auto const expect = oracle::step( oracle::cells_of( s ), spec );
  EXPECT_EQ( oracle::cells_of( next ), expect );
}

TEST( registers, anf_normalization_cancels_pairs )
{
  NfsrSpec const spec{ 8, false, { { 3, 2 }, { 2, 3 }, { 4, 4 }, { 5 } } };
  auto const norm = spec.normalized();
  EXPECT_EQ( norm.monomials, ( std::vector<std::vector<std::size_t>>{ { 4 }, { 5 } } ) );
}

TEST( registers, coupled_hybrid_xors_lfsr_cell_into_nfsr_update )
{
  std::mt19937_64 rng( 2 );
  HybridSpec coupled{ primitive_lfsr( 16 ), oracle::random_nfsr( 16, rng ), true };
  auto uncoupled = coupled;
  uncoupled.coupling = false;
  for ( int trial = 0; trial < 50; ++trial )
  {
    auto const s = oracle::random_state( 32, rng );
    auto const a = hybrid_step( s, coupled ), b = hybrid_step( s, uncoupled );
    EXPECT_EQ( a.get( 31 ) != b.get( 31 ), s.get( 0 ) );
    EXPECT_EQ( oracle::cells_of( a ), oracle::step( oracle::cells_of( s ), coupled ) );
  }
}

TEST( registers, tap_expressions_at_time_zero_are_unit_vectors )
{
  auto const spec = primitive_lfsr( 20 );
  TapSet const taps( { 3, 5, 10, 14, 16 }, 20 );
  auto const e = linear_tap_expressions( spec, taps, 0 );
  for ( std::size_t i = 0; i < taps.size(); ++i )
  {
    EXPECT_EQ( e[i], Gf2Vector::unit( 20, std::size_t( taps[i] ) - 1 ) );
  }
}

TEST( registers, tap_expressions_after_one_step_select_next_cell )
{
  auto const spec = primitive_lfsr( 20 );
  TapSet const taps( { 3, 5, 10, 14, 16 }, 20 );
  auto const e = linear_tap_expressions( spec, taps, 1 );
  for ( std::size_t i = 0; i < taps.size(); ++i )
  {
    EXPECT_EQ( e[i], Gf2Vector::unit( 20, std::size_t( taps[i] ) ) );
  }
}

TEST( registers, tap_expressions_match_simulation )
{
  std::mt19937_64 rng( 20 );
  for ( int trial = 0; trial < 20; ++trial )
  {
    auto const spec = primitive_lfsr( 20 );
    TapSet const taps( oracle::random_taps( 20, 5, rng ), 20 );
    auto const s = oracle::random_state( 20, rng );
    auto const e = linear_tap_expressions( spec, taps, 7 );
    auto c = oracle::cells_of( s );
    for ( int t = 0; t < 7; ++t )
    {
      c = oracle::step( c, spec );
    }
    for ( std::size_t i = 0; i < taps.size(); ++i )
    {
      EXPECT_EQ( e[i].dot( s ), bool( c[std::size_t( taps[i] ) - 1] ) );
    }
  }
}

TEST( registers, label_expressions_follow_the_recurrence )
{
  std::mt19937_64 rng( 21 );
  auto const spec = primitive_lfsr( 20 );
  auto const s = oracle::random_state( 20, rng );
  LabelExpressions labels( spec );
  auto c = oracle::cells_of( s );
  std::vector<bool> stream( c.begin(), c.end() );
  for ( int t = 0; t < 60; ++t )
  {
    c = oracle::step( c, spec );
    stream.push_back( c.back() );
  }
  for ( label_t x = 1; x <= 80; ++x )
  {
    EXPECT_EQ( labels( x ).dot( s ), bool( stream[std::size_t( x ) - 1] ) );
  }
}

TEST( registers, constant_zero_filter_gives_zero_keystream )
{
  std::mt19937_64 rng( 4 );
  GeneratorSpec const gen{ primitive_lfsr( 20 ), { TapSet( { 3, 5, 10, 14, 16 }, 20 ) }, FilterSpec::constant( 5, 2 ) };
  for ( auto z : keystream( gen, oracle::random_state( 20, rng ), 40 ) )
  {
    EXPECT_EQ( z, 0u );
  }
}

TEST( registers, keystream_equals_direct_recomputation )
{
  std::mt19937_64 rng( 6 );
  GeneratorSpec const gen{ primitive_lfsr( 20 ), { TapSet( { 3, 5, 10, 14, 16 }, 20 ) },
                           FilterSpec::random_uniform( 5, 2, rng ) };
  auto const s = oracle::random_state( 20, rng );
  EXPECT_EQ( keystream( gen, s, 30 ), oracle::keystream( gen, s, 30 ) );
}

TEST( registers, hybrid_keystream_matches_per_register_stepping )
{
  std::mt19937_64 rng( 7 );
  reference::HybridExample const ex;
  NfsrSpec nfsr{ 128, false, { { 1 }, { 27 }, { 57 }, { 92 }, { 4, 68 }, { 12, 14 } } };
  HybridSpec const h{ LfsrSpec{ 128, { 1, 8, 39, 71, 82, 97 } }, nfsr, true };
  GeneratorSpec const gen{ h, { ex.lfsr_taps, ex.nfsr_taps }, FilterSpec::random_uniform( 17, 1, rng ) };
  auto const s = oracle::random_state( 256, rng );
  EXPECT_EQ( keystream( gen, s, 5 ), oracle::keystream( gen, s, 5 ) );
}

TEST( registers, uniform_filter_classes_have_equal_size )
{
  std::mt19937_64 rng( 8 );
  auto const f = FilterSpec::random_uniform( 7, 2, rng );
  EXPECT_TRUE( f.uniform() );
  for ( auto const& cls : preimage_table( f ) )
  {
    EXPECT_EQ( cls.size(), 32u );
  }
}

TEST( registers, constant_filter_has_one_class )
{
  auto const classes = preimage_table( FilterSpec::constant( 6, 2, 1 ) );
  EXPECT_EQ( classes[1].size(), 64u );
  EXPECT_EQ( classes[0].size() + classes[2].size() + classes[3].size(), 0u );
}

TEST( registers, random_filter_classes_partition_the_inputs )
{
  std::mt19937_64 rng( 10 );
  for ( int trial = 0; trial < 20; ++trial )
  {
    auto const f = FilterSpec::random( 8, 3, rng );
    std::size_t sum = 0;
    for ( auto const& cls : preimage_table( f ) )
    {
      EXPECT_EQ( cls.members, oracle::preimages( f, cls.output_value, {} ) );
      sum += cls.size();
    }
    EXPECT_EQ( sum, 256u );
  }
}

TEST( registers, filter_hex_round_trip )
{
  std::mt19937_64 rng( 12 );
  auto const f = FilterSpec::random_uniform( 6, 3, rng );
  EXPECT_EQ( FilterSpec::from_hex( 6, 3, f.to_hex() ).table(), f.table() );
}

TEST( registers, generator_rejects_tap_count_mismatch )
{
  GeneratorSpec const gen{ primitive_lfsr( 20 ), { TapSet( { 3, 5, 10 }, 20 ) }, FilterSpec::constant( 4, 1 ) };
  EXPECT_THROW( gen.validate(), std::invalid_argument );
}
