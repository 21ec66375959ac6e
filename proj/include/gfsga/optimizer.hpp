#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "complexity.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "sampling.hpp"
#include "taps.hpp"

/*!
  \file optimizer.hpp
  \brief Tap placement search: candidate difference sets, exhaustive ordering, staged growth
*/

namespace gfsga
{

struct CandidateDifferenceSet
{
  std::vector<label_t> differences;
  /* some ordering has every pair of neighbours coprime */
  bool coprime_arrangement = false;

  label_t sum() const { return std::accumulate( differences.begin(), differences.end(), label_t{ 0 } ); }
};

struct Scorecard
{
  TapSet taps;
  std::size_t m = 0;
  std::size_t lambda = 0;
  bool fpds = false;
  label_t optimal_sigma = 0;
  std::vector<label_t> optimal_sigmas;
  ComplexityEstimate constant;
  std::optional<ComplexityEstimate> greedy;
  std::optional<ComplexityEstimate> cyclic;
};

inline Scorecard scorecard( TapSet const& taps, std::size_t m, double solver_exponent = default_solver_exponent )
{
  auto costs = mode_costs( taps, m, solver_exponent );
  Scorecard card;
  card.taps = taps;
  card.m = m;
  card.lambda = lambda_order( taps );
  card.fpds = is_fpds( taps );
  card.optimal_sigma = costs.constant.sigma;
  card.optimal_sigmas = costs.constant.optima;
  card.constant = costs.constant.estimate;
  card.greedy = costs.greedy;
  card.cyclic = costs.cyclic;
  return card;
}

inline bool consecutive_coprime( std::vector<label_t> const& d )
{
  for ( std::size_t i = 1; i < d.size(); ++i )
  {
    if ( std::gcd( d[i - 1], d[i] ) != 1 )
      return false;
  }
  return true;
}

namespace detail
{

inline std::vector<label_t> primes_up_to( label_t bound )
{
  std::vector<label_t> primes;
  for ( label_t p = 2; p <= bound; ++p )
  {
    bool prime = true;
    for ( auto q : primes )
    {
      if ( q * q > p )
        break;
      if ( p % q == 0 )
      {
        prime = false;
        break;
      }
    }
    if ( prime )
      primes.push_back( p );
  }
  return primes;
}

/* depth-first search for an ordering whose neighbours are coprime */
inline bool coprime_arrangement_exists( std::vector<label_t> d )
{
  if ( d.size() <= 1 )
    return true;
  std::sort( d.begin(), d.end() );
  std::vector<bool> used( d.size(), false );
  std::size_t budget = 200000;
  auto dfs = [&]( auto&& self, std::size_t depth, label_t prev ) -> bool {
    if ( depth == d.size() )
      return true;
    if ( budget-- == 0 )
      return false;
    for ( std::size_t i = 0; i < d.size(); ++i )
    {
      if ( used[i] || ( i > 0 && d[i] == d[i - 1] && !used[i - 1] ) )
        continue;
      if ( depth > 0 && std::gcd( prev, d[i] ) != 1 )
        continue;
      used[i] = true;
      if ( self( self, depth + 1, d[i] ) )
        return true;
      used[i] = false;
    }
    return false;
  };
  return dfs( dfs, 0, 0 );
}

} // namespace detail

/*! \brief Step A: candidate multisets of n - 1 differences with sum in [0.9(L-1), L-1].

  The first part enumerates (n-2)-subsets of small primes and closes each
  with the filler L - 1 - sum; the rest are seeded random compositions whose
  neighbours are kept coprime when a few redraws allow it. Output is
  deterministic for a fixed seed and free of duplicate multisets.
*/
inline std::vector<CandidateDifferenceSet> step_a_candidates( label_t L, std::size_t n, std::size_t budget,
                                                              std::uint64_t seed )
{
  if ( n < 2 || budget < 1 )
  {
    throw std::invalid_argument( "step_a_candidates: require n >= 2 and budget >= 1" );
  }
  if ( label_t( n - 1 ) > L - 1 )
  {
    throw std::invalid_argument( "step_a_candidates: " + std::to_string( n - 1 ) +
                                 " differences cannot fit a register of length " + std::to_string( L ) );
  }
  std::size_t const k = n - 1;
  label_t const max_sum = L - 1;
  auto const min_sum = label_t( std::ceil( 0.9 * double( max_sum ) ) );

  std::vector<CandidateDifferenceSet> out;
  std::set<std::vector<label_t>> emitted;
  auto emit = [&]( std::vector<label_t> d ) {
    auto key = d;
    std::sort( key.begin(), key.end() );
    if ( out.size() >= budget || !emitted.insert( key ).second )
      return;
    bool const coprime = detail::coprime_arrangement_exists( d );
    out.push_back( { std::move( d ), coprime } );
  };

  if ( k == 1 )
  {
    emit( { max_sum } );
    return out;
  }

  /* small-prime enumeration */
  auto const primes = detail::primes_up_to( std::max<label_t>( max_sum, 2 ) );
  std::size_t const pool = std::min( primes.size(), k - 1 + 4 );
  if ( pool >= k - 1 )
  {
    std::vector<bool> pick( pool, false );
    std::fill( pick.begin(), pick.begin() + ( k - 1 ), true );
    std::size_t const prime_quota = std::max<std::size_t>( 1, budget / 2 );
    do
    {
      std::vector<label_t> d;
      label_t sum = 0;
      for ( std::size_t i = 0; i < pool; ++i )
      {
        if ( pick[i] )
        {
          d.push_back( primes[i] );
          sum += primes[i];
        }
      }
      label_t const filler = max_sum - sum;
      if ( filler >= 1 )
      {
        d.push_back( filler );
        emit( std::move( d ) );
      }
    } while ( out.size() < prime_quota && std::prev_permutation( pick.begin(), pick.end() ) );
  }

  /* seeded random compositions */
  std::mt19937_64 rng( seed );
  std::size_t attempts = 0;
  while ( out.size() < budget && attempts < 64 * budget )
  {
    ++attempts;
    std::uniform_int_distribution<label_t> total_dist( std::max<label_t>( min_sum, label_t( k ) ), max_sum );
    label_t const total = total_dist( rng );
    std::vector<label_t> d;
    for ( int redraw = 0; redraw < 16; ++redraw )
    {
      /* k - 1 distinct cut points in 1..total-1 */
      std::vector<label_t> cuts;
      std::uniform_int_distribution<label_t> cut_dist( 1, total - 1 );
      std::set<label_t> chosen;
      while ( chosen.size() < k - 1 )
      {
        chosen.insert( cut_dist( rng ) );
      }
      d.clear();
      label_t prev = 0;
      for ( auto c : chosen )
      {
        d.push_back( c - prev );
        prev = c;
      }
      d.push_back( total - prev );
      if ( consecutive_coprime( d ) )
        break;
    }
    emit( d );
  }
  return out;
}

namespace detail
{

struct ConstantQuality
{
  double cost = 0.0;
  label_t sigma = 0;
};

inline std::optional<ConstantQuality> best_constant( std::vector<label_t> const& pos, label_t L, std::size_t m,
                                                     double solver_exponent, std::vector<std::size_t>& scratch )
{
  double const solver = solver_exponent * std::log2( double( L ) );
  std::optional<ConstantQuality> best;
  for ( label_t sigma = 1; sigma <= L; ++sigma )
  {
    auto const cost = constant_cost_fast( pos, L, sigma, m, solver, scratch );
    if ( cost && ( !best || cost->log2_total < best->cost - 1e-9 ) )
    {
      best = ConstantQuality{ cost->log2_total, sigma };
    }
  }
  return best;
}

/* larger cost first, then larger optimal sigma, then lexicographically smaller ordering */
inline bool better_ordering( ConstantQuality const& a, std::vector<label_t> const& da, ConstantQuality const& b,
                             std::vector<label_t> const& db )
{
  if ( std::abs( a.cost - b.cost ) > 1e-9 )
    return a.cost > b.cost;
  if ( a.sigma != b.sigma )
    return a.sigma > b.sigma;
  return da < db;
}

inline std::vector<label_t> positions_from_differences( std::vector<label_t> const& d )
{
  std::vector<label_t> pos{ 1 };
  for ( auto x : d )
    pos.push_back( pos.back() + x );
  return pos;
}

struct OrderingResult
{
  std::vector<label_t> ordering;
  ConstantQuality quality;
  std::size_t evaluated = 0;
  bool found = false;
};

/* best distinct permutation of `tail` appended after `prefix` and followed by `suffix` */
inline OrderingResult best_permutation( std::vector<label_t> const& prefix, std::vector<label_t> tail,
                                        std::vector<label_t> const& suffix, label_t L, std::size_t m,
                                        double solver_exponent )
{
  OrderingResult result;
  std::sort( tail.begin(), tail.end() );
  std::vector<std::size_t> scratch;
  std::vector<label_t> d;
  do
  {
    d = prefix;
    d.insert( d.end(), tail.begin(), tail.end() );
    d.insert( d.end(), suffix.begin(), suffix.end() );
    ++result.evaluated;
    auto const q = best_constant( positions_from_differences( d ), L, m, solver_exponent, scratch );
    if ( q && ( !result.found || better_ordering( *q, d, result.quality, result.ordering ) ) )
    {
      result.ordering = d;
      result.quality = *q;
      result.found = true;
    }
  } while ( std::next_permutation( tail.begin(), tail.end() ) );
  return result;
}

/* exhaustive search over orderings of `block` placed before the fixed `suffix`, split by first element */
inline OrderingResult best_ordering_parallel( std::vector<label_t> block, std::vector<label_t> const& suffix, label_t L,
                                              std::size_t m, double solver_exponent, std::size_t workers )
{
  std::sort( block.begin(), block.end() );
  std::vector<label_t> heads = block;
  heads.erase( std::unique( heads.begin(), heads.end() ), heads.end() );
  auto const partial = parallel_map( heads.size(), workers, [&]( std::size_t i ) {
    auto rest = block;
    rest.erase( std::find( rest.begin(), rest.end(), heads[i] ) );
    return best_permutation( { heads[i] }, rest, suffix, L, m, solver_exponent );
  } );
  OrderingResult best;
  for ( auto const& r : partial )
  {
    best.evaluated += r.evaluated;
    if ( r.found && ( !best.found || better_ordering( r.quality, r.ordering, best.quality, best.ordering ) ) )
    {
      best.ordering = r.ordering;
      best.quality = r.quality;
      best.found = true;
    }
  }
  return best;
}

} // namespace detail

struct OrderingChoice
{
  std::vector<label_t> ordering;
  Scorecard card;
  std::size_t permutations_evaluated = 0;
};

/*! \brief Step B: exhaustive search over the distinct orderings of D.

  The winner maximizes the constant-mode cost at its optimal sigma; ties go
  to the larger optimal sigma and then to the lexicographically smallest
  ordering.
*/
inline OrderingChoice step_b_best_ordering( std::vector<label_t> const& d, std::size_t n, std::size_t m, label_t L,
                                            std::size_t workers = 1,
                                            double solver_exponent = default_solver_exponent )
{
  if ( d.size() > 10 )
  {
    throw feasibility_error( "step_b_best_ordering: " + std::to_string( d.size() ) +
                             " differences exceed the exhaustive limit of 10; use staged_search" );
  }
  if ( d.empty() || d.size() + 1 != n )
  {
    throw std::invalid_argument( "step_b_best_ordering: need n - 1 differences" );
  }
  if ( std::accumulate( d.begin(), d.end(), label_t{ 0 } ) > L - 1 )
  {
    throw std::invalid_argument( "step_b_best_ordering: differences do not fit the register" );
  }
  if ( std::any_of( d.begin(), d.end(), []( auto x ) { return x < 1; } ) )
  {
    throw std::invalid_argument( "step_b_best_ordering: differences must be positive" );
  }
  auto const best = detail::best_ordering_parallel( d, {}, L, m, solver_exponent, workers );
  if ( !best.found )
  {
    throw no_overdefined_system( "step_b_best_ordering: no ordering yields an overdefined system" );
  }
  auto const taps = TapSet::from_differences( best.ordering, L );
  return { best.ordering, scorecard( taps, m, solver_exponent ), best.evaluated };
}

struct StagedParams
{
  /* largest block handled by the exhaustive step */
  std::size_t chunk = 6;
  /* Step A candidates drawn per block */
  std::size_t budget = 12;
  /* fresh candidate batches tried before giving up on a stage */
  std::size_t retries = 3;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  double solver_exponent = default_solver_exponent;
};

struct StageTrace
{
  std::size_t stage = 0;
  std::size_t attempt = 0;
  std::size_t candidates_tried = 0;
  std::size_t permutations_evaluated = 0;
  bool accepted = false;
  std::vector<label_t> differences;
  label_t stage_length = 0;
  std::size_t stage_m = 0;
  double cost = 0.0;
  label_t sigma = 0;
  std::string note;
};

struct StagedResult
{
  std::vector<label_t> differences;
  Scorecard card;
  std::vector<StageTrace> trace;
};

namespace detail
{

inline std::size_t proportional_m( std::size_t count, std::size_t m, std::size_t n )
{
  auto const mx = count * m / ( n - 1 );
  return std::clamp<std::size_t>( mx, 1, count );
}

} // namespace detail

/*! \brief Staged search for large n.

  A first block X is drawn by Step A and ordered by Step B on the
  sub-register L_X = 1 + sum X with m_X = floor(#X m / (n-1)). Each further
  block Y is drawn by Step A, and every ordering Y_p is tried in front of the
  current X; the best join Y_p X is kept when its constant-mode cost exceeds
  the cost of X. The final join is evaluated on the full (L, m).
*/
inline StagedResult staged_search( label_t L, std::size_t n, std::size_t m, StagedParams const& params = {} )
{
  if ( n < 3 )
  {
    throw std::invalid_argument( "staged_search: require n >= 3" );
  }
  if ( m < 1 || m >= n )
  {
    throw std::invalid_argument( "staged_search: require 1 <= m < n" );
  }
  if ( params.chunk < 2 || params.chunk > 10 )
  {
    throw std::invalid_argument( "staged_search: chunk must lie in 2..10" );
  }
  if ( label_t( n - 1 ) > L - 1 )
  {
    throw std::invalid_argument( "staged_search: n - 1 differences cannot fit the register" );
  }
  std::size_t const total = n - 1;
  /* block sizes, the first one becomes X */
  std::vector<std::size_t> blocks;
  for ( std::size_t left = total; left > 0; )
  {
    auto const s = std::min( params.chunk, left );
    blocks.push_back( s );
    left -= s;
  }

  StagedResult result;
  std::uint64_t seed = params.seed;
  label_t remaining = L - 1;
  std::size_t placed = 0;
  std::vector<label_t> x;
  double x_cost = 0.0;

  for ( std::size_t stage = 0; stage < blocks.size(); ++stage )
  {
    auto const s = blocks[stage];
    bool const last = stage + 1 == blocks.size();
    /* share of the remaining register for this block */
    label_t const target = last ? remaining : label_t( double( remaining ) * double( s ) / double( total - placed ) );
    if ( target < label_t( s ) )
    {
      throw search_exhausted( "staged_search: register too short for block " + std::to_string( stage ), x );
    }
    std::size_t const joined = placed + s;
    std::size_t const stage_m = last ? m : detail::proportional_m( joined, m, n );

    bool accepted = false;
    for ( std::size_t attempt = 0; attempt < params.retries && !accepted; ++attempt )
    {
      auto const candidates = step_a_candidates( target + 1, s + 1, params.budget, seed++ );
      StageTrace trace;
      trace.stage = stage;
      trace.attempt = attempt;
      trace.stage_m = stage_m;
      std::optional<detail::OrderingResult> best;
      label_t best_length = 0;
      for ( auto const& cand : candidates )
      {
        ++trace.candidates_tried;
        label_t const length = last ? L : 1 + cand.sum() + std::accumulate( x.begin(), x.end(), label_t{ 0 } );
        if ( stage_m >= joined + 1 )
          continue;
        auto r = detail::best_ordering_parallel( cand.differences, x, length, stage_m, params.solver_exponent,
                                                 params.workers );
        trace.permutations_evaluated += r.evaluated;
        if ( r.found && ( !best || detail::better_ordering( r.quality, r.ordering, best->quality, best->ordering ) ) )
        {
          best = std::move( r );
          best_length = length;
        }
      }
      if ( best )
      {
        trace.differences = best->ordering;
        trace.cost = best->quality.cost;
        trace.sigma = best->quality.sigma;
        trace.stage_length = best_length;
        accepted = stage == 0 || best->quality.cost > x_cost;
        trace.note = accepted ? "accepted" : "rejected: join does not raise the constant-mode cost";
        if ( accepted )
        {
          x = best->ordering;
          x_cost = best->quality.cost;
        }
      }
      else
      {
        trace.note = "rejected: no overdefined ordering";
      }
      trace.accepted = accepted;
      result.trace.push_back( std::move( trace ) );
    }
    if ( !accepted )
    {
      throw search_exhausted( "staged_search: no acceptable block at stage " + std::to_string( stage ), x );
    }
    placed = joined;
    remaining = L - 1 - std::accumulate( x.begin(), x.end(), label_t{ 0 } );
  }

  result.differences = x;
  result.card = scorecard( TapSet::from_differences( x, L ), m, params.solver_exponent );
  return result;
}

} // namespace gfsga
