#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "taps.hpp"

/*!
  \file sampling.hpp
  \brief Repeated-bit counting on the integer-label timeline

  Sample j is taken after the cumulative shift T_j = sigma_1 + ... + sigma_{j-1}
  (T_1 = 0) and reads the labels {l_i + T_j}. A label already read by an
  earlier sample is a repeated bit; q_j counts those at sample j + 1.
*/

namespace gfsga
{

enum class ScheduleMode
{
  constant,
  greedy,
  cyclic,
  custom
};

inline std::string to_string( ScheduleMode mode )
{
  switch ( mode )
  {
  case ScheduleMode::constant:
    return "constant";
  case ScheduleMode::greedy:
    return "greedy";
  case ScheduleMode::cyclic:
    return "cyclic";
  default:
    return "custom";
  }
}

inline ScheduleMode schedule_mode_from_string( std::string const& s )
{
  if ( s == "constant" )
    return ScheduleMode::constant;
  if ( s == "greedy" )
    return ScheduleMode::greedy;
  if ( s == "cyclic" )
    return ScheduleMode::cyclic;
  if ( s == "custom" )
    return ScheduleMode::custom;
  throw std::invalid_argument( "unknown sampling mode '" + s + "'" );
}

/*! \brief Sampling distances sigma_1, sigma_2, ...

  Constant and cyclic schedules are periodic: when a profile needs more
  steps than stored, the stored steps repeat. Greedy and custom schedules
  are finite.
*/
struct SamplingSchedule
{
  std::vector<label_t> steps;
  ScheduleMode mode = ScheduleMode::custom;

  static SamplingSchedule constant( label_t sigma ) { return { { sigma }, ScheduleMode::constant }; }
  static SamplingSchedule custom( std::vector<label_t> steps ) { return { std::move( steps ), ScheduleMode::custom }; }

  bool periodic() const { return mode == ScheduleMode::constant || mode == ScheduleMode::cyclic; }

  std::optional<label_t> step( std::size_t j ) const
  {
    if ( j < steps.size() )
      return steps[j];
    if ( periodic() && !steps.empty() )
      return steps[j % steps.size()];
    return std::nullopt;
  }

  void validate( label_t register_length ) const
  {
    for ( auto s : steps )
    {
      if ( s < 1 || s > register_length )
      {
        throw std::invalid_argument( "SamplingSchedule: step " + std::to_string( s ) + " outside 1.." +
                                     std::to_string( register_length ) );
      }
    }
    if ( mode == ScheduleMode::constant &&
         std::adjacent_find( steps.begin(), steps.end(), std::not_equal_to<>() ) != steps.end() )
    {
      throw std::invalid_argument( "SamplingSchedule: constant schedule with differing steps" );
    }
    if ( periodic() && steps.empty() )
    {
      throw std::invalid_argument( "SamplingSchedule: periodic schedule without steps" );
    }
  }
};

/*! \brief When to stop sampling.

  `rank` stops at the first c with n*c - R > L. `samples` stops at a fixed
  sample count c (counting the first sample). `schedule` consumes every
  stored step once.
*/
struct StopRule
{
  enum class kind
  {
    rank,
    samples,
    schedule
  };

  kind type = kind::rank;
  std::size_t count = 0;

  static StopRule rank() { return { kind::rank, 0 }; }
  static StopRule samples( std::size_t c ) { return { kind::samples, c }; }
  static StopRule whole_schedule() { return { kind::schedule, 0 }; }
};

struct RepetitionProfile
{
  std::vector<label_t> steps;
  /* q[j] is the number of repeated bits at sample j + 2 */
  std::vector<std::size_t> q;
  std::vector<std::vector<label_t>> repeated_sets;
  std::size_t total = 0;
  std::size_t samples = 1;
  std::size_t taps_per_sample = 0;
  label_t register_length = 0;
  std::optional<label_t> k;
  ScheduleMode mode = ScheduleMode::custom;

  /* number of distinct state labels covered, i.e. n*c - R */
  std::size_t equations() const { return taps_per_sample * samples - total; }
  bool overdefined() const { return equations() > std::size_t( register_length ); }
};

/*! \brief Set of labels seen so far on the timeline. */
class LabelTimeline
{
public:
  bool contains( label_t label ) const
  {
    return label >= 0 && std::size_t( label ) < seen_.size() && seen_[std::size_t( label )];
  }

  void insert( label_t label )
  {
    if ( std::size_t( label ) >= seen_.size() )
    {
      seen_.resize( std::max<std::size_t>( std::size_t( label ) + 1, 2 * seen_.size() ), 0 );
    }
    seen_[std::size_t( label )] = 1;
  }

private:
  std::vector<std::uint8_t> seen_;
};

inline std::vector<label_t> consecutive_differences( TapSet const& taps )
{
  std::vector<label_t> d;
  for ( std::size_t i = 1; i < taps.size(); ++i )
  {
    d.push_back( taps[i] - taps[i - 1] );
  }
  return d;
}

struct DifferenceScheme
{
  std::vector<label_t> consecutive;
  /* table[k-1][j-1] = l_{j+k} - l_j */
  std::vector<std::vector<label_t>> table;
};

inline DifferenceScheme difference_scheme( TapSet const& taps )
{
  DifferenceScheme scheme{ consecutive_differences( taps ), {} };
  auto const n = taps.size();
  for ( std::size_t k = 1; k < n; ++k )
  {
    std::vector<label_t> row;
    for ( std::size_t j = 0; j + k < n; ++j )
    {
      row.push_back( taps[j + k] - taps[j] );
    }
    scheme.table.push_back( std::move( row ) );
  }
  return scheme;
}

namespace detail
{

inline bool stop_reached( StopRule const& stop, std::size_t n, std::size_t c, std::size_t total, label_t L )
{
  switch ( stop.type )
  {
  case StopRule::kind::rank:
    return n * c > total + std::size_t( L );
  case StopRule::kind::samples:
    return c >= stop.count;
  default:
    return false;
  }
}

/* generic driver; next_step(j, seen, shift) returns the (j+1)-th distance or nullopt when exhausted */
template<class NextStep>
RepetitionProfile run_profile( TapSet const& taps, NextStep&& next_step, StopRule const& stop, ScheduleMode mode )
{
  auto const L = taps.register_length();
  auto const n = taps.size();
  if ( stop.type == StopRule::kind::samples && stop.count == 0 )
  {
    throw std::invalid_argument( "StopRule: sample count must be positive" );
  }
  std::size_t const cap = 4 * std::size_t( L );

  RepetitionProfile prof;
  prof.taps_per_sample = n;
  prof.register_length = L;
  prof.mode = mode;

  LabelTimeline seen;
  for ( auto l : taps.positions() )
  {
    seen.insert( l );
  }
  label_t shift = 0;
  while ( !stop_reached( stop, n, prof.samples, prof.total, L ) )
  {
    if ( stop.type == StopRule::kind::rank && prof.samples >= cap )
    {
      throw no_overdefined_system( "no overdefined system within " + std::to_string( cap ) + " samples" );
    }
    auto const step = next_step( prof.steps.size(), seen, shift );
    if ( !step )
    {
      if ( stop.type == StopRule::kind::schedule )
        break;
      if ( stop.type == StopRule::kind::rank )
        throw no_overdefined_system( "schedule exhausted after " + std::to_string( prof.samples ) +
                                     " samples without an overdefined system" );
      throw std::invalid_argument( "schedule shorter than the requested sample count" );
    }
    if ( *step < 1 || *step > L )
    {
      throw std::invalid_argument( "sampling step " + std::to_string( *step ) + " outside 1.." + std::to_string( L ) );
    }
    shift += *step;
    std::vector<label_t> repeated;
    for ( auto l : taps.positions() )
    {
      if ( seen.contains( l + shift ) )
      {
        repeated.push_back( l + shift );
      }
    }
    for ( auto l : taps.positions() )
    {
      seen.insert( l + shift );
    }
    prof.steps.push_back( *step );
    prof.q.push_back( repeated.size() );
    prof.total += repeated.size();
    prof.repeated_sets.push_back( std::move( repeated ) );
    ++prof.samples;
  }
  return prof;
}

} // namespace detail

/*! \brief Direct computation of I*_j = (union of earlier samples) cap (current sample). */
inline RepetitionProfile repetition_profile( TapSet const& taps, SamplingSchedule const& schedule,
                                             StopRule const& stop = StopRule::rank() )
{
  schedule.validate( taps.register_length() );
  auto prof = detail::run_profile(
      taps, [&]( std::size_t j, LabelTimeline const&, label_t ) { return schedule.step( j ); }, stop, schedule.mode );
  if ( schedule.mode == ScheduleMode::constant )
  {
    prof.k = taps.span() / schedule.steps.front();
  }
  return prof;
}

/*! \brief Constant-step profile from the closed recursion.

  A tap l is repeated from sample index i on as soon as some l + j*sigma
  (1 <= j <= i) is itself a tap, so r_i = #{ l : j_min(l) <= i }.
*/
inline RepetitionProfile constant_profile( TapSet const& taps, label_t sigma, StopRule const& stop = StopRule::rank() )
{
  auto const L = taps.register_length();
  if ( sigma < 1 || sigma > L )
  {
    throw std::invalid_argument( "constant_profile: sigma outside 1.." + std::to_string( L ) );
  }
  auto const n = taps.size();
  auto const& pos = taps.positions();
  /* first_repeat[b]: smallest j >= 1 with l_b + j*sigma a tap */
  std::vector<std::size_t> first_repeat( n, std::numeric_limits<std::size_t>::max() );
  for ( std::size_t b = 0; b < n; ++b )
  {
    for ( std::size_t a = b + 1; a < n; ++a )
    {
      auto const diff = pos[a] - pos[b];
      if ( diff % sigma == 0 )
      {
        first_repeat[b] = std::size_t( diff / sigma );
        break;
      }
    }
  }

  std::size_t const cap = 4 * std::size_t( L );
  RepetitionProfile prof;
  prof.taps_per_sample = n;
  prof.register_length = L;
  prof.mode = ScheduleMode::constant;
  prof.k = taps.span() / sigma;
  if ( stop.type == StopRule::kind::schedule )
  {
    throw std::invalid_argument( "constant_profile: a constant schedule never runs out; use rank or sample stop" );
  }
  if ( stop.type == StopRule::kind::samples && stop.count == 0 )
  {
    throw std::invalid_argument( "StopRule: sample count must be positive" );
  }
  while ( !detail::stop_reached( stop, n, prof.samples, prof.total, L ) )
  {
    if ( stop.type == StopRule::kind::rank && prof.samples >= cap )
    {
      throw no_overdefined_system( "no overdefined system within " + std::to_string( cap ) + " samples" );
    }
    std::size_t const i = prof.samples;
    label_t const shift = label_t( i ) * sigma;
    std::vector<label_t> repeated;
    for ( std::size_t b = 0; b < n; ++b )
    {
      if ( first_repeat[b] <= i )
      {
        repeated.push_back( pos[b] + shift );
      }
    }
    prof.steps.push_back( sigma );
    prof.q.push_back( repeated.size() );
    prof.total += repeated.size();
    prof.repeated_sets.push_back( std::move( repeated ) );
    ++prof.samples;
  }
  return prof;
}

namespace detail
{

inline std::vector<label_t> taps_from_differences( std::vector<label_t> const& d )
{
  std::vector<label_t> pos{ 1 };
  for ( auto x : d )
  {
    if ( x < 1 )
    {
      throw std::invalid_argument( "differences must be positive" );
    }
    pos.push_back( pos.back() + x );
  }
  return pos;
}

} // namespace detail

/*! \brief Total repeats of a constant schedule from the scheme of differences.

  Column i of the scheme holds the partial sums d_i + ... + d_j. If the
  smallest one divisible by sigma has quotient j_i <= c - 1, tap i repeats in
  the c - j_i samples from index j_i on.
*/
inline std::size_t repeated_count_constant( std::vector<label_t> const& d, label_t sigma, std::size_t c )
{
  if ( sigma < 1 || c < 1 )
  {
    throw std::invalid_argument( "repeated_count_constant: require sigma >= 1 and c >= 1" );
  }
  std::size_t total = 0;
  for ( std::size_t i = 0; i < d.size(); ++i )
  {
    label_t partial = 0;
    for ( std::size_t j = i; j < d.size(); ++j )
    {
      partial += d[j];
      if ( partial % sigma == 0 )
      {
        auto const quotient = std::size_t( partial / sigma );
        if ( quotient <= c - 1 )
        {
          total += c - quotient;
        }
        break;
      }
    }
  }
  return total;
}

/*! \brief Per-sample repeats of an arbitrary schedule from the scheme of differences.

  At sample j + 1 tap i is repeated iff some window sum sigma_u + ... + sigma_j
  equals a partial sum d_i + ... + d_r of its column; a column matching several
  window sums still contributes one bit.
*/
inline std::vector<std::size_t> repeated_counts_variable( std::vector<label_t> const& d,
                                                          std::vector<label_t> const& steps )
{
  std::vector<std::vector<label_t>> columns( d.size() );
  for ( std::size_t i = 0; i < d.size(); ++i )
  {
    label_t partial = 0;
    for ( std::size_t j = i; j < d.size(); ++j )
    {
      partial += d[j];
      columns[i].push_back( partial );
    }
  }
  std::vector<std::size_t> q;
  q.reserve( steps.size() );
  std::vector<label_t> windows;
  for ( std::size_t j = 0; j < steps.size(); ++j )
  {
    /* window sums ending at step j, in increasing order */
    windows.clear();
    label_t acc = 0;
    for ( std::size_t u = j + 1; u-- > 0; )
    {
      acc += steps[u];
      windows.push_back( acc );
    }
    std::size_t count = 0;
    for ( auto const& column : columns )
    {
      bool hit = false;
      for ( auto value : column )
      {
        if ( std::binary_search( windows.begin(), windows.end(), value ) )
        {
          hit = true;
          break;
        }
      }
      count += hit ? 1 : 0;
    }
    q.push_back( count );
  }
  return q;
}

inline std::size_t repeated_count_variable( std::vector<label_t> const& d, std::vector<label_t> const& steps )
{
  auto const q = repeated_counts_variable( d, steps );
  return std::accumulate( q.begin(), q.end(), std::size_t{ 0 } );
}

/*! \brief Greedy variable schedule: each step maximizes the repeats of the next sample.

  Candidates run over 1..L; ties go to the smallest step.
*/
inline RepetitionProfile greedy_schedule( TapSet const& taps, StopRule const& stop = StopRule::rank() )
{
  if ( stop.type == StopRule::kind::schedule )
  {
    throw std::invalid_argument( "greedy_schedule: needs a rank or sample-count stop" );
  }
  auto const L = taps.register_length();
  auto next = [&]( std::size_t, LabelTimeline const& seen, label_t shift ) -> std::optional<label_t> {
    label_t best_sigma = 1;
    std::size_t best = 0;
    bool first = true;
    for ( label_t sigma = 1; sigma <= L; ++sigma )
    {
      std::size_t hits = 0;
      for ( auto l : taps.positions() )
      {
        hits += seen.contains( l + shift + sigma ) ? 1 : 0;
      }
      if ( first || hits > best )
      {
        best = hits;
        best_sigma = sigma;
        first = false;
      }
    }
    return best_sigma;
  };
  return detail::run_profile( taps, next, stop, ScheduleMode::greedy );
}

/* the steps cycle through the consecutive tap differences */
inline RepetitionProfile cyclic_schedule( TapSet const& taps, StopRule const& stop = StopRule::rank() )
{
  if ( taps.size() < 2 )
  {
    throw std::invalid_argument( "cyclic_schedule: needs at least two taps" );
  }
  SamplingSchedule schedule{ consecutive_differences( taps ), ScheduleMode::cyclic };
  return repetition_profile( taps, schedule, stop );
}

inline std::size_t lambda_order( TapSet const& taps )
{
  if ( taps.size() < 2 )
  {
    return 0;
  }
  LabelTimeline members;
  for ( auto l : taps.positions() )
  {
    members.insert( l );
  }
  std::size_t lambda = 0;
  for ( label_t sigma = 1; sigma <= taps.span(); ++sigma )
  {
    std::size_t overlap = 0;
    for ( auto l : taps.positions() )
    {
      overlap += members.contains( l - sigma ) ? 1 : 0;
    }
    lambda = std::max( lambda, overlap );
  }
  return lambda;
}

inline bool is_fpds( TapSet const& taps )
{
  std::vector<label_t> all;
  for ( auto const& row : difference_scheme( taps ).table )
  {
    all.insert( all.end(), row.begin(), row.end() );
  }
  std::sort( all.begin(), all.end() );
  return std::adjacent_find( all.begin(), all.end() ) == all.end();
}

/*! \brief Window sampled at sigma = 1 across the gap p = L - l_n.

  The p - 1 samples at shifts 0..p-2 only read initial-state bits, so the
  window recovers R_p = n(p-1) - sum q bits without touching the feedback.
*/
struct WindowProfile
{
  std::size_t p = 0;
  std::vector<std::size_t> q;
  std::size_t recovered = 0;
  std::size_t taps_per_sample = 0;
  label_t register_length = 0;
};

inline WindowProfile window_profile( TapSet const& taps, std::optional<std::size_t> p = std::nullopt )
{
  auto const L = taps.register_length();
  std::size_t const gap = p ? *p : std::size_t( L - taps.last() );
  if ( gap < 2 )
  {
    throw std::invalid_argument( "window_profile: window needs p >= 2" );
  }
  if ( label_t( gap ) > L - taps.last() )
  {
    throw std::invalid_argument( "window_profile: p exceeds the distance from the last tap to the update cell" );
  }
  auto prof = repetition_profile( taps, SamplingSchedule::constant( 1 ), StopRule::samples( gap - 1 ) );
  return { gap, prof.q, prof.equations(), taps.size(), L };
}

/* tap sets of a hybrid pair; filter input order is LFSR taps first */
struct HybridTaps
{
  TapSet lfsr;
  TapSet nfsr;
};

enum class HybridModel
{
  per_register,
  merged
};

inline std::string to_string( HybridModel model )
{
  return model == HybridModel::per_register ? "per-register" : "merged";
}

inline HybridModel hybrid_model_from_string( std::string const& s )
{
  if ( s == "per-register" || s == "per_register" )
    return HybridModel::per_register;
  if ( s == "merged" )
    return HybridModel::merged;
  throw std::invalid_argument( "unknown hybrid counting model '" + s + "'" );
}

/*! \brief Per-sample repeats of a hybrid pair under a schedule.

  Per-register: repeats are counted inside each register and added.
  Merged: both tap sets share one timeline, duplicate positions collapse.
*/
inline std::vector<std::size_t> hybrid_repeats( HybridTaps const& taps, std::vector<label_t> const& steps,
                                                HybridModel model )
{
  auto const schedule = SamplingSchedule::custom( steps );
  auto const stop = StopRule::whole_schedule();
  if ( model == HybridModel::per_register )
  {
    auto const a = repetition_profile( taps.lfsr, schedule, stop );
    auto const b = repetition_profile( taps.nfsr, schedule, stop );
    std::vector<std::size_t> q( steps.size() );
    for ( std::size_t j = 0; j < q.size(); ++j )
    {
      q[j] = a.q[j] + b.q[j];
    }
    return q;
  }
  std::vector<label_t> merged = taps.lfsr.positions();
  merged.insert( merged.end(), taps.nfsr.positions().begin(), taps.nfsr.positions().end() );
  std::sort( merged.begin(), merged.end() );
  merged.erase( std::unique( merged.begin(), merged.end() ), merged.end() );
  auto const L = std::max( taps.lfsr.register_length(), taps.nfsr.register_length() );
  return repetition_profile( TapSet( merged, L ), schedule, stop ).q;
}

/* window of a hybrid pair: the gap is measured on the NFSR */
inline WindowProfile hybrid_window_profile( HybridTaps const& taps, HybridModel model )
{
  auto const gap = std::size_t( taps.nfsr.register_length() - taps.nfsr.last() );
  if ( gap < 2 )
  {
    throw std::invalid_argument( "hybrid_window_profile: window needs p >= 2" );
  }
  auto const q = hybrid_repeats( taps, std::vector<label_t>( gap - 2, 1 ), model );
  std::size_t n = taps.lfsr.size() + taps.nfsr.size();
  std::size_t const total = std::accumulate( q.begin(), q.end(), std::size_t{ 0 } );
  WindowProfile w;
  w.p = gap;
  w.q = q;
  w.taps_per_sample = n;
  w.register_length = taps.lfsr.register_length() + taps.nfsr.register_length();
  w.recovered = n * ( gap - 1 ) - total;
  return w;
}

} // namespace gfsga
