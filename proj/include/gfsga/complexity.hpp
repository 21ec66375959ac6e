#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "sampling.hpp"
#include "taps.hpp"

/*!
  \file complexity.hpp
  \brief Attack-cost formulas in log2 space
*/

namespace gfsga
{

inline constexpr double default_solver_exponent = 3.0;
inline constexpr double strassen_omega = 2.807;

struct ComplexityEstimate
{
  double log2_total = 0.0;
  double first_sample_exponent = 0.0;
  /* max(0, n - m - q_j) per later sample */
  std::vector<double> per_sample_exponents;
  double solver_log2 = 0.0;
  std::size_t samples_used = 0;
  std::size_t repeats_used = 0;
  std::string provenance;

  /* exponent of the number of candidate systems, i.e. log2_total without the solver */
  double guessing_log2() const { return log2_total - solver_log2; }
};

namespace detail
{

inline void check_nm( std::size_t n, std::size_t m )
{
  if ( m < 1 || m >= n )
  {
    throw std::invalid_argument( "cost formulas require 1 <= m < n (got n=" + std::to_string( n ) +
                                 ", m=" + std::to_string( m ) + ")" );
  }
}

inline ComplexityEstimate sampling_estimate( std::vector<std::size_t> const& q, std::size_t n, std::size_t m )
{
  check_nm( n, m );
  ComplexityEstimate est;
  est.first_sample_exponent = double( n - m );
  double sum = est.first_sample_exponent;
  for ( auto r : q )
  {
    double const e = r >= n - m ? 0.0 : double( n - m - r );
    est.per_sample_exponents.push_back( e );
    sum += e;
  }
  est.samples_used = q.size() + 1;
  est.repeats_used = std::accumulate( q.begin(), q.end(), std::size_t{ 0 } );
  est.log2_total = sum;
  return est;
}

inline void check_profile( RepetitionProfile const& profile, std::size_t n, label_t L )
{
  if ( profile.taps_per_sample != n || profile.register_length != L )
  {
    throw std::invalid_argument( "profile was computed for different (n, L)" );
  }
  if ( !profile.overdefined() )
  {
    throw std::invalid_argument( "profile is not overdefined: n*c - R = " + std::to_string( profile.equations() ) +
                                 " <= L = " + std::to_string( L ) );
  }
}

} // namespace detail

inline ComplexityEstimate fsga_cost( std::size_t n, std::size_t m, label_t L,
                                     double solver_exponent = default_solver_exponent )
{
  detail::check_nm( n, m );
  if ( L < label_t( n ) )
  {
    throw std::invalid_argument( "fsga_cost: require L >= n" );
  }
  auto const c = std::size_t( ( L + label_t( n ) - 1 ) / label_t( n ) );
  auto est = detail::sampling_estimate( std::vector<std::size_t>( c - 1, 0 ), n, m );
  est.solver_log2 = solver_exponent * std::log2( double( L ) );
  est.log2_total += est.solver_log2;
  est.provenance = "fsga c=" + std::to_string( c );
  return est;
}

/* cost of a variable (or any) schedule: (n-m) + sum max(0, n-m-q_j) + solver*log2 L */
inline ComplexityEstimate gfsga_variable_cost( RepetitionProfile const& profile, std::size_t n, std::size_t m,
                                               label_t L, double solver_exponent = default_solver_exponent )
{
  detail::check_profile( profile, n, L );
  auto est = detail::sampling_estimate( profile.q, n, m );
  est.solver_log2 = solver_exponent * std::log2( double( L ) );
  est.log2_total += est.solver_log2;
  est.provenance = to_string( profile.mode ) + " c*=" + std::to_string( profile.samples ) +
                   " R*=" + std::to_string( profile.total );
  return est;
}

inline ComplexityEstimate gfsga_constant_cost( RepetitionProfile const& profile, std::size_t n, std::size_t m,
                                               label_t L, double solver_exponent = default_solver_exponent )
{
  if ( profile.mode != ScheduleMode::constant || profile.steps.empty() )
  {
    throw std::invalid_argument( "gfsga_constant_cost: profile does not come from a constant schedule" );
  }
  auto est = gfsga_variable_cost( profile, n, m, L, solver_exponent );
  est.provenance = "constant sigma=" + std::to_string( profile.steps.front() ) + " c=" +
                   std::to_string( profile.samples ) + " R=" + std::to_string( profile.total );
  return est;
}

/* exact exponent of the number of candidate systems, sum of the clamped per-sample exponents */
inline std::size_t candidate_exponent( std::vector<std::size_t> const& q, std::size_t n, std::size_t m )
{
  detail::check_nm( n, m );
  std::size_t e = n - m;
  for ( auto r : q )
  {
    e += r >= n - m ? 0 : n - m - r;
  }
  return e;
}

namespace detail
{

/* allocation-free constant-mode cost under the rank stop; nullopt when never overdefined */
struct ConstantCost
{
  double log2_total;
  std::size_t samples;
  std::size_t repeats;
};

inline std::optional<ConstantCost> constant_cost_fast( std::vector<label_t> const& pos, label_t L, label_t sigma,
                                                       std::size_t m, double solver_log2,
                                                       std::vector<std::size_t>& scratch )
{
  auto const n = pos.size();
  scratch.assign( 4 * std::size_t( L ) + 2, 0 );
  /* scratch[j] = number of taps whose first repeat happens at sample index j */
  for ( std::size_t b = 0; b < n; ++b )
  {
    for ( std::size_t a = b + 1; a < n; ++a )
    {
      auto const diff = pos[a] - pos[b];
      if ( diff % sigma == 0 )
      {
        auto const j = std::size_t( diff / sigma );
        if ( j < scratch.size() )
          ++scratch[j];
        break;
      }
    }
  }
  std::size_t const cap = 4 * std::size_t( L );
  std::size_t c = 1, total = 0, r = 0, exponent = n - m;
  while ( n * c <= total + std::size_t( L ) )
  {
    if ( c >= cap )
      return std::nullopt;
    r += scratch[c];
    total += r;
    exponent += r >= n - m ? 0 : n - m - r;
    ++c;
  }
  return ConstantCost{ double( exponent ) + solver_log2, c, total };
}

} // namespace detail

struct SigmaChoice
{
  label_t sigma = 0;
  ComplexityEstimate estimate;
  /* every sigma attaining the minimum */
  std::vector<label_t> optima;
};

/*! \brief Best constant sampling distance over sigma = 1..L (ties to the smallest sigma). */
inline SigmaChoice optimal_constant_sigma( TapSet const& taps, std::size_t m,
                                           double solver_exponent = default_solver_exponent )
{
  auto const n = taps.size();
  auto const L = taps.register_length();
  if ( n == 1 )
  {
    if ( m != 1 )
    {
      throw std::invalid_argument( "optimal_constant_sigma: a single tap supports only m = 1" );
    }
    auto prof = constant_profile( taps, 1 );
    ComplexityEstimate est;
    est.solver_log2 = solver_exponent * std::log2( double( L ) );
    est.log2_total = est.solver_log2;
    est.per_sample_exponents.assign( prof.q.size(), 0.0 );
    est.samples_used = prof.samples;
    est.provenance = "constant sigma=1";
    return { 1, est, { 1 } };
  }
  detail::check_nm( n, m );
  double const solver = solver_exponent * std::log2( double( L ) );
  std::vector<std::size_t> scratch;
  std::optional<double> best;
  label_t best_sigma = 0;
  std::vector<label_t> optima;
  for ( label_t sigma = 1; sigma <= L; ++sigma )
  {
    auto const cost = detail::constant_cost_fast( taps.positions(), L, sigma, m, solver, scratch );
    if ( !cost )
      continue;
    if ( !best || cost->log2_total < *best - 1e-9 )
    {
      best = cost->log2_total;
      best_sigma = sigma;
      optima = { sigma };
    }
    else if ( std::abs( cost->log2_total - *best ) <= 1e-9 )
    {
      optima.push_back( sigma );
    }
  }
  if ( !best )
  {
    throw no_overdefined_system( "no sampling distance yields an overdefined system" );
  }
  auto const profile = constant_profile( taps, best_sigma );
  return { best_sigma, gfsga_constant_cost( profile, n, m, L, solver_exponent ), optima };
}

/* constant-mode cost at one sigma, or nullopt if the system never becomes overdefined */
inline std::optional<double> constant_cost_at( TapSet const& taps, label_t sigma, std::size_t m,
                                               double solver_exponent = default_solver_exponent )
{
  detail::check_nm( taps.size(), m );
  std::vector<std::size_t> scratch;
  auto const cost = detail::constant_cost_fast( taps.positions(), taps.register_length(), sigma, m,
                                                solver_exponent * std::log2( double( taps.register_length() ) ),
                                                scratch );
  if ( !cost )
    return std::nullopt;
  return cost->log2_total;
}

struct NfsrCostParams
{
  std::size_t r = 2;
  std::size_t e = 2;
  double omega = strassen_omega;

  void validate() const
  {
    if ( r < 1 || e < 1 )
    {
      throw std::invalid_argument( "NfsrCostParams: r and e must be positive" );
    }
    if ( !( omega > 2.0 && omega <= 3.0 ) )
    {
      throw std::invalid_argument( "NfsrCostParams: omega must lie in (2, 3]" );
    }
  }
};

/* log2 of sum_{i=0}^{d} C(L, i) */
inline double log2_binomial_sum( std::size_t L, std::size_t d )
{
  if ( d > L )
  {
    throw std::invalid_argument( "log2_binomial_sum: degree exceeds L" );
  }
  long double term = 1.0L, sum = 1.0L;
  for ( std::size_t i = 1; i <= d; ++i )
  {
    term = term * static_cast<long double>( L - i + 1 ) / static_cast<long double>( i );
    sum += term;
  }
  return double( std::log2( sum ) );
}

inline ComplexityEstimate nfsr_gfsga_cost( RepetitionProfile const& profile, std::size_t n, std::size_t m, label_t L,
                                           NfsrCostParams const& params )
{
  params.validate();
  if ( params.e * params.r > std::size_t( L ) )
  {
    throw std::invalid_argument( "nfsr_gfsga_cost: e*r exceeds L" );
  }
  detail::check_profile( profile, n, L );
  auto est = detail::sampling_estimate( profile.q, n, m );
  est.solver_log2 = params.omega * log2_binomial_sum( std::size_t( L ), params.e * params.r );
  est.log2_total += est.solver_log2;
  est.provenance = "nfsr " + to_string( profile.mode ) + " r=" + std::to_string( params.r ) +
                   " e=" + std::to_string( params.e );
  return est;
}

struct WindowEstimate
{
  ComplexityEstimate estimate;
  std::size_t p = 0;
  std::size_t recovered = 0;
  std::size_t guessed = 0;
  /* (p-1) n 2^(n-1) + L */
  double memory_bits = 0.0;
  /* (p-1) + L */
  std::size_t data_bits = 0;
};

/*! \brief Window attack: sampling product over the p-1 window samples times 2^(L - R_p). */
inline WindowEstimate internal_state_recovery_cost( std::vector<std::size_t> const& q, std::size_t n, std::size_t m,
                                                    label_t L, std::size_t p )
{
  if ( p < 2 || q.size() != p - 2 )
  {
    throw std::invalid_argument( "internal_state_recovery_cost: expected p-2 repeat counts" );
  }
  std::size_t const total = std::accumulate( q.begin(), q.end(), std::size_t{ 0 } );
  std::size_t const recovered = n * ( p - 1 ) - total;
  if ( n * ( p - 1 ) <= std::size_t( L ) )
  {
    throw std::invalid_argument( "internal_state_recovery_cost: window too short, need (p-1) n > L" );
  }
  if ( recovered > std::size_t( L ) )
  {
    throw std::invalid_argument( "internal_state_recovery_cost: R_p = " + std::to_string( recovered ) +
                                 " exceeds L" );
  }
  WindowEstimate w;
  w.estimate = detail::sampling_estimate( q, n, m );
  w.p = p;
  w.recovered = recovered;
  w.guessed = std::size_t( L ) - recovered;
  w.estimate.solver_log2 = double( w.guessed );
  w.estimate.log2_total += w.estimate.solver_log2;
  w.estimate.provenance = "window p=" + std::to_string( p ) + " R_p=" + std::to_string( recovered );
  w.memory_bits = double( p - 1 ) * double( n ) * std::ldexp( 1.0, int( n ) - 1 ) + double( L );
  w.data_bits = ( p - 1 ) + std::size_t( L );
  return w;
}

inline WindowEstimate internal_state_recovery_cost( WindowProfile const& window, std::size_t m )
{
  return internal_state_recovery_cost( window.q, window.taps_per_sample, m, window.register_length, window.p );
}

/* sum_i counts_i log2(sizes_i) + omega log2 L */
inline ComplexityEstimate restricted_annihilator_cost( std::vector<double> const& sizes,
                                                       std::vector<std::size_t> const& counts, label_t L,
                                                       double omega = strassen_omega )
{
  if ( sizes.size() != counts.size() || sizes.empty() )
  {
    throw std::invalid_argument( "restricted_annihilator_cost: sizes and counts must have equal nonzero length" );
  }
  ComplexityEstimate est;
  double sum = 0.0;
  for ( std::size_t i = 0; i < sizes.size(); ++i )
  {
    if ( !( sizes[i] > 0.0 ) || counts[i] == 0 )
    {
      throw std::invalid_argument( "restricted_annihilator_cost: sizes must be positive, counts nonzero" );
    }
    double const e = double( counts[i] ) * std::log2( sizes[i] );
    est.per_sample_exponents.push_back( e );
    sum += e;
    est.samples_used += counts[i];
  }
  est.solver_log2 = omega * std::log2( double( L ) );
  est.log2_total = sum + est.solver_log2;
  est.provenance = "restricted annihilator";
  return est;
}

struct ModeCosts
{
  SigmaChoice constant;
  std::optional<ComplexityEstimate> greedy;
  std::optional<ComplexityEstimate> cyclic;
  std::optional<RepetitionProfile> greedy_profile;
  std::optional<RepetitionProfile> cyclic_profile;
};

inline ModeCosts mode_costs( TapSet const& taps, std::size_t m, double solver_exponent = default_solver_exponent )
{
  auto const n = taps.size();
  auto const L = taps.register_length();
  ModeCosts out{ optimal_constant_sigma( taps, m, solver_exponent ), {}, {}, {}, {} };
  try
  {
    out.greedy_profile = greedy_schedule( taps );
    out.greedy = gfsga_variable_cost( *out.greedy_profile, n, m, L, solver_exponent );
  }
  catch ( no_overdefined_system const& )
  {
  }
  if ( n >= 2 )
  {
    try
    {
      out.cyclic_profile = cyclic_schedule( taps );
      out.cyclic = gfsga_variable_cost( *out.cyclic_profile, n, m, L, solver_exponent );
    }
    catch ( no_overdefined_system const& )
    {
    }
  }
  return out;
}

/* published (constant, greedy, cyclic) costs for a tap set whose m is not given */
struct CalibrationTarget
{
  std::string label;
  TapSet taps;
  double constant = 0.0;
  double greedy = 0.0;
  double cyclic = 0.0;
};

struct CalibrationRow
{
  std::string label;
  std::size_t m = 0;
  double constant = 0.0;
  std::optional<double> greedy, cyclic;
  double delta_constant = 0.0;
  std::optional<double> delta_greedy, delta_cyclic;

  bool operator==( CalibrationRow const& ) const = default;
};

struct CalibrationResult
{
  std::size_t best_m = 0;
  /* sum of absolute deltas per m, indexed m - m_min */
  std::vector<double> score;
  std::size_t m_min = 1;
  std::vector<CalibrationRow> rows;

  bool operator==( CalibrationResult const& ) const = default;
};

/*! \brief Sweeps the output width m and reports which one reproduces the targets best.

  The best m minimizes the sum of absolute cell deltas over all targets;
  ties go to the smaller m.
*/
inline CalibrationResult calibrate_output_width( std::vector<CalibrationTarget> const& targets, std::size_t m_min = 1,
                                                 std::size_t m_max = 4,
                                                 double solver_exponent = default_solver_exponent )
{
  if ( targets.empty() || m_min < 1 || m_max < m_min )
  {
    throw std::invalid_argument( "calibrate_output_width: need targets and 1 <= m_min <= m_max" );
  }
  CalibrationResult result;
  result.m_min = m_min;
  for ( std::size_t m = m_min; m <= m_max; ++m )
  {
    double score = 0.0;
    for ( auto const& t : targets )
    {
      if ( m >= t.taps.size() )
      {
        score = std::numeric_limits<double>::infinity();
        continue;
      }
      auto const costs = mode_costs( t.taps, m, solver_exponent );
      CalibrationRow row;
      row.label = t.label;
      row.m = m;
      row.constant = costs.constant.estimate.log2_total;
      row.delta_constant = row.constant - t.constant;
      score += std::abs( row.delta_constant );
      /* a mode that never becomes overdefined cannot reproduce a published cell */
      if ( costs.greedy )
      {
        row.greedy = costs.greedy->log2_total;
        row.delta_greedy = *row.greedy - t.greedy;
        score += std::abs( *row.delta_greedy );
      }
      else
        score = std::numeric_limits<double>::infinity();
      if ( costs.cyclic )
      {
        row.cyclic = costs.cyclic->log2_total;
        row.delta_cyclic = *row.cyclic - t.cyclic;
        score += std::abs( *row.delta_cyclic );
      }
      else
        score = std::numeric_limits<double>::infinity();
      result.rows.push_back( row );
    }
    result.score.push_back( score );
  }
  auto const best = std::min_element( result.score.begin(), result.score.end() );
  result.best_m = m_min + std::size_t( best - result.score.begin() );
  return result;
}

} // namespace gfsga
