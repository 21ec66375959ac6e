#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "registers.hpp"
#include "sampling.hpp"
#include "taps.hpp"

/*!
  \file attack.hpp
  \brief GF(2) algebra and the two state-recovery attacks
*/

namespace gfsga
{

struct Gf2LinearSystem
{
  std::size_t variables = 0;
  std::vector<Gf2Vector> rows;
  std::vector<bool> rhs;

  explicit Gf2LinearSystem( std::size_t num_variables = 0 ) : variables( num_variables ) {}

  void add( Gf2Vector row, bool value )
  {
    if ( row.size() != variables )
    {
      throw std::invalid_argument( "Gf2LinearSystem: row length " + std::to_string( row.size() ) + " differs from " +
                                   std::to_string( variables ) + " variables" );
    }
    rows.push_back( std::move( row ) );
    rhs.push_back( value );
  }
};

struct Gf2Solution
{
  enum class status
  {
    unique,
    inconsistent,
    underdetermined
  };

  status kind = status::inconsistent;
  std::size_t rank = 0;
  /* set for unique and underdetermined systems (free variables zero) */
  std::optional<Gf2Vector> solution;
  /* basis of the solution space of the homogeneous system */
  std::vector<Gf2Vector> nullspace;
};

/* Gauss-Jordan elimination over GF(2) */
inline Gf2Solution gf2_solve( Gf2LinearSystem const& system )
{
  auto const nv = system.variables;
  std::vector<Gf2Vector> rows = system.rows;
  std::vector<bool> rhs = system.rhs;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for ( std::size_t col = 0; col < nv && r < rows.size(); ++col )
  {
    std::size_t sel = r;
    while ( sel < rows.size() && !rows[sel].get( col ) )
      ++sel;
    if ( sel == rows.size() )
      continue;
    std::swap( rows[sel], rows[r] );
    bool const tmp = rhs[sel];
    rhs[sel] = rhs[r];
    rhs[r] = tmp;
    for ( std::size_t i = 0; i < rows.size(); ++i )
    {
      if ( i != r && rows[i].get( col ) )
      {
        rows[i] ^= rows[r];
        rhs[i] = rhs[i] != rhs[r];
      }
    }
    pivot_col.push_back( col );
    ++r;
  }
  Gf2Solution out;
  out.rank = r;
  for ( std::size_t i = r; i < rows.size(); ++i )
  {
    if ( rhs[i] )
    {
      out.kind = Gf2Solution::status::inconsistent;
      return out;
    }
  }
  Gf2Vector x( nv );
  for ( std::size_t i = 0; i < r; ++i )
  {
    x.assign( pivot_col[i], rhs[i] );
  }
  out.solution = x;
  std::vector<bool> is_pivot( nv, false );
  for ( auto c : pivot_col )
    is_pivot[c] = true;
  for ( std::size_t f = 0; f < nv; ++f )
  {
    if ( is_pivot[f] )
      continue;
    Gf2Vector v( nv );
    v.set( f );
    for ( std::size_t i = 0; i < r; ++i )
    {
      if ( rows[i].get( f ) )
        v.set( pivot_col[i] );
    }
    out.nullspace.push_back( std::move( v ) );
  }
  out.kind = r == nv ? Gf2Solution::status::unique : Gf2Solution::status::underdetermined;
  return out;
}

/*! \brief Row-echelon basis grown one equation at a time with stack-like undo.

  Every stored row is reduced against the pivots of the rows inserted before
  it, so reducing a new row is one pass over the rows in insertion order.
*/
class IncrementalGf2Basis
{
public:
  enum class insert_result
  {
    independent,
    redundant,
    inconsistent
  };

  explicit IncrementalGf2Basis( std::size_t num_variables ) : variables_( num_variables ) {}

  std::size_t variables() const noexcept { return variables_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t inconsistencies() const noexcept { return inconsistent_; }

  insert_result insert( Gf2Vector row, bool value )
  {
    for ( std::size_t i = 0; i < rows_.size(); ++i )
    {
      if ( row.get( pivots_[i] ) )
      {
        row ^= rows_[i];
        value = value != rhs_[i];
      }
    }
    auto const pivot = row.find_first();
    if ( pivot == row.size() )
    {
      history_.push_back( value ? entry::inconsistent : entry::redundant );
      if ( value )
      {
        ++inconsistent_;
        return insert_result::inconsistent;
      }
      return insert_result::redundant;
    }
    rows_.push_back( std::move( row ) );
    rhs_.push_back( value );
    pivots_.push_back( pivot );
    history_.push_back( entry::row );
    return insert_result::independent;
  }

  /* undoes the most recent insert */
  void pop()
  {
    if ( history_.empty() )
    {
      throw std::logic_error( "IncrementalGf2Basis: nothing to undo" );
    }
    auto const last = history_.back();
    history_.pop_back();
    if ( last == entry::row )
    {
      rows_.pop_back();
      rhs_.pop_back();
      pivots_.pop_back();
    }
    else if ( last == entry::inconsistent )
    {
      --inconsistent_;
    }
  }

  /* solution with the non-pivot variables taken from `free_values` */
  Gf2Vector solve( Gf2Vector const& free_values ) const
  {
    Gf2Vector x( variables_ );
    std::vector<bool> is_pivot( variables_, false );
    for ( auto p : pivots_ )
      is_pivot[p] = true;
    for ( std::size_t v = 0; v < variables_; ++v )
    {
      if ( !is_pivot[v] && free_values.get( v ) )
        x.set( v );
    }
    for ( std::size_t i = rows_.size(); i-- > 0; )
    {
      /* row i holds its pivot plus free variables and pivots of later rows only */
      Gf2Vector row = rows_[i];
      row.reset( pivots_[i] );
      x.assign( pivots_[i], row.dot( x ) != rhs_[i] );
    }
    return x;
  }

  std::vector<std::size_t> free_variables() const
  {
    std::vector<bool> is_pivot( variables_, false );
    for ( auto p : pivots_ )
      is_pivot[p] = true;
    std::vector<std::size_t> out;
    for ( std::size_t v = 0; v < variables_; ++v )
    {
      if ( !is_pivot[v] )
        out.push_back( v );
    }
    return out;
  }

private:
  enum class entry : std::uint8_t
  {
    row,
    redundant,
    inconsistent
  };

  std::size_t variables_;
  std::vector<Gf2Vector> rows_;
  std::vector<bool> rhs_;
  std::vector<std::size_t> pivots_;
  std::vector<entry> history_;
  std::size_t inconsistent_ = 0;
};

/* members of `space` whose input bit i (1-based) equals known[i] for every known position */
inline PreimageSpace filtered_preimages( PreimageSpace const& space, std::map<std::size_t, bool> const& known,
                                         std::size_t n )
{
  for ( auto const& [pos, bit] : known )
  {
    if ( pos < 1 || pos > n )
    {
      throw std::invalid_argument( "filtered_preimages: known position " + std::to_string( pos ) + " outside 1.." +
                                   std::to_string( n ) );
    }
  }
  PreimageSpace out{ space.output_value, {} };
  for ( auto x : space.members )
  {
    bool keep = true;
    for ( auto const& [pos, bit] : known )
    {
      if ( bool( ( x >> ( pos - 1 ) ) & 1u ) != bit )
      {
        keep = false;
        break;
      }
    }
    if ( keep )
      out.members.push_back( x );
  }
  return out;
}

struct AttackResult
{
  std::optional<RegisterState> recovered_state;
  std::size_t systems_solved = 0;
  std::size_t candidates_pruned = 0;
  /* distinct states reproducing the keystream */
  std::size_t solutions_found = 0;
  /* leaves whose solution space exceeded the enumeration cap */
  std::size_t unresolved = 0;
  std::chrono::duration<double> wall_clock{ 0.0 };
  std::string failure;

  bool success() const { return recovered_state.has_value(); }
};

struct RecoverOptions
{
  /* solve as soon as the accumulated rank reaches L */
  bool early_solve = true;
  /* stop after the first verified state */
  bool stop_at_first = false;
  /* largest nullspace enumerated at an underdetermined leaf, log2 */
  std::size_t nullspace_cap_log2 = 16;
  std::size_t workers = 1;
};

inline bool reproduces_keystream( GeneratorSpec const& gen, RegisterState const& state,
                                  std::vector<std::uint32_t> const& blocks )
{
  return KeystreamMatcher( gen, blocks )( state );
}

namespace detail
{

struct SearchTotals
{
  std::size_t systems = 0;
  std::size_t pruned = 0;
  std::size_t unresolved = 0;
  std::vector<RegisterState> solutions;
};

struct GfsgaContext
{
  GeneratorSpec const& gen;
  std::vector<std::uint32_t> const& blocks;
  std::vector<label_t> const& shifts;
  std::vector<Gf2Vector> const& expressions;
  std::vector<PreimageSpace> const& classes;
  KeystreamMatcher const& matches;
  RecoverOptions const& options;
  std::size_t length;
};

class GfsgaSearch
{
public:
  GfsgaSearch( GfsgaContext const& ctx, std::size_t max_label )
      : ctx_( ctx ), known_( max_label + 1, -1 ), basis_( ctx.length )
  {
  }

  SearchTotals totals;

  /* explores the subtree below member `first_member` of the first sample (all members if nullopt) */
  void run( std::optional<std::size_t> first_member )
  {
    descend( 0, first_member );
  }

private:
  bool done() const { return ctx_.options.stop_at_first && !totals.solutions.empty(); }

  void leaf()
  {
    ++totals.systems;
    if ( basis_.inconsistencies() > 0 )
      return;
    auto const free = basis_.free_variables();
    if ( free.size() > ctx_.options.nullspace_cap_log2 )
    {
      ++totals.unresolved;
      return;
    }
    Gf2Vector assignment( ctx_.length );
    for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << free.size() ); ++mask )
    {
      for ( std::size_t b = 0; b < free.size(); ++b )
        assignment.assign( free[b], ( mask >> b ) & 1u );
      auto state = basis_.solve( assignment );
      if ( ctx_.matches( state ) &&
           std::find( totals.solutions.begin(), totals.solutions.end(), state ) == totals.solutions.end() )
      {
        totals.solutions.push_back( std::move( state ) );
      }
    }
  }

  void descend( std::size_t depth, std::optional<std::size_t> only_member = std::nullopt )
  {
    if ( depth == ctx_.shifts.size() )
    {
      leaf();
      return;
    }
    auto const& taps = ctx_.gen.taps[0].positions();
    auto const shift = ctx_.shifts[depth];
    auto const& members = ctx_.classes[ctx_.blocks[std::size_t( shift )]].members;
    std::size_t const lo = only_member ? *only_member : 0;
    std::size_t const hi = only_member ? *only_member + 1 : members.size();
    std::vector<std::size_t> fresh;
    for ( std::size_t idx = lo; idx < hi && !done(); ++idx )
    {
      auto const x = members[idx];
      bool conflict = false;
      for ( std::size_t i = 0; i < taps.size(); ++i )
      {
        auto const k = known_[std::size_t( taps[i] + shift )];
        if ( k >= 0 && bool( k ) != bool( ( x >> i ) & 1u ) )
        {
          conflict = true;
          break;
        }
      }
      if ( conflict )
      {
        ++totals.pruned;
        continue;
      }
      fresh.clear();
      for ( std::size_t i = 0; i < taps.size(); ++i )
      {
        auto const label = std::size_t( taps[i] + shift );
        if ( known_[label] < 0 )
        {
          bool const bit = ( x >> i ) & 1u;
          known_[label] = bit ? 1 : 0;
          basis_.insert( ctx_.expressions[label], bit );
          fresh.push_back( label );
        }
      }
      if ( ctx_.options.early_solve && basis_.rank() == ctx_.length && depth + 1 < ctx_.shifts.size() )
        leaf();
      else
        descend( depth + 1 );
      for ( auto label : fresh )
      {
        known_[label] = -1;
        basis_.pop();
      }
    }
  }

  GfsgaContext const& ctx_;
  std::vector<std::int8_t> known_;
  IncrementalGf2Basis basis_;
};

} // namespace detail

/*! \brief GFSGA state recovery against an LFSR filter generator.

  Samples follow the schedule until the rank condition n c* - R* > L holds.
  The search walks the samples in order and the preimages of each block in
  truth-table order; a preimage contradicting an already fixed label is cut.
  Every complete assignment (or every assignment reaching rank L, with
  early_solve) is one solved system. A solution is accepted only if it
  reproduces all supplied blocks.
*/
inline AttackResult gfsga_recover( GeneratorSpec const& gen, std::vector<std::uint32_t> const& blocks,
                                   SamplingSchedule const& schedule, RecoverOptions const& options = {} )
{
  auto const start = std::chrono::steady_clock::now();
  gen.validate();
  auto const* lfsr = std::get_if<LfsrSpec>( &gen.reg );
  if ( !lfsr )
  {
    throw std::invalid_argument( "gfsga_recover: generator must be a single LFSR" );
  }
  auto const& taps = gen.taps[0];
  RepetitionProfile profile;
  try
  {
    profile = repetition_profile( taps, schedule, StopRule::rank() );
  }
  catch ( no_overdefined_system const& e )
  {
    throw std::invalid_argument( std::string( "gfsga_recover: schedule is not overdefined: " ) + e.what() );
  }
  std::vector<label_t> shifts{ 0 };
  for ( auto s : profile.steps )
    shifts.push_back( shifts.back() + s );
  if ( std::size_t( shifts.back() ) >= blocks.size() )
  {
    throw std::invalid_argument( "gfsga_recover: keystream has " + std::to_string( blocks.size() ) +
                                 " blocks, the schedule needs " + std::to_string( shifts.back() + 1 ) );
  }
  for ( auto z : blocks )
  {
    if ( gen.filter.m() < 32 && ( z >> gen.filter.m() ) != 0 )
      throw std::invalid_argument( "gfsga_recover: keystream block wider than m bits" );
  }

  auto const max_label = std::size_t( taps.last() + shifts.back() );
  LabelExpressions label_expr( *lfsr );
  std::vector<Gf2Vector> expressions( max_label + 1, Gf2Vector( lfsr->length ) );
  for ( std::size_t label = 1; label <= max_label; ++label )
    expressions[label] = label_expr( label_t( label ) );
  auto const classes = preimage_table( gen.filter );
  KeystreamMatcher const matches( gen, blocks );
  detail::GfsgaContext const ctx{ gen, blocks, shifts, expressions, classes, matches, options, lfsr->length };

  auto const& first = classes[blocks[0]].members;
  auto const parts = parallel_map( first.size(), options.workers, [&]( std::size_t idx ) {
    detail::GfsgaSearch search( ctx, max_label );
    search.run( idx );
    return search.totals;
  } );

  AttackResult result;
  for ( auto const& part : parts )
  {
    result.systems_solved += part.systems;
    result.candidates_pruned += part.pruned;
    result.unresolved += part.unresolved;
    for ( auto const& s : part.solutions )
    {
      if ( !result.recovered_state )
        result.recovered_state = s;
      ++result.solutions_found;
    }
  }
  if ( !result.recovered_state )
  {
    result.failure = result.unresolved > 0 ? "no verified state; some leaves exceeded the nullspace cap"
                                           : "no consistent state reproduces the keystream";
  }
  result.wall_clock = std::chrono::steady_clock::now() - start;
  return result;
}

struct WindowRecovery
{
  std::size_t window_length = 0;
  std::size_t recovered_bits = 0;
  std::size_t remaining_guess = 0;
  std::vector<std::size_t> q;
  /* 2^(n-m-q) clamped at 1 per sample, the first sample included */
  std::vector<double> nominal_sizes;
  /* window assignments surviving the overlap checks */
  std::size_t window_candidates = 0;
  std::size_t completions_tested = 0;
};

namespace detail
{

/* state index of every tap at clock t during the window, LFSR cells first for hybrids */
struct WindowLayout
{
  std::vector<std::vector<std::size_t>> cells;
  std::size_t state_length = 0;
  std::size_t taps = 0;
  std::size_t p = 0;
};

inline WindowLayout window_layout( GeneratorSpec const& gen )
{
  WindowLayout layout;
  layout.state_length = gen.state_length();
  layout.taps = gen.tap_count();
  std::size_t gap;
  if ( gen.is_hybrid() )
  {
    auto const& nfsr_taps = gen.taps[1];
    gap = std::size_t( nfsr_taps.register_length() - nfsr_taps.last() );
    auto const& lfsr_taps = gen.taps[0];
    if ( gap >= 2 && lfsr_taps.last() + label_t( gap ) - 2 > lfsr_taps.register_length() )
    {
      throw std::invalid_argument( "nfsr_window_recover: LFSR taps leave the initial state inside the window" );
    }
  }
  else
  {
    gap = std::size_t( gen.taps[0].register_length() - gen.taps[0].last() );
  }
  if ( gap < 2 )
  {
    throw std::invalid_argument( "nfsr_window_recover: window needs p >= 2" );
  }
  layout.p = gap;
  for ( std::size_t t = 0; t + 1 < gap; ++t )
  {
    std::vector<std::size_t> row;
    std::size_t offset = 0;
    for ( auto const& taps : gen.taps )
    {
      for ( auto l : taps.positions() )
        row.push_back( offset + std::size_t( l ) - 1 + t );
      offset += std::size_t( taps.register_length() );
    }
    layout.cells.push_back( std::move( row ) );
  }
  return layout;
}

} // namespace detail

/*! \brief Internal-state recovery over the sigma = 1 window of an NFSR or hybrid generator.

  The p - 1 window samples read initial-state cells only. Their preimages
  are combined under overlap consistency; each surviving assignment fixes
  R_p cells and the remaining L - R_p cells are exhausted, accepting states
  that reproduce every supplied block.
*/
inline std::pair<WindowRecovery, AttackResult> nfsr_window_recover( GeneratorSpec const& gen,
                                                                    std::vector<std::uint32_t> const& blocks,
                                                                    HybridModel model = HybridModel::per_register,
                                                                    RecoverOptions const& options = {} )
{
  auto const start = std::chrono::steady_clock::now();
  gen.validate();
  if ( std::holds_alternative<LfsrSpec>( gen.reg ) )
  {
    throw std::invalid_argument( "nfsr_window_recover: generator must be an NFSR or hybrid" );
  }
  if ( gen.is_hybrid() && model == HybridModel::merged )
  {
    throw std::invalid_argument( "nfsr_window_recover: the merged model identifies distinct cells of the two "
                                 "registers and cannot drive a recovery; use per-register" );
  }
  auto const layout = detail::window_layout( gen );
  auto const L = layout.state_length;
  auto const n = layout.taps;
  auto const m = gen.filter.m();
  std::size_t const window = layout.p - 1;
  if ( window * n <= L )
  {
    throw std::invalid_argument( "nfsr_window_recover: window too short, (p-1) n = " + std::to_string( window * n ) +
                                 " <= L = " + std::to_string( L ) );
  }
  std::size_t const needed = window + ( L + m - 1 ) / m;
  if ( blocks.size() < needed )
  {
    throw std::invalid_argument( "nfsr_window_recover: need at least " + std::to_string( needed ) + " blocks" );
  }

  WindowRecovery info;
  info.window_length = window;
  {
    std::vector<std::int8_t> covered( L, 0 );
    std::size_t count = 0;
    for ( std::size_t t = 0; t < window; ++t )
    {
      std::size_t repeats = 0;
      for ( auto c : layout.cells[t] )
      {
        if ( covered[c] )
          ++repeats;
        else
          ++count;
        covered[c] = 1;
      }
      if ( t > 0 )
        info.q.push_back( repeats );
      auto const e = repeats >= n - m ? 0 : n - m - repeats;
      info.nominal_sizes.push_back( double( std::uint64_t{ 1 } << e ) );
    }
    info.recovered_bits = count;
    info.remaining_guess = L - count;
  }
  if ( info.remaining_guess > 30 )
  {
    throw feasibility_error( "nfsr_window_recover: " + std::to_string( info.remaining_guess ) +
                             " unguessed bits exceed the desk-scale limit" );
  }

  auto const classes = preimage_table( gen.filter );
  KeystreamMatcher const matches( gen, blocks );
  RegisterState state( L );
  std::vector<std::int8_t> known( L, -1 );
  std::vector<std::size_t> unknown;
  AttackResult result;

  auto complete = [&]() {
    ++info.window_candidates;
    ++result.systems_solved;
    unknown.clear();
    for ( std::size_t c = 0; c < L; ++c )
    {
      if ( known[c] < 0 )
        unknown.push_back( c );
      else
        state.assign( c, known[c] );
    }
    for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << unknown.size() ); ++mask )
    {
      for ( std::size_t b = 0; b < unknown.size(); ++b )
        state.assign( unknown[b], ( mask >> b ) & 1u );
      ++info.completions_tested;
      if ( matches( state ) )
      {
        if ( !result.recovered_state )
          result.recovered_state = state;
        ++result.solutions_found;
        if ( options.stop_at_first )
          return;
      }
    }
  };

  auto descend = [&]( auto&& self, std::size_t t ) -> void {
    if ( options.stop_at_first && result.recovered_state )
      return;
    if ( t == window )
    {
      complete();
      return;
    }
    auto const& cells = layout.cells[t];
    std::vector<std::size_t> fresh;
    for ( auto x : classes[blocks[t]].members )
    {
      bool conflict = false;
      for ( std::size_t i = 0; i < n && !conflict; ++i )
      {
        auto const k = known[cells[i]];
        conflict = k >= 0 && bool( k ) != bool( ( x >> i ) & 1u );
      }
      if ( conflict )
      {
        ++result.candidates_pruned;
        continue;
      }
      fresh.clear();
      for ( std::size_t i = 0; i < n; ++i )
      {
        if ( known[cells[i]] < 0 )
        {
          known[cells[i]] = ( x >> i ) & 1u;
          fresh.push_back( cells[i] );
        }
      }
      self( self, t + 1 );
      for ( auto c : fresh )
        known[c] = -1;
      if ( options.stop_at_first && result.recovered_state )
        return;
    }
  };
  descend( descend, 0 );

  if ( !result.recovered_state )
    result.failure = "no candidate reproduces the keystream";
  result.wall_clock = std::chrono::steady_clock::now() - start;
  return { info, result };
}

} // namespace gfsga
