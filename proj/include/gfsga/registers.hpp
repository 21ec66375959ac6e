#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bits.hpp"
#include "taps.hpp"

/*!
  \file registers.hpp
  \brief Shift-register models, filtering functions and keystream generation

  Cells are numbered 1..L from left to right. Every clock moves the content
  one cell towards cell 1 and the freshly computed bit enters cell L, so the
  bit that occupies cell j at time 0 occupies cell j - t at time t (j > t).
*/

namespace gfsga
{

using RegisterState = Gf2Vector;

struct LfsrSpec
{
  std::size_t length = 0;
  /* cells whose XOR forms the new bit */
  std::vector<std::size_t> feedback;

  void validate() const
  {
    if ( length == 0 )
    {
      throw std::invalid_argument( "LfsrSpec: length must be positive" );
    }
    if ( feedback.empty() )
    {
      throw std::invalid_argument( "LfsrSpec: feedback set is empty" );
    }
    for ( auto p : feedback )
    {
      if ( p < 1 || p > length )
      {
        throw std::invalid_argument( "LfsrSpec: feedback position " + std::to_string( p ) + " outside 1.." +
                                     std::to_string( length ) );
      }
    }
  }

  bool operator==( LfsrSpec const& ) const = default;
};

struct NfsrSpec
{
  std::size_t length = 0;
  bool constant_term = false;
  /* each monomial is the product of the listed cells */
  std::vector<std::vector<std::size_t>> monomials;

  void validate() const
  {
    if ( length == 0 )
    {
      throw std::invalid_argument( "NfsrSpec: length must be positive" );
    }
    for ( auto const& mono : monomials )
    {
      if ( mono.empty() )
      {
        throw std::invalid_argument( "NfsrSpec: empty monomial (use constant_term)" );
      }
      for ( auto p : mono )
      {
        if ( p < 1 || p > length )
        {
          throw std::invalid_argument( "NfsrSpec: monomial position " + std::to_string( p ) + " outside 1.." +
                                       std::to_string( length ) );
        }
      }
    }
    auto sorted = normalized().monomials;
    if ( sorted.size() != monomials.size() )
    {
      throw std::invalid_argument( "NfsrSpec: monomial list is not deduplicated" );
    }
  }

  /* sorts variables, applies x*x = x and cancels equal monomials pairwise */
  NfsrSpec normalized() const
  {
    std::map<std::vector<std::size_t>, bool> parity;
    for ( auto mono : monomials )
    {
      std::sort( mono.begin(), mono.end() );
      mono.erase( std::unique( mono.begin(), mono.end() ), mono.end() );
      parity[mono] = !parity[mono];
    }
    NfsrSpec out{ length, constant_term, {} };
    for ( auto const& [mono, odd] : parity )
    {
      if ( odd )
      {
        out.monomials.push_back( mono );
      }
    }
    return out;
  }

  bool operator==( NfsrSpec const& ) const = default;
};

/* LFSR and NFSR clocked together; with coupling the LFSR bit in cell 1 enters the NFSR update */
struct HybridSpec
{
  LfsrSpec lfsr;
  NfsrSpec nfsr;
  bool coupling = true;

  void validate() const
  {
    lfsr.validate();
    nfsr.validate();
    if ( coupling && lfsr.length != nfsr.length )
    {
      throw std::invalid_argument( "HybridSpec: coupled registers must have equal length" );
    }
  }

  std::size_t length() const { return lfsr.length + nfsr.length; }

  bool operator==( HybridSpec const& ) const = default;
};

/*! \brief Vectorial Boolean function F: GF(2)^n -> GF(2)^m as a truth table.

  Input x = (x_1..x_n) has table index sum x_i 2^(i-1); output bit z_1 is the
  least significant bit of the stored value.
*/
class FilterSpec
{
public:
  FilterSpec() = default;

  FilterSpec( unsigned n, unsigned m, std::vector<std::uint32_t> table )
      : n_( n ), m_( m ), table_( std::move( table ) )
  {
    if ( m_ < 1 || m_ > n_ )
    {
      throw std::invalid_argument( "FilterSpec: require 1 <= m <= n" );
    }
    if ( n_ > 24 )
    {
      throw std::invalid_argument( "FilterSpec: truth tables are limited to n <= 24" );
    }
    if ( table_.size() != ( std::size_t{ 1 } << n_ ) )
    {
      throw std::invalid_argument( "FilterSpec: table length must be 2^n" );
    }
    for ( auto z : table_ )
    {
      if ( m_ < 32 && ( z >> m_ ) != 0 )
      {
        throw std::invalid_argument( "FilterSpec: table entry wider than m bits" );
      }
    }
  }

  static FilterSpec constant( unsigned n, unsigned m, std::uint32_t value = 0 )
  {
    return FilterSpec( n, m, std::vector<std::uint32_t>( std::size_t{ 1 } << n, value ) );
  }

  /* balanced function: every output value has exactly 2^(n-m) preimages */
  template<class Rng>
  static FilterSpec random_uniform( unsigned n, unsigned m, Rng& rng )
  {
    if ( m < 1 || m > n )
    {
      throw std::invalid_argument( "FilterSpec: require 1 <= m <= n" );
    }
    std::vector<std::uint32_t> table( std::size_t{ 1 } << n );
    for ( std::size_t x = 0; x < table.size(); ++x )
    {
      table[x] = static_cast<std::uint32_t>( x >> ( n - m ) );
    }
    std::shuffle( table.begin(), table.end(), rng );
    return FilterSpec( n, m, std::move( table ) );
  }

  template<class Rng>
  static FilterSpec random( unsigned n, unsigned m, Rng& rng )
  {
    std::vector<std::uint32_t> table( std::size_t{ 1 } << n );
    std::uniform_int_distribution<std::uint32_t> dist( 0, ( 1u << m ) - 1u );
    for ( auto& z : table )
    {
      z = dist( rng );
    }
    return FilterSpec( n, m, std::move( table ) );
  }

  unsigned n() const noexcept { return n_; }
  unsigned m() const noexcept { return m_; }
  std::vector<std::uint32_t> const& table() const noexcept { return table_; }

  std::uint32_t operator()( std::uint32_t x ) const { return table_[x]; }

  bool uniform() const
  {
    std::vector<std::size_t> counts( std::size_t{ 1 } << m_, 0 );
    for ( auto z : table_ )
    {
      ++counts[z];
    }
    auto const expected = std::size_t{ 1 } << ( n_ - m_ );
    return std::all_of( counts.begin(), counts.end(), [&]( auto c ) { return c == expected; } );
  }

  std::string to_hex() const
  {
    static constexpr char digits[] = "0123456789abcdef";
    unsigned const width = ( m_ + 3u ) / 4u;
    std::string s;
    s.reserve( table_.size() * width );
    for ( auto z : table_ )
    {
      for ( unsigned d = width; d-- > 0; )
      {
        s.push_back( digits[( z >> ( 4 * d ) ) & 0xfu] );
      }
    }
    return s;
  }

  static FilterSpec from_hex( unsigned n, unsigned m, std::string const& hex )
  {
    unsigned const width = ( m + 3u ) / 4u;
    std::size_t const entries = std::size_t{ 1 } << n;
    if ( hex.size() != entries * width )
    {
      throw std::invalid_argument( "FilterSpec: hex table has " + std::to_string( hex.size() ) + " digits, expected " +
                                   std::to_string( entries * width ) );
    }
    std::vector<std::uint32_t> table( entries, 0 );
    for ( std::size_t x = 0; x < entries; ++x )
    {
      std::uint32_t z = 0;
      for ( unsigned d = 0; d < width; ++d )
      {
        char const c = hex[x * width + d];
        std::uint32_t nibble;
        if ( c >= '0' && c <= '9' )
          nibble = c - '0';
        else if ( c >= 'a' && c <= 'f' )
          nibble = c - 'a' + 10;
        else
          throw std::invalid_argument( "FilterSpec: hex tables use lowercase digits" );
        z = ( z << 4 ) | nibble;
      }
      table[x] = z;
    }
    return FilterSpec( n, m, std::move( table ) );
  }

  bool operator==( FilterSpec const& ) const = default;

private:
  unsigned n_ = 0;
  unsigned m_ = 0;
  std::vector<std::uint32_t> table_;
};

struct PreimageSpace
{
  std::uint32_t output_value = 0;
  std::vector<std::uint32_t> members;

  std::size_t size() const noexcept { return members.size(); }
  bool operator==( PreimageSpace const& ) const = default;
};

/* one entry per output value z in 0..2^m-1, members in increasing input order */
inline std::vector<PreimageSpace> preimage_table( FilterSpec const& filter )
{
  std::vector<PreimageSpace> classes( std::size_t{ 1 } << filter.m() );
  for ( std::uint32_t z = 0; z < classes.size(); ++z )
  {
    classes[z].output_value = z;
  }
  for ( std::uint32_t x = 0; x < filter.table().size(); ++x )
  {
    classes[filter( x )].members.push_back( x );
  }
  return classes;
}

using RegisterSpec = std::variant<LfsrSpec, NfsrSpec, HybridSpec>;

inline std::size_t register_length( RegisterSpec const& reg )
{
  return std::visit(
      []( auto const& r ) -> std::size_t {
        if constexpr ( std::is_same_v<std::decay_t<decltype( r )>, HybridSpec> )
          return r.length();
        else
          return r.length;
      },
      reg );
}

/*! \brief Register, tap sets and filter of a filter generator.

  A single register has one tap set. A hybrid generator has two: taps[0] on
  the LFSR and taps[1] on the NFSR. The filter reads the LFSR taps first, so
  x_1 is tied to the first LFSR tap and the NFSR taps follow.
*/
struct GeneratorSpec
{
  RegisterSpec reg;
  std::vector<TapSet> taps;
  FilterSpec filter;

  bool is_hybrid() const { return std::holds_alternative<HybridSpec>( reg ); }

  std::size_t state_length() const { return register_length( reg ); }

  std::size_t tap_count() const
  {
    std::size_t n = 0;
    for ( auto const& t : taps )
    {
      n += t.size();
    }
    return n;
  }

  void validate() const
  {
    std::visit( []( auto const& r ) { r.validate(); }, reg );
    if ( is_hybrid() )
    {
      auto const& h = std::get<HybridSpec>( reg );
      if ( taps.size() != 2 )
      {
        throw std::invalid_argument( "GeneratorSpec: hybrid generators need one tap set per register" );
      }
      if ( std::size_t( taps[0].register_length() ) != h.lfsr.length ||
           std::size_t( taps[1].register_length() ) != h.nfsr.length )
      {
        throw std::invalid_argument( "GeneratorSpec: tap set length does not match its register" );
      }
    }
    else
    {
      if ( taps.size() != 1 )
      {
        throw std::invalid_argument( "GeneratorSpec: single-register generators need exactly one tap set" );
      }
      if ( std::size_t( taps[0].register_length() ) != state_length() )
      {
        throw std::invalid_argument( "GeneratorSpec: tap set length does not match the register" );
      }
    }
    if ( filter.n() != tap_count() )
    {
      throw std::invalid_argument( "GeneratorSpec: filter arity " + std::to_string( filter.n() ) +
                                   " differs from tap count " + std::to_string( tap_count() ) );
    }
  }
};

namespace detail
{

inline void require_length( RegisterState const& state, std::size_t length )
{
  if ( state.size() != length )
  {
    throw std::invalid_argument( "register state has " + std::to_string( state.size() ) + " cells, expected " +
                                 std::to_string( length ) );
  }
}

inline bool lfsr_feedback_bit( RegisterState const& state, LfsrSpec const& spec, std::size_t offset = 0 )
{
  bool bit = false;
  for ( auto p : spec.feedback )
  {
    bit ^= state.get( offset + p - 1 );
  }
  return bit;
}

inline bool anf_bit( RegisterState const& state, NfsrSpec const& spec, std::size_t offset = 0 )
{
  bool bit = spec.constant_term;
  for ( auto const& mono : spec.monomials )
  {
    bool prod = true;
    for ( auto p : mono )
    {
      prod = prod && state.get( offset + p - 1 );
    }
    bit ^= prod;
  }
  return bit;
}

} // namespace detail

inline RegisterState lfsr_step( RegisterState state, LfsrSpec const& spec )
{
  spec.validate();
  detail::require_length( state, spec.length );
  bool const fresh = detail::lfsr_feedback_bit( state, spec );
  state.shift_down( fresh );
  return state;
}

inline RegisterState nfsr_step( RegisterState state, NfsrSpec const& spec )
{
  spec.validate();
  detail::require_length( state, spec.length );
  bool const fresh = detail::anf_bit( state, spec );
  state.shift_down( fresh );
  return state;
}

namespace detail
{

inline RegisterState hybrid_step_unchecked( RegisterState const& state, HybridSpec const& spec )
{
  auto const l1 = spec.lfsr.length;
  bool const lfsr_fresh = lfsr_feedback_bit( state, spec.lfsr );
  bool nfsr_fresh = anf_bit( state, spec.nfsr, l1 );
  if ( spec.coupling )
  {
    nfsr_fresh ^= state.get( 0 );
  }
  RegisterState next( state.size() );
  for ( std::size_t i = 0; i + 1 < l1; ++i )
  {
    next.assign( i, state.get( i + 1 ) );
  }
  next.assign( l1 - 1, lfsr_fresh );
  for ( std::size_t i = 0; i + 1 < spec.nfsr.length; ++i )
  {
    next.assign( l1 + i, state.get( l1 + i + 1 ) );
  }
  next.assign( state.size() - 1, nfsr_fresh );
  return next;
}

} // namespace detail

/* the state holds the LFSR cells first, then the NFSR cells */
inline RegisterState hybrid_step( RegisterState const& state, HybridSpec const& spec )
{
  spec.validate();
  detail::require_length( state, spec.length() );
  return detail::hybrid_step_unchecked( state, spec );
}

inline RegisterState clock( RegisterState const& state, RegisterSpec const& reg )
{
  return std::visit(
      [&]( auto const& r ) -> RegisterState {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, LfsrSpec> )
          return lfsr_step( state, r );
        else if constexpr ( std::is_same_v<T, NfsrSpec> )
          return nfsr_step( state, r );
        else
          return hybrid_step( state, r );
      },
      reg );
}

/*! \brief Stepper that validates the register once and then clocks in place. */
class RegisterClock
{
public:
  explicit RegisterClock( RegisterSpec reg ) : reg_( std::move( reg ) )
  {
    std::visit( []( auto const& r ) { r.validate(); }, reg_ );
  }

  void operator()( RegisterState& state ) const
  {
    std::visit(
        [&]( auto const& r ) {
          using T = std::decay_t<decltype( r )>;
          if constexpr ( std::is_same_v<T, LfsrSpec> )
          {
            state.shift_down( detail::lfsr_feedback_bit( state, r ) );
          }
          else if constexpr ( std::is_same_v<T, NfsrSpec> )
          {
            state.shift_down( detail::anf_bit( state, r ) );
          }
          else
          {
            state = detail::hybrid_step_unchecked( state, r );
          }
        },
        reg_ );
  }

private:
  RegisterSpec reg_;
};

/* filter input for the current state, x_1 in bit 0 */
inline std::uint32_t filter_input( GeneratorSpec const& gen, RegisterState const& state )
{
  std::uint32_t x = 0;
  unsigned bit = 0;
  std::size_t offset = 0;
  for ( auto const& taps : gen.taps )
  {
    for ( auto p : taps.positions() )
    {
      if ( state.get( offset + std::size_t( p ) - 1 ) )
      {
        x |= 1u << bit;
      }
      ++bit;
    }
    offset += std::size_t( taps.register_length() );
  }
  return x;
}

/* block t is the filter output at clock t; the first block precedes any clocking */
inline std::vector<std::uint32_t> keystream( GeneratorSpec const& gen, RegisterState state, std::size_t count )
{
  gen.validate();
  detail::require_length( state, gen.state_length() );
  RegisterClock const step( gen.reg );
  std::vector<std::uint32_t> blocks;
  blocks.reserve( count );
  for ( std::size_t t = 0; t < count; ++t )
  {
    blocks.push_back( gen.filter( filter_input( gen, state ) ) );
    if ( t + 1 < count )
    {
      step( state );
    }
  }
  return blocks;
}

/*! \brief Checks candidate states against an observed keystream.

  The generator is validated once at construction; the comparison stops at
  the first differing block.
*/
class KeystreamMatcher
{
public:
  KeystreamMatcher( GeneratorSpec gen, std::vector<std::uint32_t> blocks )
      : gen_( std::move( gen ) ), blocks_( std::move( blocks ) ), step_( ( gen_.validate(), gen_.reg ) )
  {
  }

  bool operator()( RegisterState state ) const
  {
    detail::require_length( state, gen_.state_length() );
    for ( std::size_t t = 0; t < blocks_.size(); ++t )
    {
      if ( gen_.filter( filter_input( gen_, state ) ) != blocks_[t] )
        return false;
      if ( t + 1 < blocks_.size() )
        step_( state );
    }
    return true;
  }

private:
  GeneratorSpec gen_;
  std::vector<std::uint32_t> blocks_;
  RegisterClock step_;
};

/*! \brief Linear expressions of LFSR sequence bits in the initial state.

  Label x (x >= 1) is the sequence bit that sits in cell x at time 0, i.e.
  s_{x-1}. Labels above L are produced by the feedback and expand into
  initial-state bits through the recurrence.
*/
class LabelExpressions
{
public:
  explicit LabelExpressions( LfsrSpec spec ) : spec_( std::move( spec ) )
  {
    spec_.validate();
    for ( std::size_t j = 0; j < spec_.length; ++j )
    {
      cache_.push_back( Gf2Vector::unit( spec_.length, j ) );
    }
  }

  std::size_t length() const noexcept { return spec_.length; }

  Gf2Vector const& operator()( label_t label )
  {
    if ( label < 1 )
    {
      throw std::invalid_argument( "LabelExpressions: labels start at 1" );
    }
    auto const L = spec_.length;
    while ( cache_.size() < std::size_t( label ) )
    {
      /* new label y = L + 1 + tau combines labels tau + j over the feedback cells j */
      std::size_t const tau = cache_.size() - L;
      Gf2Vector expr( L );
      for ( auto j : spec_.feedback )
      {
        expr ^= cache_[tau + j - 1];
      }
      cache_.push_back( std::move( expr ) );
    }
    return cache_[std::size_t( label ) - 1];
  }

private:
  LfsrSpec spec_;
  std::vector<Gf2Vector> cache_;
};

/* expressions of the bits at each tap after t clocks, obtained by iterating the companion map */
inline std::vector<Gf2Vector> linear_tap_expressions( LfsrSpec const& spec, TapSet const& taps, std::size_t t )
{
  spec.validate();
  if ( std::size_t( taps.last() ) > spec.length )
  {
    throw std::invalid_argument( "linear_tap_expressions: tap outside the register" );
  }
  auto const L = spec.length;
  std::vector<Gf2Vector> cells;
  cells.reserve( L );
  for ( std::size_t j = 0; j < L; ++j )
  {
    cells.push_back( Gf2Vector::unit( L, j ) );
  }
  for ( std::size_t step = 0; step < t; ++step )
  {
    Gf2Vector fresh( L );
    for ( auto p : spec.feedback )
    {
      fresh ^= cells[p - 1];
    }
    std::rotate( cells.begin(), cells.begin() + 1, cells.end() );
    cells.back() = std::move( fresh );
  }
  std::vector<Gf2Vector> out;
  out.reserve( taps.size() );
  for ( auto p : taps.positions() )
  {
    out.push_back( cells[std::size_t( p ) - 1] );
  }
  return out;
}

/*! \brief Feedback sets of primitive characteristic polynomials for L = 8..32.

  The set F gives x^L + sum_{j in F} x^(j-1); each entry is the first
  primitive trinomial, or pentanomial where no trinomial exists.
*/
inline LfsrSpec primitive_lfsr( std::size_t length )
{
  static std::map<std::size_t, std::vector<std::size_t>> const table = {
      { 8, { 1, 2, 3, 8 } },   { 9, { 1, 5 } },          { 10, { 1, 4 } },         { 11, { 1, 3 } },
      { 12, { 1, 2, 3, 9 } },  { 13, { 1, 2, 3, 6 } },   { 14, { 1, 2, 3, 13 } },  { 15, { 1, 2 } },
      { 16, { 1, 2, 4, 13 } }, { 17, { 1, 4 } },         { 18, { 1, 8 } },         { 19, { 1, 2, 3, 6 } },
      { 20, { 1, 4 } },        { 21, { 1, 3 } },         { 22, { 1, 2 } },         { 23, { 1, 6 } },
      { 24, { 1, 2, 3, 8 } },  { 25, { 1, 4 } },         { 26, { 1, 2, 3, 7 } },   { 27, { 1, 2, 3, 6 } },
      { 28, { 1, 4 } },        { 29, { 1, 3 } },         { 30, { 1, 2, 3, 24 } },  { 31, { 1, 4 } },
      { 32, { 1, 2, 3, 23 } } };
  auto it = table.find( length );
  if ( it == table.end() )
  {
    throw std::invalid_argument( "primitive_lfsr: no built-in polynomial for length " + std::to_string( length ) );
  }
  return LfsrSpec{ length, it->second };
}

} // namespace gfsga
