#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfsga
{

/*! \brief Dense bit vector over GF(2).

  Bit 0 is the least significant bit of word 0. Register states use bit
  i for cell i+1, linear expressions use bit j for initial-state cell j+1.
*/
class Gf2Vector
{
public:
  Gf2Vector() = default;

  explicit Gf2Vector( std::size_t num_bits )
      : num_bits_( num_bits ), words_( ( num_bits + 63u ) / 64u, 0u )
  {
  }

  static Gf2Vector unit( std::size_t num_bits, std::size_t index )
  {
    Gf2Vector v( num_bits );
    v.set( index );
    return v;
  }

  static Gf2Vector from_bits( std::vector<bool> const& bits )
  {
    Gf2Vector v( bits.size() );
    for ( std::size_t i = 0; i < bits.size(); ++i )
    {
      if ( bits[i] )
      {
        v.set( i );
      }
    }
    return v;
  }

  std::size_t size() const noexcept { return num_bits_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  std::uint64_t const* data() const noexcept { return words_.data(); }
  std::uint64_t* data() noexcept { return words_.data(); }

  bool get( std::size_t i ) const noexcept { return ( words_[i >> 6] >> ( i & 63u ) ) & 1u; }
  void set( std::size_t i ) noexcept { words_[i >> 6] |= std::uint64_t{ 1 } << ( i & 63u ); }
  void reset( std::size_t i ) noexcept { words_[i >> 6] &= ~( std::uint64_t{ 1 } << ( i & 63u ) ); }
  void flip( std::size_t i ) noexcept { words_[i >> 6] ^= std::uint64_t{ 1 } << ( i & 63u ); }
  void assign( std::size_t i, bool value ) noexcept
  {
    if ( value )
    {
      set( i );
    }
    else
    {
      reset( i );
    }
  }

  Gf2Vector& operator^=( Gf2Vector const& other )
  {
    if ( other.num_bits_ != num_bits_ )
    {
      throw std::invalid_argument( "Gf2Vector: length mismatch" );
    }
    for ( std::size_t w = 0; w < words_.size(); ++w )
    {
      words_[w] ^= other.words_[w];
    }
    return *this;
  }

  friend Gf2Vector operator^( Gf2Vector lhs, Gf2Vector const& rhs )
  {
    lhs ^= rhs;
    return lhs;
  }

  /* parity of the bitwise AND, i.e. the inner product over GF(2) */
  bool dot( Gf2Vector const& other ) const
  {
    if ( other.num_bits_ != num_bits_ )
    {
      throw std::invalid_argument( "Gf2Vector: length mismatch" );
    }
    std::uint64_t acc = 0;
    for ( std::size_t w = 0; w < words_.size(); ++w )
    {
      acc ^= words_[w] & other.words_[w];
    }
    return std::popcount( acc ) & 1;
  }

  bool any() const noexcept
  {
    return std::any_of( words_.begin(), words_.end(), []( auto w ) { return w != 0; } );
  }

  std::size_t count() const noexcept
  {
    std::size_t c = 0;
    for ( auto w : words_ )
    {
      c += std::popcount( w );
    }
    return c;
  }

  /* index of the lowest set bit, or size() if none */
  std::size_t find_first() const noexcept
  {
    for ( std::size_t w = 0; w < words_.size(); ++w )
    {
      if ( words_[w] )
      {
        return w * 64u + std::countr_zero( words_[w] );
      }
    }
    return num_bits_;
  }

  /* moves bit i+1 to bit i for all i; the top bit becomes `fill` */
  void shift_down( bool fill )
  {
    if ( num_bits_ == 0 )
    {
      return;
    }
    for ( std::size_t w = 0; w + 1 < words_.size(); ++w )
    {
      words_[w] = ( words_[w] >> 1 ) | ( words_[w + 1] << 63 );
    }
    words_.back() >>= 1;
    assign( num_bits_ - 1, fill );
  }

  bool operator==( Gf2Vector const& other ) const = default;

  /* bit 0 first, as '0'/'1' characters */
  std::string to_string() const
  {
    std::string s( num_bits_, '0' );
    for ( std::size_t i = 0; i < num_bits_; ++i )
    {
      if ( get( i ) )
      {
        s[i] = '1';
      }
    }
    return s;
  }

  /* lowercase hex, least significant nibble (bits 0..3) first */
  std::string to_hex() const
  {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for ( std::size_t i = 0; i < num_bits_; i += 4 )
    {
      unsigned nibble = 0;
      for ( std::size_t b = 0; b < 4 && i + b < num_bits_; ++b )
      {
        nibble |= unsigned( get( i + b ) ) << b;
      }
      s.push_back( digits[nibble] );
    }
    return s;
  }

  static Gf2Vector from_hex( std::string const& hex, std::size_t num_bits )
  {
    if ( hex.size() != ( num_bits + 3u ) / 4u )
    {
      throw std::invalid_argument( "Gf2Vector: hex length does not match bit count" );
    }
    Gf2Vector v( num_bits );
    for ( std::size_t k = 0; k < hex.size(); ++k )
    {
      char const c = hex[k];
      unsigned nibble;
      if ( c >= '0' && c <= '9' )
        nibble = c - '0';
      else if ( c >= 'a' && c <= 'f' )
        nibble = c - 'a' + 10;
      else
        throw std::invalid_argument( "Gf2Vector: invalid hex digit" );
      for ( std::size_t b = 0; b < 4; ++b )
      {
        if ( ( nibble >> b ) & 1u )
        {
          if ( 4 * k + b >= num_bits )
          {
            throw std::invalid_argument( "Gf2Vector: hex sets bits beyond length" );
          }
          v.set( 4 * k + b );
        }
      }
    }
    return v;
  }

private:
  std::size_t num_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

} // namespace gfsga
