#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"

/*!
  \file keystream_io.hpp
  \brief Binary keystream files

  Header: n, m, L, count as four 32-bit little-endian integers. Then one
  block per clock, ceil(m/8) little-endian bytes each, z_1 in the least
  significant bit.
*/

namespace gfsga
{

struct KeystreamFile
{
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t length = 0;
  std::vector<std::uint32_t> blocks;

  bool operator==( KeystreamFile const& ) const = default;
};

namespace detail
{

inline void put_u32( std::vector<char>& out, std::uint32_t v )
{
  for ( int i = 0; i < 4; ++i )
    out.push_back( char( ( v >> ( 8 * i ) ) & 0xffu ) );
}

inline std::uint32_t get_le( std::vector<char> const& in, std::size_t offset, std::size_t bytes )
{
  std::uint32_t v = 0;
  for ( std::size_t i = 0; i < bytes; ++i )
    v |= std::uint32_t( std::uint8_t( in[offset + i] ) ) << ( 8 * i );
  return v;
}

} // namespace detail

inline std::vector<char> encode_keystream( KeystreamFile const& ks )
{
  if ( ks.m < 1 || ks.m > 32 )
  {
    throw keystream_format_error( "keystream: m must lie in 1..32" );
  }
  std::size_t const width = ( ks.m + 7 ) / 8;
  std::vector<char> out;
  out.reserve( 16 + width * ks.blocks.size() );
  detail::put_u32( out, ks.n );
  detail::put_u32( out, ks.m );
  detail::put_u32( out, ks.length );
  detail::put_u32( out, std::uint32_t( ks.blocks.size() ) );
  for ( auto z : ks.blocks )
  {
    if ( ks.m < 32 && ( z >> ks.m ) != 0 )
    {
      throw keystream_format_error( "keystream: block wider than m bits" );
    }
    for ( std::size_t i = 0; i < width; ++i )
      out.push_back( char( ( z >> ( 8 * i ) ) & 0xffu ) );
  }
  return out;
}

inline KeystreamFile decode_keystream( std::vector<char> const& bytes )
{
  if ( bytes.size() < 16 )
  {
    throw keystream_format_error( "keystream: truncated header (" + std::to_string( bytes.size() ) + " bytes)" );
  }
  KeystreamFile ks;
  ks.n = detail::get_le( bytes, 0, 4 );
  ks.m = detail::get_le( bytes, 4, 4 );
  ks.length = detail::get_le( bytes, 8, 4 );
  auto const count = detail::get_le( bytes, 12, 4 );
  if ( ks.m < 1 || ks.m > 32 || ks.m > ks.n )
  {
    throw keystream_format_error( "keystream: header has invalid (n, m) = (" + std::to_string( ks.n ) + ", " +
                                  std::to_string( ks.m ) + ")" );
  }
  std::size_t const width = ( ks.m + 7 ) / 8;
  std::size_t const expected = 16 + width * std::size_t( count );
  if ( bytes.size() != expected )
  {
    throw keystream_format_error( "keystream: header announces " + std::to_string( count ) + " blocks (" +
                                  std::to_string( expected ) + " bytes) but the file has " +
                                  std::to_string( bytes.size() ) + " bytes" );
  }
  ks.blocks.reserve( count );
  for ( std::size_t b = 0; b < count; ++b )
  {
    auto const z = detail::get_le( bytes, 16 + b * width, width );
    if ( ks.m < 32 && ( z >> ks.m ) != 0 )
    {
      throw keystream_format_error( "keystream: block " + std::to_string( b ) + " wider than m bits" );
    }
    ks.blocks.push_back( z );
  }
  return ks;
}

inline void write_keystream( std::string const& path, KeystreamFile const& ks )
{
  auto const bytes = encode_keystream( ks );
  std::ofstream out( path, std::ios::binary );
  if ( !out )
  {
    throw keystream_format_error( "keystream: cannot open '" + path + "' for writing" );
  }
  out.write( bytes.data(), std::streamsize( bytes.size() ) );
}

inline KeystreamFile read_keystream( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw keystream_format_error( "keystream: cannot open '" + path + "'" );
  }
  std::vector<char> bytes( ( std::istreambuf_iterator<char>( in ) ), std::istreambuf_iterator<char>() );
  return decode_keystream( bytes );
}

} // namespace gfsga
