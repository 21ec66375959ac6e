#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfsga
{

using label_t = std::int64_t;

/*! \brief Tap positions l_1 < ... < l_n on a register of length L.

  Positions are 1-based cell numbers. On the integer-label timeline the
  sample taken after a cumulative shift s reads labels {l_1 + s, ..., l_n + s}.
*/
class TapSet
{
public:
  TapSet() = default;

  TapSet( std::vector<label_t> positions, label_t register_length )
      : positions_( std::move( positions ) ), register_length_( register_length )
  {
    if ( positions_.empty() )
    {
      throw std::invalid_argument( "TapSet: at least one tap is required" );
    }
    if ( positions_.front() < 1 )
    {
      throw std::invalid_argument( "TapSet: tap positions start at 1" );
    }
    for ( std::size_t i = 1; i < positions_.size(); ++i )
    {
      if ( positions_[i] <= positions_[i - 1] )
      {
        throw std::invalid_argument( "TapSet: positions must be strictly increasing" );
      }
    }
    if ( positions_.back() > register_length_ )
    {
      throw std::invalid_argument( "TapSet: tap " + std::to_string( positions_.back() ) +
                                   " outside register of length " + std::to_string( register_length_ ) );
    }
  }

  /* taps 1, 1+d_1, 1+d_1+d_2, ... */
  static TapSet from_differences( std::vector<label_t> const& differences, label_t register_length, label_t first = 1 )
  {
    std::vector<label_t> positions{ first };
    for ( auto d : differences )
    {
      if ( d < 1 )
      {
        throw std::invalid_argument( "TapSet: differences must be positive" );
      }
      positions.push_back( positions.back() + d );
    }
    return TapSet( std::move( positions ), register_length );
  }

  std::vector<label_t> const& positions() const noexcept { return positions_; }
  label_t register_length() const noexcept { return register_length_; }
  std::size_t size() const noexcept { return positions_.size(); }
  label_t operator[]( std::size_t i ) const { return positions_[i]; }
  label_t first() const { return positions_.front(); }
  label_t last() const { return positions_.back(); }
  label_t span() const { return positions_.back() - positions_.front(); }

  bool operator==( TapSet const& ) const = default;

private:
  std::vector<label_t> positions_;
  label_t register_length_ = 0;
};

} // namespace gfsga
