#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfsga
{

/* the sampling never produced more independent equations than unknowns */
class no_overdefined_system : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/* a request is well-formed but outside what the exhaustive routines handle */
class feasibility_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class search_exhausted : public std::runtime_error
{
public:
  search_exhausted( std::string const& what, std::vector<std::int64_t> best_so_far = {} )
      : std::runtime_error( what ), best_so_far( std::move( best_so_far ) )
  {
  }

  /* ordered differences accepted before the search ran out */
  std::vector<std::int64_t> best_so_far;
};

class keystream_format_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace gfsga
