#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gfsga
{

/*! \brief Runs fn(i) for i in [0, count) on up to `workers` threads.

  Tasks are claimed dynamically; the first exception thrown by any task is
  rethrown after all threads have joined. With workers <= 1 the loop runs
  inline in index order.
*/
template<class Fn>
void parallel_for( std::size_t count, std::size_t workers, Fn&& fn )
{
  workers = std::max<std::size_t>( 1, std::min( workers, count ) );
  if ( workers <= 1 )
  {
    for ( std::size_t i = 0; i < count; ++i )
    {
      fn( i );
    }
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    for ( ;; )
    {
      auto const i = next.fetch_add( 1 );
      if ( i >= count )
        return;
      try
      {
        fn( i );
      }
      catch ( ... )
      {
        std::lock_guard lock( error_mutex );
        if ( !error )
          error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve( workers );
  for ( std::size_t w = 0; w < workers; ++w )
  {
    pool.emplace_back( body );
  }
  for ( auto& t : pool )
  {
    t.join();
  }
  if ( error )
  {
    std::rethrow_exception( error );
  }
}

/* maps fn over [0, count) and keeps results in index order */
template<class Fn>
auto parallel_map( std::size_t count, std::size_t workers, Fn&& fn )
{
  using result_t = decltype( fn( std::size_t{ 0 } ) );
  std::vector<result_t> out( count );
  parallel_for( count, workers, [&]( std::size_t i ) { out[i] = fn( i ); } );
  return out;
}

} // namespace gfsga
