/*!
  \file random.hpp
  \brief Seed derivation for independent random streams
*/

#pragma once

#include <cstdint>
#include <initializer_list>

namespace imcc
{

inline constexpr std::uint64_t splitmix64( std::uint64_t x ) noexcept
{
  x += 0x9E3779B97F4A7C15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBull;
  return x ^ ( x >> 31 );
}

/*! \brief Seed of the stream identified by `(seed, tags...)`. */
inline constexpr std::uint64_t derive_seed( std::uint64_t seed, std::initializer_list<std::uint64_t> tags ) noexcept
{
  auto s = splitmix64( seed );
  for ( auto const t : tags )
  {
    s = splitmix64( s ^ splitmix64( t + 0x632BE59BD9B4E019ull ) );
  }
  return s;
}

} // namespace imcc
