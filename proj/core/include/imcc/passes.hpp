/*!
  \file passes.hpp
  \brief Pool of function-preserving XMG optimization passes

  - `constant-propagate`: rebuild with trivial rules, M(a,a,b) = a,
    M(a,!a,b) = b, X(a,a,b) = b, constants included.
  - `dedup-strash`: structural hashing.
  - `window-resub-0`: replace a gate by an existing divisor or a constant.
  - `window-resub-1`: replace a gate by one new gate over three divisors;
    accepted when it saves a gate and, with probability 1/4, when it is
    size-neutral.
  - `maj-rewrite`: M(a,b,M(a,b,z)) = M(a,b,z), M(a,b,M(a,!b,z)) = a,
    M(M(x,y,u),M(x,y,v),z) = M(x,y,M(u,v,z)), plus seeded size-neutral
    reshaping M(x,u,M(y,u,z)) = M(z,u,M(y,u,x)).
  - `xor-rewrite`: X(a,b,X(a,d,e)) = X(b,d,e), X(a,0,X(c,d,0)) = X(a,c,d),
    and XOR extraction from two-level MAJ cones over two leaves.

  Resubstitution windows are the transitive fan-in of a root capped at 12
  gates; divisors are the window leaves and the window gates outside the
  root's MFFC.  Every candidate passes a simulation filter and a full
  equivalence check before it is applied.

  No pass returns a larger netlist; a pass that would grow the netlist
  returns its input (swept).
*/

#pragma once

#include <imcc/xmg.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace imcc
{

enum class pass_id : std::uint8_t
{
  constant_propagate,
  dedup_strash,
  window_resub_0,
  window_resub_1,
  maj_rewrite,
  xor_rewrite
};

inline constexpr std::array<pass_id, 6> all_passes{ pass_id::constant_propagate, pass_id::dedup_strash,
                                                    pass_id::window_resub_0,     pass_id::window_resub_1,
                                                    pass_id::maj_rewrite,        pass_id::xor_rewrite };

std::string_view to_string( pass_id id );
std::optional<pass_id> parse_pass_id( std::string_view name );

inline constexpr std::uint32_t resub_window_gates = 12u;

xmg_network run_pass( xmg_network const& net, pass_id id, std::uint64_t seed );

/*! \brief dedup-strash, constant-propagate and window-resub-0 to a fixpoint, repeated until nothing changes. */
xmg_network cleanup( xmg_network const& net );

/*! \brief `k` passes drawn uniformly from the pool, then `cleanup`. */
xmg_network run_random_sequence( xmg_network const& net, std::uint32_t k, std::uint64_t seed );

} // namespace imcc
