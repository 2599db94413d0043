/*!
  \file simulation.hpp
  \brief Bit-parallel simulation, resubstitution candidate checks and
         equivalence validation
*/

#pragma once

#include <imcc/xmg.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace imcc
{

/*! \brief One bit per input pattern, packed into 64-bit blocks.

  Bits beyond `width` in the last block are kept at zero.
*/
struct sim_vector
{
  std::vector<std::uint64_t> bits;
  std::uint32_t width = 0;

  sim_vector() = default;
  explicit sim_vector( std::uint32_t width );

  bool get( std::uint32_t pattern ) const { return ( bits[pattern >> 6] >> ( pattern & 63u ) ) & 1u; }
  void set( std::uint32_t pattern, bool value );
  std::uint64_t tail_mask() const noexcept;

  bool operator==( sim_vector const& ) const = default;
};

sim_vector operator~( sim_vector const& v );

/*! \brief Seeded PI patterns.

  Up to `exhaustive_pis` inputs the patterns enumerate all assignments
  (pattern i assigns bit k of i to PI k).  Otherwise 1024 uniformly random
  patterns are followed by the all-zeros and the all-ones pattern.
*/
std::vector<sim_vector> make_patterns( std::uint32_t num_pis, std::uint64_t seed,
                                       std::uint32_t exhaustive_pis = 10u, std::uint32_t random_patterns = 1024u );

/*! \brief Simulates every node; index 0 holds the constant, then PIs, then gates. */
std::vector<sim_vector> simulate( xmg_network const& net, std::span<sim_vector const> pi_patterns );

/*! \brief Simulation result of a complemented reference. */
sim_vector simulate_signal( std::vector<sim_vector> const& node_values, signal s );

/*! \brief PO functions as truth tables over all PIs (at most 20 PIs). */
std::vector<sim_vector> po_truth_tables( xmg_network const& net );

enum class match
{
  equal,
  complement_equal,
  neither
};

match check_candidate_equal( sim_vector const& root, sim_vector const& divisor );

/*! \brief True iff kind(triple with complements) ^ output_complement reproduces target. */
bool check_candidate_op( sim_vector const& target, gate_kind kind, std::array<sim_vector const*, 3> const& triple,
                         std::array<bool, 3> const& complements, bool output_complement = false );

/*! \brief Transitive fan-in PIs of `n` (structural support), ascending. */
std::vector<node_id> dependent_pis( xmg_network const& net, node_id n );

/*! \brief A new gate over existing nodes, proposed as a replacement. */
struct gate_candidate
{
  gate_kind kind = gate_kind::maj;
  std::array<signal, 3> fanins{};
  bool complemented = false;
};

using candidate = std::variant<signal, gate_candidate>;

enum class validation
{
  equivalent,
  different,
  undecided
};

struct validation_params
{
  std::uint32_t exhaustive_threshold = 20u; ///< max dependent PIs for exhaustive checking
  std::uint64_t conflict_limit = 200000u;   ///< SAT budget above the threshold
};

/*! \brief Decides whether `a` and the candidate agree on every input assignment.

  The check covers the union of both dependent PI sets.  It is exhaustive
  up to `exhaustive_threshold` PIs and uses a miter SAT check otherwise;
  an exhausted conflict budget yields `undecided`.
*/
validation validate_equivalence( xmg_network const& net, signal a, candidate const& b,
                                 validation_params const& ps = {} );

/*! \brief Checks two netlists with equal PI/PO counts PO by PO. */
validation check_equivalence( xmg_network const& a, xmg_network const& b, validation_params const& ps = {} );

} // namespace imcc
