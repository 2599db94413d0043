/*!
  \file xmg.hpp
  \brief XOR-majority graph with complemented edges

  Node 0 is the constant-zero node, nodes 1..num_pis are primary inputs and
  every following node is a 3-input MAJ or XOR gate.  Fan-in indexes are
  always smaller than the gate's own index, so the node order is a
  topological order.  Once a netlist has been scheduled the gate order is
  also the execution order: the gate with cycle c (see `cycle_of`) runs at
  clock cycle c.
*/

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace imcc
{

using node_id = std::uint32_t;

enum class gate_kind : std::uint8_t
{
  maj,
  xor3
};

std::string_view to_string( gate_kind kind );

/*! \brief Reference to a node, optionally complemented. */
struct signal
{
  node_id index = 0;
  bool complemented = false;

  constexpr signal operator!() const noexcept { return { index, !complemented }; }
  constexpr signal operator^( bool c ) const noexcept { return { index, complemented != c }; }
  constexpr auto operator<=>( signal const& ) const noexcept = default;
};

inline constexpr signal constant_zero{ 0u, false };
inline constexpr signal constant_one{ 0u, true };

struct gate
{
  gate_kind kind = gate_kind::maj;
  std::array<signal, 3> fanins{};

  constexpr bool operator==( gate const& ) const noexcept = default;
};

class xmg_network
{
public:
  xmg_network() = default;
  explicit xmg_network( std::uint32_t num_pis, std::string name = {} );

  std::uint32_t num_pis() const noexcept { return num_pis_; }
  /*! \brief Number of gates; PIs and the constant are not counted. */
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>( gates_.size() ); }
  std::uint32_t num_nodes() const noexcept { return 1u + num_pis_ + size(); }
  std::uint32_t num_pos() const noexcept { return static_cast<std::uint32_t>( pos_.size() ); }

  bool is_constant( node_id n ) const noexcept { return n == 0; }
  bool is_pi( node_id n ) const noexcept { return n >= 1 && n <= num_pis_; }
  bool is_gate( node_id n ) const noexcept { return n > num_pis_ && n < num_nodes(); }
  bool contains( node_id n ) const noexcept { return n < num_nodes(); }

  node_id pi_at( std::uint32_t i ) const noexcept { return 1u + i; }
  node_id gate_at( std::uint32_t i ) const noexcept { return 1u + num_pis_ + i; }
  std::uint32_t gate_index( node_id n ) const noexcept { return n - 1u - num_pis_; }

  /*! \brief Clock cycle (1-based) at which gate `n` executes. */
  std::uint32_t cycle_of( node_id n ) const noexcept { return n - num_pis_; }
  node_id node_at_cycle( std::uint32_t cycle ) const noexcept { return num_pis_ + cycle; }

  gate const& gate_of( node_id n ) const;
  std::span<gate const> gates() const noexcept { return gates_; }
  std::span<signal const> pos() const noexcept { return pos_; }

  signal create_gate( gate_kind kind, signal a, signal b, signal c );
  signal create_maj( signal a, signal b, signal c ) { return create_gate( gate_kind::maj, a, b, c ); }
  signal create_xor( signal a, signal b, signal c ) { return create_gate( gate_kind::xor3, a, b, c ); }
  void create_po( signal s );
  void set_po( std::uint32_t index, signal s );

  std::string const& name() const noexcept { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }

  void reserve( std::size_t gates ) { gates_.reserve( gates ); }

  bool operator==( xmg_network const& ) const = default;

private:
  std::uint32_t num_pis_ = 0;
  std::vector<gate> gates_;
  std::vector<signal> pos_;
  std::string name_;
};

/*! \brief Hash over gates and POs (the name is ignored). */
std::size_t structural_hash( xmg_network const& net );

/*! \brief Brings a gate into canonical form.

  MAJ: fan-ins sorted by (index, complement); if two or more fan-ins are
  complemented, all of them are flipped and the output complemented
  (self-duality).  XOR: complements are stripped from the fan-ins and their
  parity moves to the output.  Returns the canonical gate and the output
  complement.
*/
std::pair<gate, bool> normalize_gate( gate const& g );

struct fanout_info
{
  std::vector<node_id> nodes; ///< consuming gates, ascending, without repetition
  bool is_po = false;
};

fanout_info fanouts( xmg_network const& net, node_id n );

/*! \brief Distinct consuming gates of every node, ascending. */
std::vector<std::vector<node_id>> fanout_lists( xmg_network const& net );

/*! \brief Fan-in slot references plus PO references per node. */
std::vector<std::uint32_t> reference_counts( xmg_network const& net );

std::vector<bool> po_flags( xmg_network const& net );

/*! \brief Maximum fanout-free cone of `root`, ascending, `root` included. */
std::vector<node_id> mffc( xmg_network const& net, node_id root );

/*! \brief Redirects every consumer of `old_node` to `replacement`.

  The MFFC of `old_node` is removed and the survivors are re-indexed densely
  in their original relative order.  Throws `std::invalid_argument` if the
  replacement lies in the MFFC of `old_node`, depends on `old_node`, or would
  break the topological order of a consumer.
*/
xmg_network substitute( xmg_network const& net, node_id old_node, signal replacement );

/*! \brief Rebuilds gate `target` in place with new fan-ins.

  The gate keeps its position; the nodes of the old MFFC that are no longer
  referenced are removed.  All fan-ins of `replacement` must precede
  `target`.
*/
xmg_network replace_gate( xmg_network const& net, node_id target, gate const& replacement );

xmg_network strash( xmg_network const& net );

/*! \brief Removes gates that reach no PO, preserving order. */
xmg_network sweep_dangling( xmg_network const& net );

/*! \brief Re-indexes gates by `order` (a permutation of gate ids).

  Throws `std::invalid_argument` if the order is not topological or not a
  permutation.
*/
xmg_network reorder( xmg_network const& net, std::span<node_id const> order );

/*! \brief Incremental construction with optional hashing and trivial rules.

  With `simplify` enabled, MAJ gates with two equal (complementary) fan-ins
  collapse to that fan-in (the third fan-in), and XOR gates with two equal
  fan-ins collapse to the third one up to complement.
*/
class network_builder
{
public:
  struct options
  {
    bool hash = true;
    bool simplify = false;
  };

  network_builder( std::uint32_t num_pis, std::string name, options opts );

  signal create( gate_kind kind, signal a, signal b, signal c );
  signal create( gate const& g ) { return create( g.kind, g.fanins[0], g.fanins[1], g.fanins[2] ); }
  void create_po( signal s ) { net_.create_po( s ); }

  xmg_network const& network() const noexcept { return net_; }
  xmg_network take() && { return std::move( net_ ); }

private:
  struct gate_hash
  {
    std::size_t operator()( gate const& g ) const noexcept;
  };

  xmg_network net_;
  options opts_;
  std::unordered_map<gate, node_id, gate_hash> table_;
};

} // namespace imcc
