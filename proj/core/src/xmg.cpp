#include <imcc/xmg.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace imcc
{

namespace
{

inline std::size_t hash_combine( std::size_t seed, std::size_t v ) noexcept
{
  return seed ^ ( v + 0x9e3779b97f4a7c15ull + ( seed << 6 ) + ( seed >> 2 ) );
}

inline std::size_t hash_signal( signal s ) noexcept
{
  return ( static_cast<std::size_t>( s.index ) << 1 ) | static_cast<std::size_t>( s.complemented );
}

/* Describes a structural edit: nodes to drop, redirections for dropped
   nodes, and an optional in-place gate override. */
struct edit_plan
{
  std::vector<bool> removed;
  std::vector<std::optional<signal>> alias;
  std::optional<std::pair<node_id, gate>> override_gate;
};

xmg_network apply_plan( xmg_network const& net, edit_plan const& plan )
{
  constexpr node_id unmapped = ~node_id{ 0 };
  std::vector<node_id> new_of( net.num_nodes(), unmapped );
  for ( node_id n = 0; n <= net.num_pis(); ++n )
  {
    new_of[n] = n;
  }

  auto resolve = [&]( signal s ) -> signal {
    bool compl_acc = s.complemented;
    node_id idx = s.index;
    for ( auto hops = 0u; plan.alias[idx].has_value(); ++hops )
    {
      if ( hops > net.num_nodes() )
      {
        throw std::invalid_argument( "cyclic redirection" );
      }
      compl_acc ^= plan.alias[idx]->complemented;
      idx = plan.alias[idx]->index;
    }
    if ( new_of[idx] == unmapped )
    {
      throw std::invalid_argument( "edit breaks the topological order at node " + std::to_string( idx ) );
    }
    return { new_of[idx], compl_acc };
  };

  xmg_network result( net.num_pis(), net.name() );
  result.reserve( net.size() );
  for ( auto i = 0u; i < net.size(); ++i )
  {
    node_id const n = net.gate_at( i );
    if ( plan.removed[n] )
    {
      continue;
    }
    gate g = net.gates()[i];
    if ( plan.override_gate && plan.override_gate->first == n )
    {
      g = plan.override_gate->second;
    }
    auto const a = resolve( g.fanins[0] );
    auto const b = resolve( g.fanins[1] );
    auto const c = resolve( g.fanins[2] );
    new_of[n] = result.create_gate( g.kind, a, b, c ).index;
  }
  for ( auto const& po : net.pos() )
  {
    result.create_po( resolve( po ) );
  }
  return result;
}

bool depends_on( xmg_network const& net, node_id from, node_id target )
{
  if ( from == target )
  {
    return true;
  }
  if ( !net.is_gate( from ) || from < target )
  {
    return false;
  }
  std::vector<bool> seen( net.num_nodes(), false );
  std::vector<node_id> stack{ from };
  seen[from] = true;
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    for ( auto const& f : net.gate_of( n ).fanins )
    {
      if ( f.index == target )
      {
        return true;
      }
      if ( net.is_gate( f.index ) && f.index > target && !seen[f.index] )
      {
        seen[f.index] = true;
        stack.push_back( f.index );
      }
    }
  }
  return false;
}

} // namespace

std::string_view to_string( gate_kind kind )
{
  return kind == gate_kind::maj ? "MAJ" : "XOR";
}

xmg_network::xmg_network( std::uint32_t num_pis, std::string name )
    : num_pis_( num_pis ), name_( std::move( name ) )
{
}

gate const& xmg_network::gate_of( node_id n ) const
{
  if ( !is_gate( n ) )
  {
    throw std::out_of_range( "node " + std::to_string( n ) + " is not a gate" );
  }
  return gates_[gate_index( n )];
}

signal xmg_network::create_gate( gate_kind kind, signal a, signal b, signal c )
{
  node_id const id = num_nodes();
  for ( auto const& f : { a, b, c } )
  {
    if ( f.index >= id )
    {
      throw std::invalid_argument( "fan-in " + std::to_string( f.index ) + " does not precede gate " + std::to_string( id ) );
    }
  }
  gates_.push_back( gate{ kind, { a, b, c } } );
  return { id, false };
}

void xmg_network::create_po( signal s )
{
  if ( !contains( s.index ) )
  {
    throw std::invalid_argument( "PO references unknown node " + std::to_string( s.index ) );
  }
  pos_.push_back( s );
}

void xmg_network::set_po( std::uint32_t index, signal s )
{
  if ( index >= pos_.size() || !contains( s.index ) )
  {
    throw std::out_of_range( "invalid PO update" );
  }
  pos_[index] = s;
}

std::size_t structural_hash( xmg_network const& net )
{
  std::size_t h = hash_combine( 0x51ed270b27eca2f3ull, net.num_pis() );
  for ( auto const& g : net.gates() )
  {
    h = hash_combine( h, static_cast<std::size_t>( g.kind ) );
    for ( auto const& f : g.fanins )
    {
      h = hash_combine( h, hash_signal( f ) );
    }
  }
  for ( auto const& po : net.pos() )
  {
    h = hash_combine( h, hash_signal( po ) );
  }
  return h;
}

std::pair<gate, bool> normalize_gate( gate const& g )
{
  gate r = g;
  bool out = false;
  if ( r.kind == gate_kind::xor3 )
  {
    for ( auto& f : r.fanins )
    {
      out ^= f.complemented;
      f.complemented = false;
    }
  }
  else
  {
    auto const num_compl = std::count_if( r.fanins.begin(), r.fanins.end(), []( signal s ) { return s.complemented; } );
    if ( num_compl >= 2 )
    {
      for ( auto& f : r.fanins )
      {
        f = !f;
      }
      out = true;
    }
  }
  std::sort( r.fanins.begin(), r.fanins.end() );
  return { r, out };
}

fanout_info fanouts( xmg_network const& net, node_id n )
{
  if ( !net.contains( n ) )
  {
    throw std::out_of_range( "unknown node " + std::to_string( n ) );
  }
  fanout_info info;
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const& g = net.gates()[i];
    if ( std::any_of( g.fanins.begin(), g.fanins.end(), [n]( signal s ) { return s.index == n; } ) )
    {
      info.nodes.push_back( net.gate_at( i ) );
    }
  }
  info.is_po = std::any_of( net.pos().begin(), net.pos().end(), [n]( signal s ) { return s.index == n; } );
  return info;
}

std::vector<std::vector<node_id>> fanout_lists( xmg_network const& net )
{
  std::vector<std::vector<node_id>> lists( net.num_nodes() );
  for ( auto i = 0u; i < net.size(); ++i )
  {
    node_id const n = net.gate_at( i );
    for ( auto const& f : net.gates()[i].fanins )
    {
      auto& l = lists[f.index];
      if ( l.empty() || l.back() != n )
      {
        l.push_back( n );
      }
    }
  }
  return lists;
}

std::vector<std::uint32_t> reference_counts( xmg_network const& net )
{
  std::vector<std::uint32_t> refs( net.num_nodes(), 0u );
  for ( auto const& g : net.gates() )
  {
    for ( auto const& f : g.fanins )
    {
      ++refs[f.index];
    }
  }
  for ( auto const& po : net.pos() )
  {
    ++refs[po.index];
  }
  return refs;
}

std::vector<bool> po_flags( xmg_network const& net )
{
  std::vector<bool> flags( net.num_nodes(), false );
  for ( auto const& po : net.pos() )
  {
    flags[po.index] = true;
  }
  return flags;
}

std::vector<node_id> mffc( xmg_network const& net, node_id root )
{
  if ( !net.is_gate( root ) )
  {
    throw std::invalid_argument( "MFFC root " + std::to_string( root ) + " is not a gate" );
  }
  auto refs = reference_counts( net );
  std::vector<node_id> cone{ root };
  std::vector<node_id> stack{ root };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    for ( auto const& f : net.gate_of( n ).fanins )
    {
      if ( net.is_gate( f.index ) && --refs[f.index] == 0u )
      {
        cone.push_back( f.index );
        stack.push_back( f.index );
      }
    }
  }
  std::sort( cone.begin(), cone.end() );
  return cone;
}

xmg_network substitute( xmg_network const& net, node_id old_node, signal replacement )
{
  if ( !net.is_gate( old_node ) )
  {
    throw std::invalid_argument( "only gates can be substituted" );
  }
  if ( !net.contains( replacement.index ) )
  {
    throw std::out_of_range( "unknown replacement node" );
  }
  if ( replacement == signal{ old_node, false } )
  {
    return net;
  }
  auto const cone = mffc( net, old_node );
  if ( std::binary_search( cone.begin(), cone.end(), replacement.index ) )
  {
    throw std::invalid_argument( "replacement lies inside the MFFC of the substituted node" );
  }
  if ( depends_on( net, replacement.index, old_node ) )
  {
    throw std::invalid_argument( "replacement depends on the substituted node" );
  }

  edit_plan plan;
  plan.removed.assign( net.num_nodes(), false );
  plan.alias.assign( net.num_nodes(), std::nullopt );
  for ( auto n : cone )
  {
    plan.removed[n] = true;
  }
  plan.alias[old_node] = replacement;
  return apply_plan( net, plan );
}

xmg_network replace_gate( xmg_network const& net, node_id target, gate const& replacement )
{
  if ( !net.is_gate( target ) )
  {
    throw std::invalid_argument( "only gates can be replaced" );
  }
  for ( auto const& f : replacement.fanins )
  {
    if ( f.index >= target )
    {
      throw std::invalid_argument( "replacement fan-ins must precede the target gate" );
    }
  }
  auto const cone = mffc( net, target );

  /* reference counts after the rewrite decide which cone members survive */
  auto refs = reference_counts( net );
  for ( auto const& f : net.gate_of( target ).fanins )
  {
    --refs[f.index];
  }
  for ( auto const& f : replacement.fanins )
  {
    ++refs[f.index];
  }

  edit_plan plan;
  plan.removed.assign( net.num_nodes(), false );
  plan.alias.assign( net.num_nodes(), std::nullopt );
  plan.override_gate = std::make_pair( target, replacement );
  for ( auto it = cone.rbegin(); it != cone.rend(); ++it )
  {
    auto const n = *it;
    if ( n == target || refs[n] != 0u )
    {
      continue;
    }
    plan.removed[n] = true;
    for ( auto const& f : net.gate_of( n ).fanins )
    {
      --refs[f.index];
    }
  }
  return apply_plan( net, plan );
}

xmg_network strash( xmg_network const& net )
{
  network_builder builder( net.num_pis(), net.name(), { .hash = true, .simplify = false } );
  std::vector<signal> map( net.num_nodes() );
  for ( node_id n = 0; n <= net.num_pis(); ++n )
  {
    map[n] = { n, false };
  }
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const& g = net.gates()[i];
    map[net.gate_at( i )] = builder.create( g.kind, map[g.fanins[0].index] ^ g.fanins[0].complemented,
                                            map[g.fanins[1].index] ^ g.fanins[1].complemented,
                                            map[g.fanins[2].index] ^ g.fanins[2].complemented );
  }
  for ( auto const& po : net.pos() )
  {
    builder.create_po( map[po.index] ^ po.complemented );
  }
  return std::move( builder ).take();
}

xmg_network sweep_dangling( xmg_network const& net )
{
  std::vector<bool> used( net.num_nodes(), false );
  for ( auto const& po : net.pos() )
  {
    used[po.index] = true;
  }
  for ( auto i = net.size(); i-- > 0u; )
  {
    node_id const n = net.gate_at( i );
    if ( !used[n] )
    {
      continue;
    }
    for ( auto const& f : net.gates()[i].fanins )
    {
      used[f.index] = true;
    }
  }
  edit_plan plan;
  plan.removed.assign( net.num_nodes(), false );
  plan.alias.assign( net.num_nodes(), std::nullopt );
  bool any = false;
  for ( auto i = 0u; i < net.size(); ++i )
  {
    node_id const n = net.gate_at( i );
    if ( !used[n] )
    {
      plan.removed[n] = true;
      any = true;
    }
  }
  return any ? apply_plan( net, plan ) : net;
}

xmg_network reorder( xmg_network const& net, std::span<node_id const> order )
{
  if ( order.size() != net.size() )
  {
    throw std::invalid_argument( "order is not a permutation of the gates" );
  }
  std::vector<signal> map( net.num_nodes() );
  std::vector<bool> placed( net.num_nodes(), false );
  for ( node_id n = 0; n <= net.num_pis(); ++n )
  {
    map[n] = { n, false };
    placed[n] = true;
  }
  xmg_network result( net.num_pis(), net.name() );
  result.reserve( net.size() );
  for ( auto const n : order )
  {
    if ( !net.is_gate( n ) || placed[n] )
    {
      throw std::invalid_argument( "order is not a permutation of the gates" );
    }
    auto const& g = net.gate_of( n );
    std::array<signal, 3> fi;
    for ( auto k = 0u; k < 3u; ++k )
    {
      if ( !placed[g.fanins[k].index] )
      {
        throw std::invalid_argument( "order is not topological at node " + std::to_string( n ) );
      }
      fi[k] = map[g.fanins[k].index] ^ g.fanins[k].complemented;
    }
    map[n] = result.create_gate( g.kind, fi[0], fi[1], fi[2] );
    placed[n] = true;
  }
  for ( auto const& po : net.pos() )
  {
    result.create_po( map[po.index] ^ po.complemented );
  }
  return result;
}

std::size_t network_builder::gate_hash::operator()( gate const& g ) const noexcept
{
  std::size_t h = static_cast<std::size_t>( g.kind );
  for ( auto const& f : g.fanins )
  {
    h = hash_combine( h, hash_signal( f ) );
  }
  return h;
}

network_builder::network_builder( std::uint32_t num_pis, std::string name, options opts )
    : net_( num_pis, std::move( name ) ), opts_( opts )
{
}

signal network_builder::create( gate_kind kind, signal a, signal b, signal c )
{
  auto [g, out] = normalize_gate( gate{ kind, { a, b, c } } );
  auto const& f = g.fanins;

  if ( opts_.simplify )
  {
    if ( kind == gate_kind::maj )
    {
      /* fan-ins are sorted, so equal indexes are adjacent or span the ends */
      for ( auto [x, y, z] : { std::array{ 0, 1, 2 }, std::array{ 1, 2, 0 }, std::array{ 0, 2, 1 } } )
      {
        if ( f[x].index == f[y].index )
        {
          return ( f[x].complemented == f[y].complemented ? f[x] : f[z] ) ^ out;
        }
      }
    }
    else
    {
      if ( f[0].index == f[1].index )
      {
        return f[2] ^ out;
      }
      if ( f[1].index == f[2].index )
      {
        return f[0] ^ out;
      }
    }
  }

  if ( opts_.hash )
  {
    if ( auto it = table_.find( g ); it != table_.end() )
    {
      return signal{ it->second, false } ^ out;
    }
  }
  auto const s = net_.create_gate( g.kind, f[0], f[1], f[2] );
  if ( opts_.hash )
  {
    table_.emplace( g, s.index );
  }
  return s ^ out;
}

} // namespace imcc
