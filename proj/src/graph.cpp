#include "rvsim/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace rvsim {

PortLabeledGraph::PortLabeledGraph(std::vector<std::vector<PortTarget>> adjacency)
    : adj_(std::move(adjacency)) {
  const std::int32_t n = static_cast<std::int32_t>(adj_.size());
  if (n < 1) throw GraphError("graph must have at least one node");
  for (std::int32_t v = 0; v < n; ++v) {
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(adj_[v].size()); ++p) {
      PortTarget t = adj_[v][p];
      if (t.node < 0 || t.node >= n)
        throw GraphError("adjacency target out of range at node " + std::to_string(v));
      if (t.node == v) throw GraphError("self-loop at node " + std::to_string(v));
      if (t.port < 0 || t.port >= static_cast<std::int32_t>(adj_[t.node].size()))
        throw GraphError("entry port out of range at node " + std::to_string(v));
      PortTarget back = adj_[t.node][t.port];
      if (!(back.node == v && back.port == p))
        throw GraphError("asymmetric adjacency at node " + std::to_string(v) +
                         " port " + std::to_string(p));
    }
  }
  // Connectivity from node 0.
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::int32_t> stack{0};
  seen[0] = 1;
  std::int32_t reached = 1;
  while (!stack.empty()) {
    std::int32_t v = stack.back();
    stack.pop_back();
    for (const PortTarget& t : adj_[v]) {
      if (!seen[t.node]) {
        seen[t.node] = 1;
        ++reached;
        stack.push_back(t.node);
      }
    }
  }
  if (reached != n) throw GraphError("graph is not connected");

  for (std::int32_t v = 0; v < n; ++v) {
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(adj_[v].size()); ++p) {
      const PortTarget& t = adj_[v][p];
      if (v < t.node || (v == t.node && p < t.port)) {
        edges_.push_back(EdgeRef{v, p, t.node, t.port});
      }
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edge_count_ = static_cast<std::int32_t>(edges_.size());
}

std::int32_t PortLabeledGraph::edge_index(const EdgeRef& e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || !(*it == e)) throw GraphError("unknown edge");
  return static_cast<std::int32_t>(it - edges_.begin());
}

std::string PortLabeledGraph::serialize() const {
  std::ostringstream out;
  out << "graph " << node_count() << "\n";
  for (std::int32_t v = 0; v < node_count(); ++v)
    out << "v " << v << " " << degree(v) << "\n";
  for (std::int32_t v = 0; v < node_count(); ++v) {
    for (std::int32_t p = 0; p < degree(v); ++p) {
      const PortTarget& t = adj_[v][p];
      out << "e " << v << " " << p << " " << t.node << " " << t.port << "\n";
    }
  }
  return out.str();
}

namespace {

struct Tokenizer {
  explicit Tokenizer(const std::string& text) : text(text) {}
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  // Returns the next non-comment, non-empty line with its line number.
  std::optional<std::pair<std::string, int>> next_line() {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string raw = text.substr(pos, end - pos);
      int this_line = line;
      pos = end + (end < text.size() ? 1 : 0);
      ++line;
      std::size_t first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos || raw[first] == '#') continue;
      return std::make_pair(raw, this_line);
    }
    return std::nullopt;
  }
};

long parse_int_field(const std::string& line, int line_no, std::size_t& cursor) {
  while (cursor < line.size() && (line[cursor] == ' ' || line[cursor] == '\t')) ++cursor;
  if (cursor >= line.size())
    throw ParseError(line_no, static_cast<int>(cursor) + 1, "missing integer field");
  std::size_t start = cursor;
  if (line[cursor] == '-') ++cursor;
  while (cursor < line.size() && line[cursor] >= '0' && line[cursor] <= '9') ++cursor;
  if (cursor == start || (line[start] == '-' && cursor == start + 1))
    throw ParseError(line_no, static_cast<int>(start) + 1, "expected integer");
  return std::stol(line.substr(start, cursor - start));
}

}  // namespace

PortLabeledGraph PortLabeledGraph::parse(const std::string& text) {
  Tokenizer tok(text);
  auto header = tok.next_line();
  if (!header) throw ParseError(1, 1, "empty graph text");
  {
    std::istringstream hs(header->first);
    std::string kw;
    hs >> kw;
    if (kw != "graph")
      throw ParseError(header->second, 1, "expected 'graph <n>' header");
  }
  std::size_t cur = header->first.find("graph") + 5;
  long n = parse_int_field(header->first, header->second, cur);
  if (n < 1) throw ParseError(header->second, 1, "node count must be positive");

  std::vector<long> degrees(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<PortTarget>> adj(static_cast<std::size_t>(n));
  std::vector<std::vector<char>> port_seen(static_cast<std::size_t>(n));

  for (long i = 0; i < n; ++i) {
    auto l = tok.next_line();
    if (!l) throw ParseError(tok.line, 1, "expected 'v' line");
    if (l->first.find_first_not_of(" \t") == std::string::npos ||
        l->first[l->first.find_first_not_of(" \t")] != 'v')
      throw ParseError(l->second, 1, "expected 'v <id> <deg>' line");
    std::size_t c = l->first.find('v') + 1;
    long id = parse_int_field(l->first, l->second, c);
    long deg = parse_int_field(l->first, l->second, c);
    if (id < 0 || id >= n) throw ParseError(l->second, 1, "node id out of range");
    if (degrees[static_cast<std::size_t>(id)] != -1)
      throw ParseError(l->second, 1, "duplicate node declaration");
    if (deg < 0) throw ParseError(l->second, 1, "negative degree");
    degrees[static_cast<std::size_t>(id)] = deg;
    adj[static_cast<std::size_t>(id)].assign(static_cast<std::size_t>(deg),
                                             PortTarget{});
    port_seen[static_cast<std::size_t>(id)].assign(static_cast<std::size_t>(deg), 0);
  }

  while (auto l = tok.next_line()) {
    std::size_t first = l->first.find_first_not_of(" \t");
    if (l->first[first] != 'e')
      throw ParseError(l->second, static_cast<int>(first) + 1,
                       "expected 'e <v> <p> <u> <q>' line");
    std::size_t c = first + 1;
    long v = parse_int_field(l->first, l->second, c);
    long p = parse_int_field(l->first, l->second, c);
    long u = parse_int_field(l->first, l->second, c);
    long q = parse_int_field(l->first, l->second, c);
    if (v < 0 || v >= n || u < 0 || u >= n)
      throw ParseError(l->second, 1, "node id out of range");
    if (p < 0 || p >= degrees[static_cast<std::size_t>(v)])
      throw ParseError(l->second, 1, "port out of declared degree range");
    if (q < 0 || q >= degrees[static_cast<std::size_t>(u)])
      throw ParseError(l->second, 1, "entry port out of declared degree range");
    if (port_seen[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)])
      throw ParseError(l->second, 1, "duplicate port " + std::to_string(p) +
                                         " at node " + std::to_string(v));
    port_seen[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] = 1;
    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] =
        PortTarget{static_cast<std::int32_t>(u), static_cast<std::int32_t>(q)};
  }

  for (long v = 0; v < n; ++v) {
    for (long p = 0; p < degrees[static_cast<std::size_t>(v)]; ++p) {
      if (!port_seen[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)])
        throw ParseError(tok.line, 1,
                         "missing port " + std::to_string(p) + " at node " +
                             std::to_string(v));
    }
  }

  try {
    return PortLabeledGraph(std::move(adj));
  } catch (const GraphError& e) {
    throw ParseError(tok.line, 1, e.what());
  }
}

std::string PortLabeledGraph::topology_key() const {
  const std::int32_t n = node_count();
  std::vector<std::int32_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string key(static_cast<std::size_t>(n * n), '0');
    bool degenerate = false;
    for (std::int32_t v = 0; v < n && !degenerate; ++v) {
      for (const PortTarget& t : adj_[v]) {
        key[static_cast<std::size_t>(perm[v] * n + perm[t.node])] = '1';
      }
    }
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string PortLabeledGraph::rooted_canonical_form(std::int32_t root) const {
  const std::int32_t n = node_count();
  std::vector<std::int32_t> order(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> bfs{root};
  order[static_cast<std::size_t>(root)] = 0;
  std::int32_t next = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    std::int32_t v = bfs[i];
    for (const PortTarget& t : adj_[v]) {
      if (order[static_cast<std::size_t>(t.node)] == -1) {
        order[static_cast<std::size_t>(t.node)] = next++;
        bfs.push_back(t.node);
      }
    }
  }
  std::ostringstream out;
  out << n << ";";
  std::vector<std::int32_t> inverse(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) inverse[static_cast<std::size_t>(order[v])] = v;
  for (std::int32_t i = 0; i < n; ++i) {
    std::int32_t v = inverse[static_cast<std::size_t>(i)];
    out << "[";
    for (const PortTarget& t : adj_[v])
      out << order[static_cast<std::size_t>(t.node)] << "." << t.port << ",";
    out << "]";
  }
  return out.str();
}

bool isomorphic_rooted(const PortLabeledGraph& g1, std::int32_t home1,
                       const PortLabeledGraph& g2, std::int32_t home2) {
  const std::int32_t n = g1.node_count();
  if (n != g2.node_count()) return false;
  if (g1.degree(home1) != g2.degree(home2)) return false;
  std::vector<std::int32_t> map(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  map[static_cast<std::size_t>(home1)] = home2;
  used[static_cast<std::size_t>(home2)] = 1;

  // Port-preserving maps are rigid once the root is fixed: propagate by BFS
  // and check consistency.
  std::vector<std::int32_t> queue{home1};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::int32_t v = queue[qi];
    std::int32_t w = map[static_cast<std::size_t>(v)];
    if (g1.degree(v) != g2.degree(w)) return false;
    for (std::int32_t p = 0; p < g1.degree(v); ++p) {
      PortTarget t1 = g1.step(v, p);
      PortTarget t2 = g2.step(w, p);
      if (t1.port != t2.port) return false;
      std::int32_t& m = map[static_cast<std::size_t>(t1.node)];
      if (m == -1) {
        if (used[static_cast<std::size_t>(t2.node)]) return false;
        m = t2.node;
        used[static_cast<std::size_t>(t2.node)] = 1;
        queue.push_back(t1.node);
      } else if (m != t2.node) {
        return false;
      }
    }
  }
  return static_cast<std::int32_t>(queue.size()) == n;
}

bool isomorphic_port_preserving(const PortLabeledGraph& g1, const PortLabeledGraph& g2) {
  if (g1.node_count() != g2.node_count()) return false;
  for (std::int32_t root2 = 0; root2 < g2.node_count(); ++root2) {
    if (isomorphic_rooted(g1, 0, g2, root2)) return true;
  }
  return false;
}

std::pair<PortLabeledGraph, std::int32_t> subdivide_edge(const PortLabeledGraph& g,
                                                         const EdgeRef& edge) {
  const std::int32_t n = g.node_count();
  const std::int32_t w = n;
  std::vector<std::vector<PortTarget>> adj(static_cast<std::size_t>(n) + 1);
  for (std::int32_t v = 0; v < n; ++v) {
    adj[static_cast<std::size_t>(v)].resize(static_cast<std::size_t>(g.degree(v)));
    for (std::int32_t p = 0; p < g.degree(v); ++p)
      adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] = g.step(v, p);
  }
  // w's port 0 faces the canonical origin endpoint.
  adj[static_cast<std::size_t>(edge.a)][static_cast<std::size_t>(edge.a_port)] =
      PortTarget{w, 0};
  adj[static_cast<std::size_t>(edge.b)][static_cast<std::size_t>(edge.b_port)] =
      PortTarget{w, 1};
  adj[static_cast<std::size_t>(w)] = {PortTarget{edge.a, edge.a_port},
                                      PortTarget{edge.b, edge.b_port}};
  return {PortLabeledGraph(std::move(adj)), w};
}

PortLabeledGraph unsubdivide_node(const PortLabeledGraph& g, std::int32_t w) {
  if (g.degree(w) != 2) throw GraphError("unsubdivide target must have degree 2");
  PortTarget s0 = g.step(w, 0);
  PortTarget s1 = g.step(w, 1);
  if (s0.node == w || s1.node == w) throw GraphError("unsubdivide of a loop");
  const std::int32_t n = g.node_count();
  auto renum = [&](std::int32_t v) { return v < w ? v : v - 1; };
  std::vector<std::vector<PortTarget>> adj(static_cast<std::size_t>(n) - 1);
  for (std::int32_t v = 0; v < n; ++v) {
    if (v == w) continue;
    auto& row = adj[static_cast<std::size_t>(renum(v))];
    row.resize(static_cast<std::size_t>(g.degree(v)));
    for (std::int32_t p = 0; p < g.degree(v); ++p) {
      PortTarget t = g.step(v, p);
      if (t.node == w) {
        PortTarget far = t.port == 0 ? s1 : s0;
        row[static_cast<std::size_t>(p)] = PortTarget{renum(far.node), far.port};
      } else {
        row[static_cast<std::size_t>(p)] = PortTarget{renum(t.node), t.port};
      }
    }
  }
  return PortLabeledGraph(std::move(adj));
}

}  // namespace rvsim
