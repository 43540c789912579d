#include "isowalk/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace isowalk {

namespace {
constexpr double kEnterTol = 1e-11;
constexpr double kDegenerateTol = 1e-12;
constexpr double kCertTol = 1e-9;
constexpr long kPivotCap = 2000000;

struct BasisArc {
  int i, j;  // source atom, sink atom
  double flow;
};

struct Simplex {
  int n, m;
  std::vector<double> cost;  // n*m row major; empty above the cache cap
  const PointMeasure* pa = nullptr;
  const PointMeasure* pb = nullptr;
  std::vector<BasisArc> basis;
  std::vector<int> parent, parent_slot, depth, bfs_order;
  std::vector<double> pot;
  std::vector<std::vector<std::pair<int, int>>> adj;  // node -> (basis slot, other node)

  double c(int i, int j) const {
    if (!cost.empty()) return cost[static_cast<std::size_t>(i) * m + j];
    return distance(pa->space(), pa->atoms()[i].element, pb->atoms()[j].element);
  }
  int nodes() const { return n + m; }

  void rebuild_tree() {
    adj.assign(nodes(), {});
    for (int s = 0; s < static_cast<int>(basis.size()); ++s) {
      int a = basis[s].i;
      int b = n + basis[s].j;
      adj[a].push_back({s, b});
      adj[b].push_back({s, a});
    }
    parent.assign(nodes(), -1);
    parent_slot.assign(nodes(), -1);
    depth.assign(nodes(), -1);
    pot.assign(nodes(), 0.0);
    bfs_order.clear();
    bfs_order.reserve(nodes());
    std::queue<int> q;
    q.push(0);
    depth[0] = 0;
    pot[0] = 0.0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      bfs_order.push_back(u);
      for (auto [slot, w] : adj[u]) {
        if (depth[w] >= 0) continue;
        depth[w] = depth[u] + 1;
        parent[w] = u;
        parent_slot[w] = slot;
        // basic arcs satisfy u_i + v_j = c_ij
        pot[w] = c(basis[slot].i, basis[slot].j) - pot[u];
        q.push(w);
      }
    }
    if (static_cast<int>(bfs_order.size()) != nodes())
      throw std::logic_error("w1_exact: basis lost connectivity");
  }

  double reduced(int i, int j) const { return c(i, j) - pot[i] - pot[n + j]; }
};
}  // namespace

TransportPlan w1_exact(const PointMeasure& a, const PointMeasure& b) {
  if (!a.space().same_space(b.space()))
    throw std::invalid_argument("w1_exact: measures on different spaces");
  const Space& s = a.space();
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());

  if (static_cast<long>(n) * m > 100000000L)
    throw std::invalid_argument("w1_exact: support product exceeds the size cap");

  Simplex sx;
  sx.n = n;
  sx.m = m;
  sx.pa = &a;
  sx.pb = &b;
  if (static_cast<long>(n) * m <= 10000000L) {
    sx.cost.resize(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        sx.cost[static_cast<std::size_t>(i) * m + j] =
            distance(s, a.atoms()[i].element, b.atoms()[j].element);
  }

  std::vector<double> wa(n), wb(m);
  for (int i = 0; i < n; ++i) wa[i] = a.atoms()[i].weight;
  for (int j = 0; j < m; ++j) wb[j] = b.atoms()[j].weight;

  // northwest corner start: a staircase spanning tree with n+m-1 arcs
  {
    std::vector<double> ra = wa, rb = wb;
    int i = 0, j = 0;
    while (true) {
      double f = std::max(0.0, std::min(ra[i], rb[j]));
      sx.basis.push_back({i, j, f});
      ra[i] -= f;
      rb[j] -= f;
      if (i == n - 1 && j == m - 1) break;
      if (i == n - 1)
        ++j;
      else if (j == m - 1)
        ++i;
      else if (ra[i] <= 1e-15)
        ++i;
      else
        ++j;
    }
  }

  sx.rebuild_tree();

  const long nm = static_cast<long>(n) * m;
  const long block = std::max<long>(64, static_cast<long>(std::sqrt(static_cast<double>(nm))));
  long cursor = 0;
  long degenerate_run = 0;
  bool bland = false;
  int pivots = 0;

  std::vector<std::pair<int, int>> cyc;  // (basis slot, sign)
  while (true) {
    // entering arc
    int ei = -1, ej = -1;
    if (!bland) {
      double best = -kEnterTol;
      long scanned = 0;
      while (scanned < nm) {
        long stop = std::min(block, nm - scanned);
        for (long t = 0; t < stop; ++t) {
          long k = (cursor + scanned + t) % nm;
          int i = static_cast<int>(k / m), j = static_cast<int>(k % m);
          double r = sx.reduced(i, j);
          if (r < best) {
            best = r;
            ei = i;
            ej = j;
          }
        }
        scanned += stop;
        if (ei >= 0) {
          cursor = (cursor + scanned) % nm;
          break;
        }
      }
    } else {
      for (long k = 0; k < nm; ++k) {
        int i = static_cast<int>(k / m), j = static_cast<int>(k % m);
        if (sx.reduced(i, j) < -kEnterTol) {
          ei = i;
          ej = j;
          break;
        }
      }
    }
    if (ei < 0) break;  // optimal

    // cycle: entering arc plus the tree path between its endpoints
    cyc.clear();
    int u = n + ej, v = ei;  // walk from the sink end and the source end to the LCA
    std::size_t head_count;
    {
      while (sx.depth[u] > sx.depth[v]) {
        int slot = sx.parent_slot[u];
        cyc.push_back({slot, (u == sx.basis[slot].i) ? +1 : -1});
        u = sx.parent[u];
      }
      head_count = cyc.size();
      std::vector<std::pair<int, int>> tail;
      while (sx.depth[v] > sx.depth[u]) {
        int slot = sx.parent_slot[v];
        tail.push_back({slot, (v == sx.basis[slot].i) ? -1 : +1});
        v = sx.parent[v];
      }
      while (u != v) {
        int slot = sx.parent_slot[u];
        cyc.push_back({slot, (u == sx.basis[slot].i) ? +1 : -1});
        u = sx.parent[u];
        slot = sx.parent_slot[v];
        tail.push_back({slot, (v == sx.basis[slot].i) ? -1 : +1});
        v = sx.parent[v];
      }
      (void)head_count;
      cyc.insert(cyc.end(), tail.rbegin(), tail.rend());
    }

    double theta = std::numeric_limits<double>::infinity();
    int leave_slot = -1;
    for (auto [slot, sign] : cyc) {
      if (sign < 0) {
        double f = sx.basis[slot].flow;
        bool better = f < theta - 1e-18;
        bool tie = std::fabs(f - theta) <= 1e-18;
        if (better || (tie && leave_slot >= 0 &&
                       std::make_pair(sx.basis[slot].i, sx.basis[slot].j) <
                           std::make_pair(sx.basis[leave_slot].i, sx.basis[leave_slot].j))) {
          theta = f;
          leave_slot = slot;
        }
      }
    }
    if (leave_slot < 0) throw std::logic_error("w1_exact: cycle without a reverse arc");

    for (auto [slot, sign] : cyc) {
      sx.basis[slot].flow += sign * theta;
      if (sx.basis[slot].flow < 0) sx.basis[slot].flow = 0;
    }
    sx.basis[leave_slot] = {ei, ej, theta};
    sx.rebuild_tree();

    ++pivots;
    if (theta <= kDegenerateTol) {
      if (++degenerate_run > 10L * (n + m)) bland = true;
    } else {
      degenerate_run = 0;
    }
    if (pivots > kPivotCap) throw std::runtime_error("w1_exact: pivot cap exceeded");
  }

  TransportPlan plan;
  plan.pivots = pivots;
  plan.source_potential.assign(sx.pot.begin(), sx.pot.begin() + n);
  plan.sink_potential.assign(sx.pot.begin() + n, sx.pot.end());
  for (const auto& arc : sx.basis) {
    plan.cost += arc.flow * sx.c(arc.i, arc.j);
    if (arc.flow > 1e-15) plan.entries.push_back({arc.i, arc.j, arc.flow});
  }
  std::sort(plan.entries.begin(), plan.entries.end(), [](const auto& x, const auto& y) {
    return std::make_pair(x.from, x.to) < std::make_pair(y.from, y.to);
  });

  double viol = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) viol = std::max(viol, -sx.reduced(i, j));
  plan.max_dual_violation = viol;
  double dual = 0;
  for (int i = 0; i < n; ++i) dual += wa[i] * plan.source_potential[i];
  for (int j = 0; j < m; ++j) dual += wb[j] * plan.sink_potential[j];
  plan.certified = viol <= kCertTol && std::fabs(dual - plan.cost) <= kCertTol;
  return plan;
}

double w1_distance(const PointMeasure& a, const PointMeasure& b) {
  TransportPlan plan = w1_exact(a, b);
  if (!plan.certified) throw std::runtime_error("w1_distance: optimality certificate failed");
  return plan.cost;
}

namespace {
struct OracleState {
  int n, m;
  std::vector<double> cost;
  std::vector<double> supply;  // +a_i then -b_j
  std::vector<std::pair<int, int>> edges;
  std::vector<char> chosen;
  double best = std::numeric_limits<double>::infinity();

  int nodes() const { return n + m; }

  bool rest_connects(std::size_t from) const {
    std::vector<int> root(static_cast<std::size_t>(nodes()));
    for (int i = 0; i < nodes(); ++i) root[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    int comps = nodes();
    auto join = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) {
        root[a] = b;
        --comps;
      }
    };
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (chosen[e] || e >= from) join(edges[e].first, n + edges[e].second);
    return comps == 1;
  }

  void evaluate_tree() {
    // leaf peeling: each leaf's residual rides out on its only edge
    std::vector<double> res = supply;
    std::vector<int> deg(static_cast<std::size_t>(nodes()), 0);
    std::vector<std::vector<std::size_t>> inc(static_cast<std::size_t>(nodes()));
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (chosen[e]) {
        ++deg[edges[e].first];
        ++deg[n + edges[e].second];
        inc[edges[e].first].push_back(e);
        inc[static_cast<std::size_t>(n) + edges[e].second].push_back(e);
      }
    std::vector<char> done_edge(edges.size(), 0), done_node(static_cast<std::size_t>(nodes()), 0);
    std::vector<int> stack;
    for (int v = 0; v < nodes(); ++v)
      if (deg[v] == 1) stack.push_back(v);
    double total = 0;
    bool feasible = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (done_node[v] || deg[v] != 1) continue;
      done_node[v] = 1;
      for (std::size_t e : inc[v]) {
        if (done_edge[e]) continue;
        done_edge[e] = 1;
        int other = (v == edges[e].first) ? n + edges[e].second : edges[e].first;
        double flow = (v < n) ? res[v] : -res[v];  // oriented source -> sink
        if (flow < -1e-15) {
          feasible = false;
          break;
        }
        total += std::max(0.0, flow) *
                 cost[static_cast<std::size_t>(edges[e].first) * m + edges[e].second];
        res[other] += res[v];
        res[v] = 0;
        if (--deg[other] == 1) stack.push_back(other);
        --deg[v];
        break;
      }
      if (!feasible) break;
    }
    if (feasible && total < best) best = total;
  }

  void rec(std::size_t idx, int picked) {
    if (picked == nodes() - 1) {
      evaluate_tree();
      return;
    }
    if (idx == edges.size()) return;
    if (static_cast<int>(edges.size() - idx) < nodes() - 1 - picked) return;
    // include, unless it closes a cycle with the picked edges
    {
      std::vector<int> root(static_cast<std::size_t>(nodes()));
      for (int i = 0; i < nodes(); ++i) root[static_cast<std::size_t>(i)] = i;
      auto find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
      };
      bool cycle = false;
      for (std::size_t e = 0; e < idx; ++e)
        if (chosen[e]) {
          int a = find(edges[e].first), b = find(n + edges[e].second);
          if (a != b) root[a] = b;
        }
      if (find(edges[idx].first) == find(n + edges[idx].second)) cycle = true;
      if (!cycle) {
        chosen[idx] = 1;
        rec(idx + 1, picked + 1);
        chosen[idx] = 0;
      }
    }
    // exclude, only while the remaining edges can still span
    if (rest_connects(idx + 1)) rec(idx + 1, picked);
  }
};
}  // namespace

double w1_oracle(const PointMeasure& a, const PointMeasure& b) {
  if (!a.space().same_space(b.space()))
    throw std::invalid_argument("w1_oracle: measures on different spaces");
  if (a.size() > 6 || b.size() > 6)
    throw std::invalid_argument("w1_oracle: supports of size <= 6 only");
  OracleState st;
  st.n = static_cast<int>(a.size());
  st.m = static_cast<int>(b.size());
  st.cost.resize(static_cast<std::size_t>(st.n) * st.m);
  for (int i = 0; i < st.n; ++i)
    for (int j = 0; j < st.m; ++j)
      st.cost[static_cast<std::size_t>(i) * st.m + j] =
          distance(a.space(), a.atoms()[i].element, b.atoms()[j].element);
  for (int i = 0; i < st.n; ++i) st.supply.push_back(a.atoms()[i].weight);
  for (int j = 0; j < st.m; ++j) st.supply.push_back(-b.atoms()[j].weight);
  for (int i = 0; i < st.n; ++i)
    for (int j = 0; j < st.m; ++j) st.edges.push_back({i, j});
  st.chosen.assign(st.edges.size(), 0);
  st.rec(0, 0);
  if (!std::isfinite(st.best)) throw std::logic_error("w1_oracle: no feasible tree found");
  return st.best;
}

namespace {
template <class T, class EqFn>
double tv_impl(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, EqFn eq) {
  if (!a.space().same_space(b.space()))
    throw std::invalid_argument("tv_distance: measures on different spaces");
  std::vector<char> used(b.size(), 0);
  double total = 0;
  for (const auto& x : a.atoms()) {
    double wb = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && eq(x.element, b.atoms()[j].element)) {
        wb = b.atoms()[j].weight;
        used[j] = 1;
        break;
      }
    }
    total += std::fabs(x.weight - wb);
  }
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!used[j]) total += b.atoms()[j].weight;
  return 0.5 * total;
}
}  // namespace

double tv_distance(const PointMeasure& a, const PointMeasure& b) {
  if (!a.space().is_finite())
    throw std::invalid_argument("tv_distance: finite carrier required");
  return tv_impl(a, b, [&](const SpacePoint& x, const SpacePoint& y) {
    return points_equal(a.space(), x, y);
  });
}

double tv_distance(const IsoMeasure& a, const IsoMeasure& b) {
  if (!a.space().is_finite())
    throw std::invalid_argument("tv_distance: finite carrier required");
  return tv_impl(a, b, [&](const IsometryElement& x, const IsometryElement& y) {
    return isometries_equal(a.space(), x, y);
  });
}

}  // namespace isowalk
