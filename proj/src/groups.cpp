#include "isowalk/groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "isowalk/rng.hpp"

namespace isowalk {

FiniteGroupTable::FiniteGroupTable(std::vector<std::vector<int>> table, std::string name)
    : n_(static_cast<int>(table.size())), name_(std::move(name)) {
  if (n_ == 0) throw std::invalid_argument("group table: empty");
  table_.reserve(static_cast<std::size_t>(n_) * n_);
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n_)
      throw std::invalid_argument("group table: not square");
    for (int v : row) {
      if (v < 0 || v >= n_) throw std::invalid_argument("group table: entry out of range");
      table_.push_back(v);
    }
  }
  validate();
}

void FiniteGroupTable::validate() const {
  // latin square: every row and column is a permutation
  std::vector<char> seen(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n_; ++j) {
      int v = table_[static_cast<std::size_t>(i) * n_ + j];
      if (seen[v]) throw std::invalid_argument("group table: row is not a permutation");
      seen[v] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n_; ++j) {
      int v = table_[static_cast<std::size_t>(j) * n_ + i];
      if (seen[v]) throw std::invalid_argument("group table: column is not a permutation");
      seen[v] = 1;
    }
  }

  // two-sided identity
  int id = -1;
  for (int e = 0; e < n_; ++e) {
    bool ok = true;
    for (int j = 0; j < n_ && ok; ++j)
      ok = mul(e, j) == j && mul(j, e) == j;
    if (ok) {
      id = e;
      break;
    }
  }
  if (id < 0) throw std::invalid_argument("group table: no identity element");
  const_cast<FiniteGroupTable*>(this)->id_ = id;

  // associativity: exhaustive for small orders, randomized otherwise
  if (n_ <= 24) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw std::invalid_argument("group table: not associative");
  } else {
    RngStream rs = RngStream::derive(0x61737363ULL, {static_cast<std::uint64_t>(n_)});
    for (int k = 0; k < 100000; ++k) {
      int a = rs.uniform_int(n_), b = rs.uniform_int(n_), c = rs.uniform_int(n_);
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        throw std::invalid_argument("group table: not associative");
    }
  }

  // two-sided inverses (unique by the latin property)
  auto& inv = const_cast<FiniteGroupTable*>(this)->inv_;
  inv.assign(static_cast<std::size_t>(n_), -1);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (mul(a, b) == id_ && mul(b, a) == id_) {
        inv[a] = b;
        break;
      }
    }
    if (inv[a] < 0) throw std::invalid_argument("group table: missing inverse");
  }
}

std::vector<std::vector<int>> FiniteGroupTable::rows() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i)
    out[i].assign(table_.begin() + static_cast<std::size_t>(i) * n_,
                  table_.begin() + static_cast<std::size_t>(i + 1) * n_);
  return out;
}

std::vector<int> FiniteGroupTable::left_shift_perm(int g) const {
  if (g < 0 || g >= n_) throw std::invalid_argument("left_shift_perm: bad element");
  std::vector<int> p(static_cast<std::size_t>(n_));
  for (int x = 0; x < n_; ++x) p[x] = mul(g, x);
  return p;
}

FiniteGroupTable FiniteGroupTable::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic: n must be >= 1");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return FiniteGroupTable(std::move(t), "z" + std::to_string(n));
}

std::vector<int> FiniteGroupTable::perm_of_index(int n, int index) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int k = 0; k < index; ++k)
    if (!std::next_permutation(p.begin(), p.end()))
      throw std::invalid_argument("perm_of_index: index out of range");
  return p;
}

int FiniteGroupTable::index_of_perm(std::span<const int> one_line) {
  // lexicographic rank via the lehmer code
  int n = static_cast<int>(one_line.size());
  int rank = 0;
  int fact = 1;
  for (int k = 2; k <= n - 1; ++k) fact *= k;  // (n-1)!
  for (int i = 0; i < n - 1; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (one_line[j] < one_line[i]) ++smaller;
    rank += smaller * fact;
    if (n - 1 - i > 0) fact /= std::max(1, n - 1 - i);
  }
  return rank;
}

FiniteGroupTable FiniteGroupTable::symmetric(int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("symmetric: n must be in [1,5]");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  int order = static_cast<int>(perms.size());
  std::map<std::vector<int>, int> rank;
  for (int i = 0; i < order; ++i) rank[perms[i]] = i;
  std::vector<std::vector<int>> t(static_cast<std::size_t>(order), std::vector<int>(order));
  std::vector<int> prod(static_cast<std::size_t>(n));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      for (int x = 0; x < n; ++x) prod[x] = perms[a][perms[b][x]];
      t[a][b] = rank.at(prod);
    }
  return FiniteGroupTable(std::move(t), "s" + std::to_string(n));
}

FiniteGroupTable FiniteGroupTable::dihedral(int n) {
  if (n < 1 || n > 12) throw std::invalid_argument("dihedral: n must be in [1,12]");
  // element (s,k): x -> k + s*x mod n, s = +1 for 0..n-1, -1 for n..2n-1.
  // (s1,k1)*(s2,k2) acts x -> k1 + s1*(k2 + s2*x) = (k1 + s1*k2, s1*s2).
  int order = 2 * n;
  auto enc = [n](int s, int k) { return (s > 0 ? 0 : n) + ((k % n) + n) % n; };
  std::vector<std::vector<int>> t(static_cast<std::size_t>(order), std::vector<int>(order));
  for (int a = 0; a < order; ++a) {
    int s1 = a < n ? 1 : -1, k1 = a % n;
    for (int b = 0; b < order; ++b) {
      int s2 = b < n ? 1 : -1, k2 = b % n;
      t[a][b] = enc(s1 * s2, k1 + s1 * k2);
    }
  }
  return FiniteGroupTable(std::move(t), "d" + std::to_string(n));
}

bool is_subgroup(const FiniteGroupTable& g, std::span<const int> elems) {
  if (elems.empty()) return false;
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  for (int e : elems) {
    if (e < 0 || e >= g.order()) return false;
    in[e] = 1;
  }
  if (!in[g.identity()]) return false;
  for (int a : elems) {
    if (!in[g.inverse(a)]) return false;
    for (int b : elems)
      if (!in[g.mul(a, b)]) return false;
  }
  return true;
}

bool is_normal_subgroup(const FiniteGroupTable& g, std::span<const int> elems) {
  if (!is_subgroup(g, elems)) return false;
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  for (int e : elems) in[e] = 1;
  for (int x = 0; x < g.order(); ++x)
    for (int h : elems)
      if (!in[g.mul(g.mul(x, h), g.inverse(x))]) return false;
  return true;
}

SubgroupRecord generated_subgroup(const FiniteGroupTable& g, std::span<const int> generators) {
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<int> frontier;
  auto add = [&](int e) {
    if (!in[e]) {
      in[e] = 1;
      frontier.push_back(e);
    }
  };
  add(g.identity());
  for (int e : generators) {
    if (e < 0 || e >= g.order())
      throw std::invalid_argument("generated_subgroup: element out of range");
    add(e);
    add(g.inverse(e));
  }
  // closure under products
  std::vector<int> members;
  while (!frontier.empty()) {
    int a = frontier.back();
    frontier.pop_back();
    members.push_back(a);
    for (int x = 0; x < g.order(); ++x) {
      if (!in[x]) continue;
      add(g.mul(a, x));
      add(g.mul(x, a));
    }
  }
  std::sort(members.begin(), members.end());
  SubgroupRecord rec;
  rec.elements = std::move(members);
  rec.normal = is_normal_subgroup(g, rec.elements);
  return rec;
}

std::vector<SubgroupRecord> all_subgroups(const FiniteGroupTable& g) {
  if (g.order() > 48) throw std::invalid_argument("all_subgroups: order > 48 unsupported");
  std::set<std::vector<int>> found;
  found.insert({g.identity()});
  for (int e = 0; e < g.order(); ++e)
    found.insert(generated_subgroup(g, std::vector<int>{e}).elements);
  // join-closure: every subgroup is a join of cyclic subgroups
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> snapshot(found.begin(), found.end());
    for (std::size_t i = 0; i < snapshot.size(); ++i)
      for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
        std::vector<int> gens = snapshot[i];
        gens.insert(gens.end(), snapshot[j].begin(), snapshot[j].end());
        auto join = generated_subgroup(g, gens).elements;
        if (found.insert(join).second) grew = true;
      }
  }
  std::vector<SubgroupRecord> out;
  out.reserve(found.size());
  for (const auto& elems : found) {
    SubgroupRecord rec;
    rec.elements = elems;
    rec.normal = is_normal_subgroup(g, rec.elements);
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  });
  return out;
}

namespace {
void check_support(const FiniteGroupTable& g, std::span<const int> support) {
  if (support.empty()) throw std::invalid_argument("empty support");
  for (int s : support)
    if (s < 0 || s >= g.order()) throw std::invalid_argument("support element out of range");
}

std::vector<int> quotient_set(const FiniteGroupTable& g, std::span<const int> support) {
  int s0inv = g.inverse(support[0]);
  std::vector<int> q;
  q.reserve(support.size());
  for (int s : support) q.push_back(g.mul(s0inv, s));
  return q;
}
}  // namespace

bool is_adapted(const FiniteGroupTable& g, std::span<const int> support) {
  check_support(g, support);
  return static_cast<int>(generated_subgroup(g, support).elements.size()) == g.order();
}

std::optional<CosetWitness> coset_trap(const FiniteGroupTable& g, std::span<const int> support) {
  check_support(g, support);
  SubgroupRecord h0 = generated_subgroup(g, quotient_set(g, support));
  if (static_cast<int>(h0.elements.size()) == g.order()) return std::nullopt;
  return CosetWitness{support[0], std::move(h0)};
}

std::optional<CosetWitness> normal_coset_trap(const FiniteGroupTable& g,
                                              std::span<const int> support) {
  check_support(g, support);
  // normal closure: close the quotient set under products, inverses and
  // conjugation by every group element
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<int> frontier;
  auto add = [&](int e) {
    if (!in[e]) {
      in[e] = 1;
      frontier.push_back(e);
    }
  };
  add(g.identity());
  for (int q : quotient_set(g, support)) add(q);
  std::vector<int> members;
  while (!frontier.empty()) {
    int a = frontier.back();
    frontier.pop_back();
    members.push_back(a);
    add(g.inverse(a));
    for (int x = 0; x < g.order(); ++x) {
      add(g.mul(g.mul(x, a), g.inverse(x)));
      if (in[x]) {
        add(g.mul(a, x));
        add(g.mul(x, a));
      }
    }
  }
  if (static_cast<int>(members.size()) == g.order()) return std::nullopt;
  std::sort(members.begin(), members.end());
  SubgroupRecord rec;
  rec.elements = std::move(members);
  rec.normal = true;
  return CosetWitness{support[0], std::move(rec)};
}

WitnessScan deterministic_image_witnesses(int n_points,
                                          std::span<const std::vector<int>> support_perms,
                                          std::size_t max_witnesses) {
  if (n_points < 1 || n_points > 20)
    throw std::invalid_argument("deterministic_image_witnesses: need 1 <= n_points <= 20");
  if (support_perms.empty())
    throw std::invalid_argument("deterministic_image_witnesses: empty support");
  for (const auto& p : support_perms) {
    if (static_cast<int>(p.size()) != n_points)
      throw std::invalid_argument("deterministic_image_witnesses: permutation size mismatch");
    std::vector<char> seen(static_cast<std::size_t>(n_points), 0);
    for (int v : p) {
      if (v < 0 || v >= n_points || seen[v])
        throw std::invalid_argument("deterministic_image_witnesses: not a permutation");
      seen[v] = 1;
    }
  }

  // A has a common image under all support permutations iff A is invariant
  // under every p0^-1 p, i.e. A is a union of orbits of the generated group.
  // Orbits are the connected components of the edges x -- (p0^-1 p)(x).
  const auto& p0 = support_perms[0];
  std::vector<int> p0inv(static_cast<std::size_t>(n_points));
  for (int x = 0; x < n_points; ++x) p0inv[p0[x]] = x;

  std::vector<int> root(static_cast<std::size_t>(n_points));
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& p : support_perms)
    for (int x = 0; x < n_points; ++x) root[find(p0inv[p[x]])] = find(x);

  std::vector<int> comp(static_cast<std::size_t>(n_points), -1);
  int n_orbits = 0;
  for (int x = 0; x < n_points; ++x) {
    int r = find(x);
    if (comp[r] < 0) comp[r] = n_orbits++;
  }
  for (int x = 0; x < n_points; ++x) comp[x] = comp[find(x)];

  WitnessScan scan;
  if (n_orbits >= 63) throw std::runtime_error("deterministic_image_witnesses: too many orbits");
  std::uint64_t total = (1ULL << n_orbits) - 2;  // proper nonempty unions
  scan.candidate_count = total;
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << n_orbits); ++mask) {
    if (scan.witnesses.size() >= max_witnesses) {
      scan.truncated = true;
      break;
    }
    ImageWitness w;
    for (int x = 0; x < n_points; ++x)
      if (mask & (1ULL << comp[x])) w.a.push_back(x);
    w.b.reserve(w.a.size());
    for (int x : w.a) w.b.push_back(p0[x]);
    std::sort(w.b.begin(), w.b.end());
    scan.witnesses.push_back(std::move(w));
  }
  return scan;
}

}  // namespace isowalk
