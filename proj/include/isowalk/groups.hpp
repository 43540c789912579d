#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isowalk {

// Finite group given by its Cayley table. table(i,j) = index of g_i * g_j,
// where products follow the same convention as isometry composition:
// (g*h) acts as g after h.
class FiniteGroupTable {
 public:
  explicit FiniteGroupTable(std::vector<std::vector<int>> table, std::string name = "");

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  int inverse(int a) const { return inv_[a]; }
  int identity() const { return id_; }
  const std::string& name() const { return name_; }
  std::vector<std::vector<int>> rows() const;

  // Left-multiplication permutation of g: x -> g*x.
  std::vector<int> left_shift_perm(int g) const;

  // z/n under addition
  static FiniteGroupTable cyclic(int n);
  // all permutations of n letters (n <= 5), indexed in lexicographic
  // one-line order; product p*q is the permutation x -> p[q[x]]
  static FiniteGroupTable symmetric(int n);
  // dihedral group of the n-gon, order 2n (n <= 12); indices 0..n-1 are
  // rotations x -> k+x, indices n..2n-1 are reflections x -> k-x
  static FiniteGroupTable dihedral(int n);

  // one-line permutation of element i in a symmetric(n) table
  static std::vector<int> perm_of_index(int n, int index);
  // inverse of the above (lexicographic rank)
  static int index_of_perm(std::span<const int> one_line);

 private:
  int n_;
  std::vector<int> table_;  // n*n row-major
  std::vector<int> inv_;
  int id_;
  std::string name_;
  void validate() const;
};

struct SubgroupRecord {
  std::vector<int> elements;  // sorted
  bool normal = false;
};

bool is_subgroup(const FiniteGroupTable& g, std::span<const int> elems);
bool is_normal_subgroup(const FiniteGroupTable& g, std::span<const int> elems);

// Closure of the generating set under products and inverses (BFS).
SubgroupRecord generated_subgroup(const FiniteGroupTable& g, std::span<const int> generators);

// Every subgroup, found as the join-closure of the cyclic subgroups.
// Throws for order > 48.
std::vector<SubgroupRecord> all_subgroups(const FiniteGroupTable& g);

// Support-based classification of a measure on the group. Only the support
// matters for all three predicates.

// smallest subgroup containing the support equals the whole group
bool is_adapted(const FiniteGroupTable& g, std::span<const int> support);

struct CosetWitness {
  int rep;                     // support is contained in rep * subgroup
  SubgroupRecord subgroup;     // proper subgroup generated by the quotients
};

// H0 = <s0^-1 s : s in support>. The support lies in a coset of a proper
// subgroup iff H0 is proper; witness returned in that case.
std::optional<CosetWitness> coset_trap(const FiniteGroupTable& g, std::span<const int> support);

// Same with the normal closure of the quotient set: support lies in a coset
// of a proper *normal* subgroup iff that closure is proper.
std::optional<CosetWitness> normal_coset_trap(const FiniteGroupTable& g,
                                              std::span<const int> support);

inline bool is_coset_aperiodic(const FiniteGroupTable& g, std::span<const int> support) {
  return !coset_trap(g, support).has_value();
}

inline bool is_strictly_aperiodic(const FiniteGroupTable& g, std::span<const int> support) {
  return !normal_coset_trap(g, support).has_value();
}

// A deterministic image pair is a proper nonempty A with g(A) = B for every
// g in the support (all images coincide). For an action by permutations on
// n_points points, the witnesses are exactly the proper nonempty unions of
// orbits of the group generated by the pairwise quotients p0^-1 p.
struct ImageWitness {
  std::vector<int> a;
  std::vector<int> b;
};

struct WitnessScan {
  std::vector<ImageWitness> witnesses;
  std::uint64_t candidate_count = 0;  // proper nonempty orbit unions
  bool truncated = false;             // hit max_witnesses before finishing
};

// support_perms: one permutation of {0..n_points-1} per support element.
// n_points <= 20 for the exhaustive scan; max_witnesses caps the returned list.
WitnessScan deterministic_image_witnesses(int n_points,
                                          std::span<const std::vector<int>> support_perms,
                                          std::size_t max_witnesses = 1024);

}  // namespace isowalk
