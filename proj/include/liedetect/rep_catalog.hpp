#pragma once

#include <compare>
#include <string>
#include <vector>

#include "liedetect/types.hpp"

namespace liedetect {

enum class GroupKind { SO2, Torus, SU2, SO3 };

struct Group {
  GroupKind kind = GroupKind::SO2;
  int torus_dim = 1;  // only meaningful for Torus

  int dimension() const;  // dimension of the group as a manifold
  std::string name() const;
  static Group parse(const std::string& text);  // "SO2", "T2", "T3", "SU2", "SO3"
  bool operator==(const Group&) const = default;
};

struct RepresentationType {
  Group group;
  std::vector<int> weights;  // SO2: non-decreasing primitive tuple
  IMat lattice;              // Torus: d x m weight matrix, rows span the lattice
  std::vector<int> parts;    // SU2 / SO3: ascending partition

  // Number of 2-dimensional blocks for Abelian types, total dimension otherwise.
  int block_count() const;
  // Minimal ambient dimension the type acts on.
  int min_ambient() const;
  std::string label() const;
  bool operator==(const RepresentationType& other) const;
};

RepresentationType so2_type(std::vector<int> weights);
RepresentationType torus_type(const IMat& lattice);
RepresentationType partition_type(GroupKind kind, std::vector<int> parts);

std::vector<RepresentationType> enumerate_so2_types(int m, int w_max, bool allow_zero, bool distinct_only);

std::vector<RepresentationType> enumerate_torus_types(int m, int d, int w_max);

std::vector<RepresentationType> enumerate_partition_types(GroupKind kind, int n, bool nontrivial_only);

// Catalog used by the pipeline for a group in ambient dimension n: positive strictly
// increasing weights for SO2, the torus enumeration for T^d, non-trivial partitions
// for SU2 / SO3.
std::vector<RepresentationType> pipeline_candidates(const Group& group, int n, int w_max);

// Exact key of a torus type: D * (projection onto the row span), D the Gram determinant,
// minimised lexicographically over signed permutations of the coordinates.
struct CanonicalLatticeKey {
  long long scale = 0;
  std::vector<long long> entries;  // m x m, row-major
  int m = 0;

  Mat projection() const;
  auto operator<=>(const CanonicalLatticeKey&) const = default;
};

CanonicalLatticeKey canonical_lattice_key(const IMat& basis);

// Invariant factors of an integer matrix, computed from determinantal divisors.
std::vector<long long> smith_invariants(const IMat& m);
bool is_primitive_lattice(const IMat& basis);
int integer_rank(const IMat& m);

struct IrrepBasis {
  int dimension = 0;
  Frame generators;
};

// SO2: label is the weight k. SU2 / SO3: label is the part size.
IrrepBasis irrep_basis(GroupKind kind, int label);

// Orthonormal frame of the pushforward algebra, block-diagonal in the standard basis.
Frame assemble_frame(const RepresentationType& rep, int n);

// Generators with a fixed parameter domain. SO2 and Torus: exp(sum theta_i G_i) with
// theta in [0, 2pi)^d sweeps the orbit. SU2 / SO3: G_i satisfy [G1,G2]=G3 and
// exp(theta u.G) with |u| = 1, theta in [0, 4pi) covers the group.
Frame group_generators(const RepresentationType& rep, int n);

}  // namespace liedetect
