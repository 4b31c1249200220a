#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exo/spin.hpp"

/**
 * Total-spin coupled states built from binary coupling trees.
 *
 * All angular momenta are stored doubled (two_j, two_m) so half-integers
 * stay integral. Clebsch-Gordan coefficients follow the Condon-Shortley
 * convention, which makes every coupled vector real.
 */
namespace exo {

/// Immutable binary coupling tree. Leaves are spin-1/2 particles labelled
/// by their 1-based index; every internal node carries its total spin.
class CouplingTree {
 public:
  static CouplingTree leaf(int spin);
  /// Throws std::invalid_argument if two_j violates the triangle rule for
  /// the children or the children share a spin.
  static CouplingTree couple(CouplingTree left, CouplingTree right, int two_j);

  bool is_leaf() const { return !left_; }
  int spin() const { return spin_; }
  int two_j() const { return two_j_; }
  const CouplingTree& left() const { return *left_; }
  const CouplingTree& right() const { return *right_; }

  /// Leaf indices in left-to-right order.
  std::vector<int> leaves() const;

  /// Literal form, e.g. "(1 (2 3)_1)_1/2".
  std::string str() const;

 private:
  CouplingTree() = default;

  int spin_ = 0;
  int two_j_ = 1;
  std::shared_ptr<const CouplingTree> left_;
  std::shared_ptr<const CouplingTree> right_;
};

/// Parses the tree literal syntax `(1 (2 3)_1)_1/2`. Labels are integers or
/// p/2 half-integers; whitespace is optional where unambiguous. Throws
/// std::invalid_argument.
CouplingTree parse_tree(std::string_view text);

/// <j1 m1; j2 m2 | J M> with doubled arguments. Zero for any forbidden
/// combination.
double clebsch_gordan(
    int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M);

struct CoupledState {
  CouplingTree tree;
  int two_sz = 0;
  int n_spins = 0;
  Vector vector;
};

/// Coupled state of a tree whose leaves are exactly the spins 1..n.
/// Throws std::domain_error if |sz| exceeds the root spin or has the wrong
/// parity.
CoupledState coupled_state(const CouplingTree& tree, int two_sz);

/// Vector on an n_spins register for a tree covering only some of the
/// spins; the remaining spins are left up so disjoint pieces can be combined
/// with disjoint_product.
Vector embedded_state(const CouplingTree& tree, int two_sz, int n_spins);

/// Product of two states with disjoint support (as produced by
/// embedded_state).
Vector disjoint_product(const Vector& a, const Vector& b);

/// <x|y>. States with different sz are orthogonal; the mismatch is reported
/// on std::clog and 0 is returned.
Complex overlap(const CoupledState& x, const CoupledState& y);

/// Overlap of ((12)_1 (34)_1)_1 with (1 (234)_3/2)_1 at the given sz.
double compute_F(int two_sz = 2);

struct SectorProjector {
  std::vector<int> spins;
  int two_s = 0;
  Matrix projector;
  /// False when two_s is not a possible total spin of the subset; the
  /// projector is then zero.
  bool attainable = true;
};

SectorProjector sector_projector(
    int n_spins, std::span<const int> spins, int two_s);

}  // namespace exo
