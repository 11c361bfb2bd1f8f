#pragma once

#include <memory>
#include <string>
#include <vector>

#include "freeprod/free_product.hpp"

namespace freeprod {

/// Finite group given by a multiplication table plus, for the paired graph
/// factor, one vertex permutation per element.
struct FiniteGroup {
  std::vector<std::string> elements;          // ids; coincide with the paired net's ids
  int identity = 0;
  std::vector<std::vector<int>> table;        // table[i][j] = index of elements[i]*elements[j]
  std::vector<std::vector<int>> vertex_perm;  // [element][vertex] -> vertex

  int index_of(const std::string& id) const;
  int mul(int a, int b) const { return table[a][b]; }
  int inverse(int a) const;

  /// Group axioms, checked exhaustively; empty result means valid.
  std::vector<std::string> check_axioms(const std::string& path) const;
};

/// The free product G*H acting on X*Y built over the G-net and H-net: left
/// multiplication on the index word, with trailing letters peeled into the
/// factor actions.
class FreeProductAction {
 public:
  FreeProductAction(std::shared_ptr<const FpSpace> space, FiniteGroup g, FiniteGroup h);

  const FpSpace& space() const { return *space_; }
  const FiniteGroup& group(Side s) const { return s == Side::X ? g_ : h_; }

  /// Normal-form product: concatenate, merge adjacent same-group letters via
  /// the table, delete identities.
  NormalWord multiply(const NormalWord& a, const NormalWord& b) const;
  NormalWord inverse_word(const NormalWord& a) const;
  NormalWord make_element(const std::vector<std::string>& ids) const;

  FpPoint act(const NormalWord& a, const FpPoint& p) const;

  /// All reduced words of length <= max_len, in deterministic order.
  std::vector<NormalWord> elements_up_to(std::size_t max_len) const;

  /// #{a : |a| <= max_len, d(act(a,o), o) <= R}; the properness proxy.
  long long orbit_count(std::size_t max_len, const FpPoint& o, double R) const;

  /// Group axioms, action-by-automorphism, and orbit-net compatibility.
  std::vector<std::string> validate() const;

 private:
  FactorPoint apply_factor(Side side, int elem, const FactorPoint& p) const;
  Letter letter_of(Side side, int elem) const;
  int elem_of(const Letter& z) const;

  std::shared_ptr<const FpSpace> space_;
  FiniteGroup g_;
  FiniteGroup h_;
  const UnitGraphSpace* graph_x_;
  const UnitGraphSpace* graph_y_;
};

}  // namespace freeprod
