#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "polystar/rational.hpp"

namespace polystar {

// Index tuple s = (s_1, ..., s_d) with all parts >= 1.
class Composition {
 public:
  explicit Composition(std::vector<int> parts);
  // "3,2"
  static Composition parse(std::string_view text);
  static Composition ones(int count);
  static Composition repeated(int part, int count);

  const std::vector<int>& parts() const { return parts_; }
  int operator[](size_t i) const { return parts_[i]; }
  int depth() const { return static_cast<int>(parts_.size()); }
  long weight() const { return prefix_.back(); }
  // |s|_r for 0 <= r <= depth.
  long prefix_weight(int r) const { return prefix_[static_cast<size_t>(r)]; }
  // Positions are 1-based in [1, weight]; block r spans (|s|_{r-1}, |s|_r].
  bool is_block_start(long position) const;
  bool is_block_end(long position) const;

  Composition concat(const Composition& tail) const;
  std::string to_string() const;

  friend bool operator==(const Composition& a, const Composition& b) { return a.parts_ == b.parts_; }
  friend auto operator<=>(const Composition& a, const Composition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<int> parts_;
  std::vector<long> prefix_;
};

enum class Family { A, B };

// Block parameters of the structured tuples (m_i + 2, {1}_{u_i}).
// Family A: |u| = d - 1. Family B: |u| = d and u_d >= 1.
struct ShapeBlocks {
  Family family = Family::A;
  std::vector<int> m;
  std::vector<int> u;

  int d() const { return static_cast<int>(m.size()); }
  void validate() const;
  // "A:m=2,1,0;u=2,0", "A:m=3;u=", "B:m=0;u=1"
  static ShapeBlocks parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const ShapeBlocks&, const ShapeBlocks&) = default;
};

using IndexChain = std::vector<long>;

Composition shape_composition(const ShapeBlocks& shape);

// sum over blocks of (n at block start - n at block end).
long q_of(const Composition& s, const IndexChain& chain);

enum class ArgVariant { Main, Sub };

// Argument string of the depth-|s| polylogarithm attached to a shape.
std::vector<Rational> shape_args(const ShapeBlocks& shape, ArgVariant variant, const Rational& a,
                                 const Rational& p);

enum class Constraint {
  None,
  PNotOne,
  MainAp,    // |a| <= min(1, 2/p - 1), p != 1
  A1P,       // a = 1, 0 < p < 1
  RedBox,    // [-1, 1/3] x [1/2, 3/2], p != 1, MainAp
  RedBoxB,   // RedBox with p < 1
  IntroRed,  // |a| <= 1, 1/2 <= p < 1
};

const char* constraint_name(Constraint c);
Constraint parse_constraint(std::string_view name);

// Boundary points count as inside.
bool domain_check(Constraint c, const Rational& a, const Rational& p);
bool domain_check(std::string_view constraint_id, const Rational& a, const Rational& p);

}  // namespace polystar
