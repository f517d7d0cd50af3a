#pragma once

#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace coxforge {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A proper nonzero subspace of Q^n in canonical form: reduced row echelon
// basis, every row scaled to a primitive integer vector with positive
// leading entry. Equal subspaces compare and serialize identically.
class Subspace {
 public:
  // Row-reduces, drops zero rows and applies the primitive-integer scaling.
  // Throws on a zero or full span.
  static Subspace canonicalize(int ambient, std::vector<std::vector<Rational>> rows);
  static Subspace from_integer_rows(int ambient,
                                    const std::vector<std::vector<long long>>& rows);
  // Span of the given coordinate axes (0-based, distinct).
  static Subspace unit_span(int ambient, const std::vector<int>& axes);

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<Integer>>& rows() const { return rows_; }
  // First nonzero column of each row, ascending.
  std::vector<int> pivot_columns() const;

  bool contains(const Subspace& other) const;  // other is a subspace of this

  std::string str() const;
  nlohmann::json to_json() const;
  static Subspace from_json(const nlohmann::json& j);

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
  friend bool operator<(const Subspace& a, const Subspace& b);

 private:
  Subspace() = default;
  int n_ = 0;
  std::vector<std::vector<Integer>> rows_;
};

// a and b are comparable under inclusion (either may be the larger).
bool nested(const Subspace& a, const Subspace& b);

// Endless canonical enumeration of primitive integer k-tuples: gcd 1, first
// nonzero entry positive, ordered by height (max absolute entry), ties by
// lexicographic comparison of the reversed tuple under the value order
// 0 < 1 < 2 < ... < -1 < -2 < ...
class TupleStream {
 public:
  explicit TupleStream(int k);
  std::vector<long long> next();

 private:
  void refill();
  int k_;
  long long height_ = 0;
  std::vector<std::vector<long long>> buf_;
  size_t pos_ = 0;
};

// Endless canonical enumeration of d-dimensional subspaces of Q^k given in
// canonical coordinate form. d = 1 follows TupleStream directly; d >= 2
// walks index subsets of the tuple stream and deduplicates spans.
class CoordSubspaceStream {
 public:
  CoordSubspaceStream(int k, int d);
  Subspace next();

 private:
  bool advance_combo();
  int k_, d_;
  TupleStream tuples_;
  std::vector<std::vector<long long>> pool_;
  int max_index_ = -1;
  std::vector<int> combo_;
  bool combo_live_ = false;
  std::set<Subspace> seen_;
};

// Enumeration services over the proper nonzero subspaces of Q^n. The space
// itself is never materialized; callers pull the lazily enumerated vertices
// they reference.
class SubstrateHandle {
 public:
  explicit SubstrateHandle(int n);  // n >= 3
  int ambient() const { return n_; }

  // First `count` hyperplanes (dimension n-1) containing z, skipping the
  // given ones, in canonical order: corank-1 coordinate subspaces over the
  // complement axes of z (the non-pivot standard unit vectors), joined to z.
  std::vector<Subspace> hyperplanes_through(const Subspace& z,
                                            const std::vector<Subspace>& skip,
                                            int count) const;

  // First `count` dim-dimensional subspaces of a, by coordinates over a's
  // canonical basis rows.
  std::vector<Subspace> subspaces_within(const Subspace& a, int dim,
                                         int count) const;

 private:
  int n_;
};

}  // namespace coxforge
