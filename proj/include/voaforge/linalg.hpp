#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "voaforge/rational.hpp"

namespace voaforge::linalg {

using Index = std::int64_t;

class IndexMismatch : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sparse vector over an ordered index set. Entries are kept sorted by index
/// and zero coefficients are never stored.
class SparseVector {
 public:
  using Entry = std::pair<Index, Scalar>;

  SparseVector() = default;
  static SparseVector unit(Index i, const Scalar& c = Scalar(1));
  /// Sorts, merges duplicate indices and drops zeros.
  static SparseVector from_entries(std::vector<Entry> entries);
  static SparseVector from_dense(const std::vector<Scalar>& dense);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  Scalar get(Index i) const;
  Index min_index() const;
  Index max_index() const;

  SparseVector& add_scaled(const SparseVector& other, const Scalar& c);
  SparseVector& operator+=(const SparseVector& other) { return add_scaled(other, Scalar(1)); }
  SparseVector& operator-=(const SparseVector& other) { return add_scaled(other, Scalar(-1)); }
  SparseVector& operator*=(const Scalar& c);

  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend SparseVector operator*(const Scalar& c, SparseVector a) { return a *= c; }
  friend SparseVector operator-(SparseVector a) { return a *= Scalar(-1); }
  friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.entries_ == b.entries_; }

  /// Dot product with a dense row.
  Scalar dot(const std::vector<Scalar>& dense) const;

 private:
  std::vector<Entry> entries_;
};

/// Accumulates many scaled contributions before producing a SparseVector.
class Accumulator {
 public:
  void add(Index i, const Scalar& c);
  void add_scaled(const SparseVector& v, const Scalar& c);
  bool empty() const { return terms_.empty(); }
  SparseVector take();

 private:
  std::map<Index, Scalar> terms_;
};

struct Membership {
  bool member = false;
  /// Coefficients over the generators (by insertion label) reproducing the
  /// vector; present only when the handle tracks combinations.
  std::optional<SparseVector> coefficients;
  /// Smallest index of the nonzero residual when not a member.
  Index witness = -1;
  SparseVector residual;
};

/// Row-echelon data for the span of a list of vectors over indices
/// [0, ambient). The leading (smallest) index of each row is its pivot, so
/// the lowest index is always preferred as pivot.
class SpanHandle {
 public:
  explicit SpanHandle(Index ambient, bool track_combinations = false);

  Index ambient() const { return ambient_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t generators() const { return generators_; }
  bool tracks_combinations() const { return track_; }

  /// Adds one generator; returns true when it enlarged the span.
  bool insert(const SparseVector& v);

  /// Reduces v against the current rows; the residual has no entry in any
  /// pivot column.
  Membership reduce(const SparseVector& v) const;
  Membership in_span(const SparseVector& v) const { return reduce(v); }

  /// Brings the rows into fully reduced form (the canonical RREF).
  void finalize(bool parallel = false);
  bool finalized() const { return finalized_; }

  std::vector<Index> pivots() const;
  bool is_pivot(Index column) const;
  /// Row with the given pivot column.
  const SparseVector& row(Index pivot) const;
  /// Rows in increasing pivot order.
  std::vector<SparseVector> rows() const;

 private:
  friend SpanHandle rref_parallel(const std::vector<SparseVector>&, Index, std::size_t);
  void check_indices(const SparseVector& v) const;
  void reduce_into(std::map<Index, Scalar>& work, std::map<Index, Scalar>* combo) const;
  bool insert_reduced(SparseVector residual, SparseVector combo);

  Index ambient_;
  bool track_;
  bool finalized_ = true;
  std::size_t generators_ = 0;
  std::vector<SparseVector> rows_;
  std::vector<SparseVector> combos_;
  std::vector<std::int64_t> row_of_column_;
};

/// Serial reference elimination.
SpanHandle rref(const std::vector<SparseVector>& rows, Index ambient, bool track_combinations = false);

/// Blocked elimination: each block of rows is reduced in parallel against the
/// current basis and then inserted serially; back-substitution is parallel.
/// Produces exactly the same RREF as the serial routine.
SpanHandle rref_parallel(const std::vector<SparseVector>& rows, Index ambient, std::size_t block = 64);

/// Null space of the map x -> (row . x) for each row, over `columns`
/// coordinates. Basis vectors are normalised so their first nonzero entry is 1.
std::vector<SparseVector> kernel_basis(const std::vector<SparseVector>& rows, Index columns);

}  // namespace voaforge::linalg
