#include "voaforge/linalg.hpp"

#include <algorithm>
#include <string>

namespace voaforge::linalg {

SparseVector SparseVector::unit(Index i, const Scalar& c) {
  SparseVector v;
  if (c != 0) v.entries_.emplace_back(i, c);
  return v;
}

SparseVector SparseVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVector v;
  for (auto& e : entries) {
    if (!v.entries_.empty() && v.entries_.back().first == e.first) {
      v.entries_.back().second += e.second;
    } else {
      if (!v.entries_.empty() && v.entries_.back().second == 0) v.entries_.pop_back();
      v.entries_.push_back(std::move(e));
    }
  }
  if (!v.entries_.empty() && v.entries_.back().second == 0) v.entries_.pop_back();
  return v;
}

SparseVector SparseVector::from_dense(const std::vector<Scalar>& dense) {
  SparseVector v;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0) v.entries_.emplace_back(static_cast<Index>(i), dense[i]);
  return v;
}

Scalar SparseVector::get(Index i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index key) { return e.first < key; });
  if (it != entries_.end() && it->first == i) return it->second;
  return Scalar(0);
}

Index SparseVector::min_index() const {
  if (entries_.empty()) throw std::logic_error("min_index of zero vector");
  return entries_.front().first;
}

Index SparseVector::max_index() const {
  if (entries_.empty()) throw std::logic_error("max_index of zero vector");
  return entries_.back().first;
}

SparseVector& SparseVector::add_scaled(const SparseVector& other, const Scalar& c) {
  if (c == 0 || other.empty()) return *this;
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a));
      ++a;
    } else if (a == entries_.end() || b->first < a->first) {
      merged.emplace_back(b->first, c * b->second);
      ++b;
    } else {
      Scalar s = a->second + c * b->second;
      if (s != 0) merged.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
  return *this;
}

SparseVector& SparseVector::operator*=(const Scalar& c) {
  if (c == 0) {
    entries_.clear();
  } else {
    for (auto& e : entries_) e.second *= c;
  }
  return *this;
}

Scalar SparseVector::dot(const std::vector<Scalar>& dense) const {
  Scalar s(0);
  for (const auto& [i, c] : entries_) {
    if (i < 0 || static_cast<std::size_t>(i) >= dense.size()) throw IndexMismatch("dot: index out of range");
    s += c * dense[static_cast<std::size_t>(i)];
  }
  return s;
}

void Accumulator::add(Index i, const Scalar& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Accumulator::add_scaled(const SparseVector& v, const Scalar& c) {
  if (c == 0) return;
  for (const auto& [i, x] : v) add(i, c * x);
}

SparseVector Accumulator::take() {
  std::vector<SparseVector::Entry> entries(std::make_move_iterator(terms_.begin()),
                                           std::make_move_iterator(terms_.end()));
  terms_.clear();
  return SparseVector::from_entries(std::move(entries));
}

namespace {

SparseVector from_map(std::map<Index, Scalar>& m) {
  std::vector<SparseVector::Entry> entries;
  entries.reserve(m.size());
  for (auto& [i, c] : m)
    if (c != 0) entries.emplace_back(i, std::move(c));
  m.clear();
  return SparseVector::from_entries(std::move(entries));
}

void axpy(std::map<Index, Scalar>& work, const SparseVector& row, const Scalar& c) {
  for (const auto& [i, x] : row) {
    auto [it, inserted] = work.try_emplace(i, -c * x);
    if (!inserted) {
      it->second -= c * x;
      if (it->second == 0) work.erase(it);
    }
  }
}

}  // namespace

SpanHandle::SpanHandle(Index ambient, bool track_combinations)
    : ambient_(ambient), track_(track_combinations), row_of_column_(static_cast<std::size_t>(ambient), -1) {
  if (ambient < 0) throw std::invalid_argument("negative ambient dimension");
}

void SpanHandle::check_indices(const SparseVector& v) const {
  if (v.empty()) return;
  if (v.min_index() < 0 || v.max_index() >= ambient_)
    throw IndexMismatch("vector uses basis index " + std::to_string(v.min_index() < 0 ? v.min_index() : v.max_index()) +
                        " outside ambient range [0," + std::to_string(ambient_) + ")");
}

void SpanHandle::reduce_into(std::map<Index, Scalar>& work, std::map<Index, Scalar>* combo) const {
  for (auto it = work.begin(); it != work.end();) {
    std::int64_t r = row_of_column_[static_cast<std::size_t>(it->first)];
    if (r < 0) {
      ++it;
      continue;
    }
    Scalar c = it->second;
    Index key = it->first;
    const SparseVector& row = rows_[static_cast<std::size_t>(r)];
    // Row entries are >= key, so iteration order stays valid.
    axpy(work, row, c);
    if (combo) axpy(*combo, combos_[static_cast<std::size_t>(r)], c);
    it = work.upper_bound(key);
  }
}

Membership SpanHandle::reduce(const SparseVector& v) const {
  check_indices(v);
  std::map<Index, Scalar> work;
  for (const auto& [i, c] : v) work.emplace(i, c);
  std::map<Index, Scalar> combo;
  reduce_into(work, track_ ? &combo : nullptr);
  Membership result;
  result.residual = from_map(work);
  result.member = result.residual.empty();
  if (!result.member) result.witness = result.residual.min_index();
  if (track_ && result.member) {
    // combo holds -(sum c_p row_p) bookkeeping in generator space; v = -combo.
    result.coefficients = -from_map(combo);
  }
  return result;
}

bool SpanHandle::insert_reduced(SparseVector residual, SparseVector combo) {
  if (residual.empty()) return false;
  Scalar lead = residual.entries().front().second;
  Scalar inv = 1 / lead;
  residual *= inv;
  combo *= inv;
  Index pivot = residual.min_index();
  row_of_column_[static_cast<std::size_t>(pivot)] = static_cast<std::int64_t>(rows_.size());
  rows_.push_back(std::move(residual));
  combos_.push_back(std::move(combo));
  finalized_ = false;
  return true;
}

bool SpanHandle::insert(const SparseVector& v) {
  check_indices(v);
  std::size_t label = generators_++;
  std::map<Index, Scalar> work;
  for (const auto& [i, c] : v) work.emplace(i, c);
  std::map<Index, Scalar> combo;
  if (track_) combo.emplace(static_cast<Index>(label), Scalar(1));
  reduce_into(work, track_ ? &combo : nullptr);
  SparseVector residual = from_map(work);
  return insert_reduced(std::move(residual), track_ ? from_map(combo) : SparseVector());
}

void SpanHandle::finalize(bool parallel) {
  if (finalized_) return;
  const std::size_t n = rows_.size();
  std::vector<SparseVector> new_rows(n), new_combos(n);
  // Each row is reduced against the (unchanged) echelon rows with larger
  // pivots; rows are independent, hence the parallel loop.
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t r = 0; r < n; ++r) {
    const SparseVector& row = rows_[r];
    Index pivot = row.min_index();
    std::map<Index, Scalar> work;
    for (const auto& [i, c] : row)
      if (i != pivot) work.emplace(i, c);
    std::map<Index, Scalar> combo;
    if (track_)
      for (const auto& [i, c] : combos_[r]) combo.emplace(i, c);
    reduce_into(work, track_ ? &combo : nullptr);
    std::vector<SparseVector::Entry> entries;
    entries.emplace_back(pivot, Scalar(1));
    for (auto& [i, c] : work) entries.emplace_back(i, c);
    new_rows[r] = SparseVector::from_entries(std::move(entries));
    if (track_) new_combos[r] = from_map(combo);
  }
  rows_ = std::move(new_rows);
  if (track_) combos_ = std::move(new_combos);
  finalized_ = true;
}

std::vector<Index> SpanHandle::pivots() const {
  std::vector<Index> p;
  p.reserve(rows_.size());
  for (const auto& r : rows_) p.push_back(r.min_index());
  std::sort(p.begin(), p.end());
  return p;
}

bool SpanHandle::is_pivot(Index column) const {
  if (column < 0 || column >= ambient_) return false;
  return row_of_column_[static_cast<std::size_t>(column)] >= 0;
}

const SparseVector& SpanHandle::row(Index pivot) const {
  if (!is_pivot(pivot)) throw std::out_of_range("not a pivot column");
  return rows_[static_cast<std::size_t>(row_of_column_[static_cast<std::size_t>(pivot)])];
}

std::vector<SparseVector> SpanHandle::rows() const {
  std::vector<SparseVector> out;
  for (Index p : pivots()) out.push_back(row(p));
  return out;
}

SpanHandle rref(const std::vector<SparseVector>& rows, Index ambient, bool track_combinations) {
  SpanHandle h(ambient, track_combinations);
  for (const auto& r : rows) h.insert(r);
  h.finalize(false);
  return h;
}

SpanHandle rref_parallel(const std::vector<SparseVector>& rows, Index ambient, std::size_t block) {
  SpanHandle h(ambient, false);
  if (block == 0) block = 1;
  for (const auto& r : rows) h.check_indices(r);
  std::vector<SparseVector> reduced;
  for (std::size_t start = 0; start < rows.size(); start += block) {
    std::size_t stop = std::min(rows.size(), start + block);
    reduced.assign(stop - start, SparseVector());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = start; i < stop; ++i) reduced[i - start] = h.reduce(rows[i]).residual;
    for (auto& r : reduced) {
      ++h.generators_;
      if (r.empty()) continue;
      // Rows added earlier in this block may still have to be eliminated.
      std::map<Index, Scalar> work;
      for (const auto& [i, c] : r) work.emplace(i, c);
      h.reduce_into(work, nullptr);
      h.insert_reduced(from_map(work), SparseVector());
    }
  }
  h.finalize(true);
  return h;
}

std::vector<SparseVector> kernel_basis(const std::vector<SparseVector>& rows, Index columns) {
  SpanHandle h = rref(rows, columns);
  std::vector<SparseVector> basis;
  for (Index j = 0; j < columns; ++j) {
    if (h.is_pivot(j)) continue;
    std::vector<SparseVector::Entry> entries;
    entries.emplace_back(j, Scalar(1));
    for (Index p : h.pivots()) {
      Scalar c = h.row(p).get(j);
      if (c != 0) entries.emplace_back(p, -c);
    }
    SparseVector v = SparseVector::from_entries(std::move(entries));
    Scalar lead = v.entries().front().second;
    v *= 1 / lead;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace voaforge::linalg
