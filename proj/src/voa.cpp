#include "voaforge/voa.hpp"

#include <algorithm>
#include <mutex>

namespace voaforge {

// ------------------------------------------------------------------ State

namespace {

const Module* join(const State& a, const State& b) {
  if (!a.module) return b.module;
  if (!b.module || a.module == b.module) return a.module;
  throw RealizationMismatch("states belong to different modules");
}

}  // namespace

State State::operator+(const State& o) const { return State(join(*this, o), coeffs + o.coeffs); }
State State::operator-(const State& o) const { return State(join(*this, o), coeffs - o.coeffs); }
State State::operator-() const { return State(module, -coeffs); }

State& State::operator+=(const State& o) {
  module = join(*this, o);
  coeffs += o.coeffs;
  return *this;
}

State& State::operator-=(const State& o) {
  module = join(*this, o);
  coeffs -= o.coeffs;
  return *this;
}

bool State::operator==(const State& o) const {
  if (coeffs.empty() && o.coeffs.empty()) return true;
  return module == o.module && coeffs == o.coeffs;
}

State operator*(const Scalar& c, const State& s) { return State(s.module, c * s.coeffs); }

bool State::is_homogeneous() const {
  if (coeffs.empty()) return true;
  long l = module->level(coeffs.min_index());
  return module->level(coeffs.max_index()) == l;
}

Scalar State::weight() const {
  if (coeffs.empty()) throw WeightError("the zero vector has no weight");
  if (!is_homogeneous()) throw WeightError("state is not homogeneous");
  return module->weight(coeffs.min_index());
}

long State::max_level() const { return coeffs.empty() ? -1 : module->level(coeffs.max_index()); }

State State::level_component(long level) const {
  if (coeffs.empty() || level < 0 || level > module->max_level()) return State(module, SparseVector());
  Index lo = module->level_begin(level), hi = module->level_end(level);
  std::vector<SparseVector::Entry> e;
  for (const auto& [i, c] : coeffs)
    if (i >= lo && i < hi) e.emplace_back(i, c);
  return State(module, SparseVector::from_entries(std::move(e)));
}

std::vector<long> State::levels() const {
  std::vector<long> out;
  for (const auto& [i, c] : coeffs) {
    long l = module->level(i);
    if (out.empty() || out.back() != l) out.push_back(l);
  }
  return out;
}

// ------------------------------------------------------------ construction

std::shared_ptr<Module> Module::heisenberg(int max_level) {
  std::shared_ptr<Module> m(new Module());
  m->algebra_ = Algebra::Heisenberg;
  m->kind_ = ModuleKind::Vacuum;
  m->max_level_ = max_level;
  m->enumerate();
  return m;
}

std::shared_ptr<Module> Module::virasoro(const Scalar& c, int max_level) {
  std::shared_ptr<Module> m(new Module());
  m->algebra_ = Algebra::Virasoro;
  m->kind_ = ModuleKind::Vacuum;
  m->c_ = c;
  m->min_part_ = 2;
  m->max_level_ = max_level;
  m->enumerate();
  return m;
}

std::shared_ptr<Module> Module::fock(std::shared_ptr<const Module> voa, const Scalar& lambda, int max_level) {
  if (!voa || !voa->is_voa() || voa->algebra() != Algebra::Heisenberg)
    throw RealizationMismatch("a Fock module needs the Heisenberg VOA");
  std::shared_ptr<Module> m(new Module());
  m->algebra_ = Algebra::Heisenberg;
  m->kind_ = ModuleKind::Fock;
  m->voa_ = std::move(voa);
  m->param_ = lambda;
  m->base_weight_ = lambda * lambda / 2;
  m->max_level_ = max_level;
  m->enumerate();
  return m;
}

std::shared_ptr<Module> Module::verma(std::shared_ptr<const Module> voa, const Scalar& h, int max_level) {
  if (!voa || !voa->is_voa() || voa->algebra() != Algebra::Virasoro)
    throw RealizationMismatch("a Verma module needs a Virasoro VOA");
  std::shared_ptr<Module> m(new Module());
  m->algebra_ = Algebra::Virasoro;
  m->kind_ = ModuleKind::Verma;
  m->c_ = voa->central_charge();
  m->voa_ = std::move(voa);
  m->param_ = h;
  m->base_weight_ = h;
  m->max_level_ = max_level;
  m->enumerate();
  return m;
}

namespace {

void partitions_of(int n, int max_part, int min_part, Partition& prefix, std::vector<Partition>& out) {
  if (n == 0) {
    out.push_back(prefix);
    return;
  }
  for (int p = std::min(n, max_part); p >= min_part; --p) {
    prefix.push_back(p);
    partitions_of(n - p, p, min_part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

void Module::enumerate() {
  if (max_level_ < 0) throw std::invalid_argument("negative level cutoff");
  level_start_.clear();
  for (int l = 0; l <= max_level_; ++l) {
    level_start_.push_back(static_cast<Index>(partitions_.size()));
    std::vector<Partition> here;
    Partition prefix;
    partitions_of(l, l, min_part_, prefix, here);
    for (auto& p : here) {
      index_.emplace(p, static_cast<Index>(partitions_.size()));
      partitions_.push_back(std::move(p));
      level_of_.push_back(l);
    }
  }
  level_start_.push_back(static_cast<Index>(partitions_.size()));
}

std::string Module::name() const {
  switch (kind_) {
    case ModuleKind::Vacuum:
      return algebra_ == Algebra::Heisenberg ? "heisenberg" : "virasoro(c=" + to_string(c_) + ")";
    case ModuleKind::Fock:
      return "fock(lambda=" + to_string(param_) + ")";
    case ModuleKind::Verma:
      return "verma(c=" + to_string(c_) + ",h=" + to_string(param_) + ")";
  }
  return "";
}

void Module::require_level(long level, const char* what) const {
  if (level > max_level_)
    throw CutoffError(std::string(what) + ": level " + std::to_string(level) + " exceeds the cutoff " +
                          std::to_string(max_level_) + " of " + name(),
                      level);
}

Index Module::level_begin(long level) const {
  if (level < 0) return 0;
  require_level(level, "weight space");
  return level_start_[static_cast<std::size_t>(level)];
}

Index Module::level_end(long level) const {
  if (level < 0) return 0;
  require_level(level, "weight space");
  return level_start_[static_cast<std::size_t>(level) + 1];
}

std::size_t Module::dim(long level) const { return static_cast<std::size_t>(level_end(level) - level_begin(level)); }

const Partition& Module::partition(Index id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= partitions_.size()) throw std::out_of_range("basis id out of range");
  return partitions_[static_cast<std::size_t>(id)];
}

bool Module::contains(const Partition& p) const { return index_.count(p) > 0; }

Index Module::id_of(const Partition& p) const {
  auto it = index_.find(p);
  if (it != index_.end()) return it->second;
  long total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < min_part_ || (i > 0 && p[i] > p[i - 1]))
      throw std::invalid_argument("partition violates the part rules of " + name());
    total += p[i];
  }
  require_level(total, "basis state");
  throw std::invalid_argument("unknown partition");
}

State Module::basis(Index id, const Scalar& c) const {
  partition(id);
  return State(this, SparseVector::unit(id, c));
}

State Module::vacuum() const {
  if (!is_voa()) throw RealizationMismatch("the vacuum lives in the VOA, not in " + name());
  return basis(0);
}

State Module::omega() const {
  if (!is_voa()) throw RealizationMismatch("the conformal vector lives in the VOA, not in " + name());
  if (algebra_ == Algebra::Heisenberg) return basis(id_of({1, 1}), Scalar(1, 2));
  return basis(id_of({2}));
}

State Module::heisenberg_generator() const {
  if (!is_voa() || algebra_ != Algebra::Heisenberg) throw RealizationMismatch("alpha(-1)1 needs the Heisenberg VOA");
  return basis(id_of({1}));
}

void Module::check_state(const State& s, const char* what) const {
  if (s.module && s.module != this && !s.coeffs.empty())
    throw RealizationMismatch(std::string(what) + ": state belongs to " + s.module->name() + ", expected " + name());
}

// -------------------------------------------------------- generator action

Index Module::prepend(long part, Index id) const {
  Partition p;
  p.reserve(partition(id).size() + 1);
  p.push_back(static_cast<int>(part));
  for (int x : partition(id)) p.push_back(x);
  return id_of(p);
}

SparseVector Module::heisenberg_basis(long k, Index wid) const {
  const Partition& p = partition(wid);
  if (k == 0) return SparseVector::unit(wid, param_);
  if (k < 0) {
    require_level(level(wid) - k, "alpha mode");
    Partition q = p;
    q.insert(std::upper_bound(q.begin(), q.end(), static_cast<int>(-k), std::greater<int>()), static_cast<int>(-k));
    return SparseVector::unit(id_of(q), Scalar(1));
  }
  auto it = std::find(p.begin(), p.end(), static_cast<int>(k));
  if (it == p.end()) return SparseVector();
  long mult = std::count(p.begin(), p.end(), static_cast<int>(k));
  Partition q = p;
  q.erase(q.begin() + (it - p.begin()));
  return SparseVector::unit(id_of(q), Scalar(k * mult));
}

SparseVector Module::virasoro_basis(long k, Index wid) const {
  if (k == 0) return SparseVector::unit(wid, base_weight_ + level(wid));
  long target = level(wid) - k;
  if (target < 0) return SparseVector();
  require_level(target, "Virasoro mode");
  const Partition& p = partition(wid);
  if (p.empty()) {
    if (k > 0) return SparseVector();
    if (kind_ == ModuleKind::Vacuum && k == -1) return SparseVector();  // L(-1) kills the vacuum
    return SparseVector::unit(id_of({static_cast<int>(-k)}), Scalar(1));
  }
  long n1 = p.front();
  if (k < 0 && -k >= n1) return SparseVector::unit(prepend(-k, wid), Scalar(1));
  Index rest = id_of(Partition(p.begin() + 1, p.end()));
  // L(k) L(-n1) R = L(-n1) L(k) R + (k + n1) L(k - n1) R + delta_{k,n1} c/12 (k^3 - k) R
  SparseVector out = generator_vector(-n1, generator_basis(k, rest));
  out.add_scaled(generator_basis(k - n1, rest), Scalar(k + n1));
  if (k == n1) out.add_scaled(SparseVector::unit(rest, Scalar(1)), c_ * fraction(k * k * k - k, 12));
  return out;
}

SparseVector Module::generator_basis(long k, Index wid) const {
  if (algebra_ == Algebra::Heisenberg) return heisenberg_basis(k, wid);
  if (k == 0 || level(wid) - k < 0) return virasoro_basis(k, wid);
  ModeKey key{0, k, wid};
  {
    std::shared_lock lock(gen_mutex_);
    auto it = gen_memo_.find(key);
    if (it != gen_memo_.end()) return it->second;
  }
  SparseVector v = virasoro_basis(k, wid);
  std::unique_lock lock(gen_mutex_);
  gen_memo_.emplace(key, v);
  return v;
}

SparseVector Module::generator_vector(long k, const SparseVector& w) const {
  linalg::Accumulator acc;
  for (const auto& [i, c] : w) acc.add_scaled(generator_basis(k, i), c);
  return acc.take();
}

State Module::generator(long k, const State& w) const {
  check_state(w, "generator mode");
  return State(this, generator_vector(k, w.coeffs));
}

State Module::L(long k, const State& w) const {
  check_state(w, "Virasoro mode");
  if (algebra_ == Algebra::Virasoro) return generator(k, w);
  return mode(voa().omega(), k + 1, w);
}

// ------------------------------------------------------------- mode action

SparseVector Module::mode_basis_uncached(Index vid, long m, Index wid) const {
  const Module& V = voa();
  const long lv = V.level(vid), lw = level(wid);
  const Partition& p = V.partition(vid);
  if (p.empty()) return m == -1 ? SparseVector::unit(wid, Scalar(1)) : SparseVector();
  const long n1 = p.front();
  const Index u = V.id_of(Partition(p.begin() + 1, p.end()));
  const long lu = lv - n1;
  // v = g_P u with g = alpha(-1)1 (g_j = alpha(j)) or g = omega (g_j = L(j-1)).
  const bool heis = algebra_ == Algebra::Heisenberg;
  const long P = heis ? -n1 : 1 - n1;
  const long shift = heis ? 0 : -1;
  const Scalar sign_p = sign_power(P);
  linalg::Accumulator acc;
  // (g_P u)_m w = sum_i (-1)^i C(P,i) [ g_{P-i} u_{m+i} w - (-1)^P u_{P+m-i} g_i w ]
  for (long i = 0; lu + lw - m - i - 1 >= 0; ++i) {
    SparseVector x = mode_basis(u, m + i, wid);
    if (x.empty()) continue;
    acc.add_scaled(generator_vector(P - i + shift, x), sign_power(i) * binomial(P, i));
  }
  const long imax = heis ? lw : lw + 1;
  long i0 = 0;
  if (!heis) {
    // i = 0 carries u_n L(-1) w = L(-1) u_n w + n u_{n-1} w (n = P + m), which
    // avoids stepping above the final level when w sits at the cutoff.
    const long n = P + m;
    acc.add_scaled(generator_vector(-1, mode_basis(u, n, wid)), -sign_p);
    acc.add_scaled(mode_basis(u, n - 1, wid), -sign_p * Scalar(n));
    i0 = 1;
  }
  for (long i = i0; i <= imax; ++i) {
    SparseVector y = generator_basis(i + shift, wid);
    if (y.empty()) continue;
    acc.add_scaled(mode_vector(u, P + m - i, y), -sign_p * sign_power(i) * binomial(P, i));
  }
  return acc.take();
}

SparseVector Module::mode_basis(Index vid, long m, Index wid) const {
  const Module& V = voa();
  long target = V.level(vid) + level(wid) - m - 1;
  if (target < 0) return SparseVector();
  require_level(target, "mode action");
  if (V.partition(vid).empty()) return m == -1 ? SparseVector::unit(wid, Scalar(1)) : SparseVector();
  ModeKey key{vid, m, wid};
  {
    std::shared_lock lock(mode_mutex_);
    auto it = mode_memo_.find(key);
    if (it != mode_memo_.end()) return it->second;
  }
  SparseVector v = mode_basis_uncached(vid, m, wid);
  std::unique_lock lock(mode_mutex_);
  mode_memo_.emplace(key, v);
  return v;
}

SparseVector Module::mode_vector(Index vid, long m, const SparseVector& w) const {
  linalg::Accumulator acc;
  for (const auto& [i, c] : w) acc.add_scaled(mode_basis(vid, m, i), c);
  return acc.take();
}

State Module::mode(const State& v, long m, const State& w) const {
  voa().check_state(v, "mode action (vertex operator argument)");
  check_state(w, "mode action");
  linalg::Accumulator acc;
  for (const auto& [vi, vc] : v.coeffs)
    for (const auto& [wi, wc] : w.coeffs) acc.add_scaled(mode_basis(vi, m, wi), vc * wc);
  return State(this, acc.take());
}

std::size_t Module::memo_size() const {
  std::shared_lock a(mode_mutex_);
  std::shared_lock b(gen_mutex_);
  return mode_memo_.size() + gen_memo_.size();
}

// ---------------------------------------------------------------- windows

formal::Laurent<State> y_window(const Module& wm, const State& v, const State& w, long lo, long hi) {
  formal::Laurent<State>::Map terms;
  for (long p = lo; p <= hi; ++p) terms[p] = wm.mode(v, -p - 1, w);
  return formal::Laurent<State>(std::move(terms));
}

State y_o_coefficient(const Module& wm, const State& v, const State& w, long p) {
  const Module& V = wm.voa();
  V.check_state(v, "opposite vertex operator");
  State out = wm.zero();
  for (long wt : v.levels()) {
    State term = v.level_component(wt);
    Scalar sign = sign_power(wt);
    for (long i = 0; i <= wt && !term.is_zero(); ++i) {
      out += (sign / factorial(i)) * wm.mode(term, p + 2 * wt - i - 1, w);
      term = V.L(1, term);
    }
  }
  return out;
}

formal::Laurent<State> y_o_window(const Module& wm, const State& v, const State& w, long lo, long hi) {
  formal::Laurent<State>::Map terms;
  for (long p = lo; p <= hi; ++p) terms[p] = y_o_coefficient(wm, v, w, p);
  return formal::Laurent<State>(std::move(terms));
}

State exp_L1(const State& v, const Scalar& t) {
  if (v.is_zero()) return v;
  const Module& m = *v.module;
  State out = v;
  State term = v;
  for (long i = 1; !term.is_zero(); ++i) {
    term = (t / Scalar(i)) * m.L(1, term);
    out += term;
  }
  return out;
}

State theta(const State& v) {
  if (v.is_zero()) return v;
  if (!v.module->is_voa()) throw WeightError("theta is defined on the VOA only");
  State signed_v = v.module->zero();
  for (long l : v.levels()) signed_v += sign_power(l) * v.level_component(l);
  return exp_L1(signed_v, Scalar(1));
}

State scale_by_level(const State& v, const Scalar& x1) {
  if (v.is_zero()) return v;
  State out = v.module->zero();
  for (long l : v.levels()) out += power(x1, l) * v.level_component(l);
  return out;
}

// ------------------------------------------------------------ associativity

State lassoc_expand(const Module& wm, const State& u, long p, const State& v, long q, const State& w, long k,
                    long s) {
  const Module& V = wm.voa();
  V.check_state(u, "associativity expansion");
  V.check_state(v, "associativity expansion");
  const long lu = u.max_level(), lv = v.max_level(), lw = w.max_level();
  if (u.is_zero() || v.is_zero() || w.is_zero()) return wm.zero();
  for (long m = 0; lu + lw - (k + m) - 1 >= 0; ++m)
    if (!wm.mode(u, k + m, w).is_zero())
      throw PreconditionError("x^k Y(u,x)w has a pole: mode u_" + std::to_string(k + m) + " w is nonzero");
  for (long m = 0; lv + lw - (s + q + 1 + m) - 1 >= 0; ++m)
    if (!wm.mode(v, s + q + 1 + m, w).is_zero())
      throw PreconditionError("x^{s+1+q} Y(v,x)w has a pole: mode v_" + std::to_string(s + q + 1 + m) +
                              " w is nonzero");
  State out = wm.zero();
  for (long i = 0; i <= s; ++i) {
    long jmax = lu + lv - 1 - (p - k - i);
    if (k >= 0) jmax = std::min(jmax, k);
    for (long j = 0; j <= jmax; ++j) {
      Scalar c = binomial(p - k, i) * binomial(k, j);
      if (c == 0) continue;
      State uv = V.mode(u, p - k - i + j, v);
      if (uv.is_zero()) continue;
      out += c * wm.mode(uv, q + k + i - j, w);
    }
  }
  return out;
}

std::vector<std::size_t> partition_counts(int max, int min_part) {
  std::vector<std::size_t> count(static_cast<std::size_t>(max + 1), 0);
  count[0] = 1;
  for (int part = std::max(1, min_part); part <= max; ++part)
    for (int n = part; n <= max; ++n) count[static_cast<std::size_t>(n)] += count[static_cast<std::size_t>(n - part)];
  return count;
}

}  // namespace voaforge
