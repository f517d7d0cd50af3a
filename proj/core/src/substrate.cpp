#include "coxforge/substrate.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "coxforge/error.hpp"

namespace coxforge {

namespace {

// Value order 0 < 1 < 2 < ... < -1 < -2 < ...: nonnegatives first.
bool value_less(long long a, long long b) {
  bool na = a < 0, nb = b < 0;
  if (na != nb) return nb;
  return na ? (-a < -b) : (a < b);
}

std::vector<Rational> to_rational(const std::vector<Integer>& row) {
  std::vector<Rational> out;
  out.reserve(row.size());
  for (const Integer& e : row) out.emplace_back(e);
  return out;
}

long long to_ll(const Integer& v) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw Error("subspace: entry exceeds 64-bit range in serialization");
  return v.convert_to<long long>();
}

}  // namespace

Subspace Subspace::canonicalize(int ambient, std::vector<std::vector<Rational>> rows) {
  if (ambient < 1) throw Error("subspace: ambient dimension must be positive");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != ambient)
      throw Error("subspace: row width does not match ambient dimension");

  // Reduced row echelon form over Q.
  size_t r = 0;
  for (int col = 0; col < ambient && r < rows.size(); ++col) {
    size_t p = r;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rational inv = rows[r][col];
    for (int c = 0; c < ambient; ++c) rows[r][c] /= inv;
    for (size_t q = 0; q < rows.size(); ++q) {
      if (q == r || rows[q][col] == 0) continue;
      Rational f = rows[q][col];
      for (int c = 0; c < ambient; ++c) rows[q][c] -= f * rows[r][c];
    }
    ++r;
  }
  if (r == 0) throw Error("subspace: zero span");
  if (static_cast<int>(r) == ambient) throw Error("subspace: full span");
  rows.resize(r);

  Subspace s;
  s.n_ = ambient;
  for (const auto& row : rows) {
    Integer lcm_den = 1;
    for (const Rational& e : row)
      lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(e));
    std::vector<Integer> v(ambient);
    Integer g = 0;
    for (int c = 0; c < ambient; ++c) {
      v[c] = boost::multiprecision::numerator(row[c]) *
             (lcm_den / boost::multiprecision::denominator(row[c]));
      g = boost::multiprecision::gcd(g, v[c]);
    }
    for (int c = 0; c < ambient; ++c) v[c] /= g;
    s.rows_.push_back(std::move(v));
  }
  return s;
}

Subspace Subspace::from_integer_rows(int ambient,
                                     const std::vector<std::vector<long long>>& rows) {
  std::vector<std::vector<Rational>> q;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (long long e : r) row.emplace_back(e);
    q.push_back(std::move(row));
  }
  return canonicalize(ambient, std::move(q));
}

Subspace Subspace::unit_span(int ambient, const std::vector<int>& axes) {
  std::vector<std::vector<Rational>> rows;
  for (int a : axes) {
    if (a < 0 || a >= ambient) throw Error("subspace: axis out of range");
    std::vector<Rational> row(ambient, Rational(0));
    row[a] = 1;
    rows.push_back(std::move(row));
  }
  return canonicalize(ambient, std::move(rows));
}

std::vector<int> Subspace::pivot_columns() const {
  std::vector<int> out;
  for (const auto& row : rows_)
    for (int c = 0; c < n_; ++c)
      if (row[c] != 0) {
        out.push_back(c);
        break;
      }
  return out;
}

bool Subspace::contains(const Subspace& other) const {
  if (n_ != other.n_) throw Error("subspace: ambient dimensions differ");
  if (other.dim() > dim()) return false;
  std::vector<int> pivots = pivot_columns();
  for (const auto& orow : other.rows_) {
    std::vector<Rational> v = to_rational(orow);
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (v[pivots[i]] == 0) continue;
      Rational f = v[pivots[i]] / Rational(rows_[i][pivots[i]]);
      for (int c = 0; c < n_; ++c) v[c] -= f * Rational(rows_[i][c]);
    }
    for (const Rational& e : v)
      if (e != 0) return false;
  }
  return true;
}

bool nested(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw Error("nested: ambient dimensions differ");
  return a.contains(b) || b.contains(a);
}

std::string Subspace::str() const {
  std::string out = "[";
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (i) out += "|";
    for (int c = 0; c < n_; ++c) {
      if (c) out += ",";
      out += rows_[i][c].str();
    }
  }
  out += "]";
  return out;
}

nlohmann::json Subspace::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json r = nlohmann::json::array();
    for (const Integer& e : row) r.push_back(to_ll(e));
    rows.push_back(r);
  }
  nlohmann::json j;
  j["dim"] = dim();
  j["rows"] = rows;
  return j;
}

Subspace Subspace::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array() ||
      j["rows"].empty())
    throw Error("subspace: expected an object with a nonempty \"rows\" array");
  std::vector<std::vector<long long>> rows;
  for (const auto& r : j["rows"]) rows.push_back(r.get<std::vector<long long>>());
  Subspace s = from_integer_rows(static_cast<int>(rows[0].size()), rows);
  if (j.contains("dim") && j["dim"].get<int>() != s.dim())
    throw Error("subspace: declared dim does not match rows");
  return s;
}

bool operator<(const Subspace& a, const Subspace& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  if (a.rows_.size() != b.rows_.size()) return a.rows_.size() < b.rows_.size();
  for (size_t i = 0; i < a.rows_.size(); ++i)
    for (int c = 0; c < a.n_; ++c) {
      if (a.rows_[i][c] != b.rows_[i][c]) return a.rows_[i][c] < b.rows_[i][c];
    }
  return false;
}

TupleStream::TupleStream(int k) : k_(k) {
  if (k < 1) throw Error("tuple stream: width must be positive");
}

void TupleStream::refill() {
  buf_.clear();
  pos_ = 0;
  ++height_;
  // Values at one height in the canonical value order.
  std::vector<long long> values;
  values.push_back(0);
  for (long long v = 1; v <= height_; ++v) values.push_back(v);
  for (long long v = 1; v <= height_; ++v) values.push_back(-v);

  // Odometer over positions k-1 down to 0, so the reversed tuple advances
  // lexicographically.
  std::vector<size_t> idx(k_, 0);
  std::vector<long long> tuple(k_, 0);
  while (true) {
    for (int p = 0; p < k_; ++p) tuple[p] = values[idx[k_ - 1 - p]];
    long long mx = 0;
    Integer g = 0;
    for (long long e : tuple) {
      mx = std::max(mx, std::abs(e));
      g = boost::multiprecision::gcd(g, Integer(e));
    }
    if (mx == height_ && g == 1) {
      long long first = 0;
      for (long long e : tuple)
        if (e != 0) {
          first = e;
          break;
        }
      if (first > 0) buf_.push_back(tuple);
    }
    int p = k_ - 1;
    while (p >= 0 && idx[p] + 1 == values.size()) idx[p--] = 0;
    if (p < 0) break;
    ++idx[p];
  }
}

std::vector<long long> TupleStream::next() {
  while (pos_ >= buf_.size()) refill();
  return buf_[pos_++];
}

CoordSubspaceStream::CoordSubspaceStream(int k, int d) : k_(k), d_(d), tuples_(k) {
  if (d < 1 || d >= k) throw Error("coordinate subspace stream: need 1 <= d < k");
}

bool CoordSubspaceStream::advance_combo() {
  // combo_ chooses d_-1 indices from {0..max_index_-1}, lexicographically.
  int take = d_ - 1;
  int i = take - 1;
  while (i >= 0 && combo_[i] == max_index_ - (take - i)) --i;
  if (i < 0) return false;
  ++combo_[i];
  for (int t = i + 1; t < take; ++t) combo_[t] = combo_[t - 1] + 1;
  return true;
}

Subspace CoordSubspaceStream::next() {
  if (d_ == 1) {
    std::vector<long long> t = tuples_.next();
    return Subspace::from_integer_rows(k_, {t});
  }
  while (true) {
    if (!combo_live_) {
      ++max_index_;
      while (static_cast<int>(pool_.size()) <= max_index_)
        pool_.push_back(tuples_.next());
      if (max_index_ < d_ - 1) continue;
      combo_.resize(d_ - 1);
      for (int i = 0; i < d_ - 1; ++i) combo_[i] = i;
      combo_live_ = true;
    }
    std::vector<std::vector<long long>> rows;
    for (int i : combo_) rows.push_back(pool_[i]);
    rows.push_back(pool_[max_index_]);
    if (!advance_combo()) combo_live_ = false;

    std::vector<std::vector<Rational>> q;
    for (const auto& r : rows) {
      std::vector<Rational> row;
      for (long long e : r) row.emplace_back(e);
      q.push_back(std::move(row));
    }
    Subspace s = Subspace::canonicalize(k_, std::move(q));
    if (s.dim() != d_) continue;           // rank-deficient index set
    if (!seen_.insert(s).second) continue;  // span seen through earlier indices
    return s;
  }
}

SubstrateHandle::SubstrateHandle(int n) : n_(n) {
  if (n < 3) throw Error("substrate: ambient dimension must be at least 3");
}

std::vector<Subspace> SubstrateHandle::hyperplanes_through(
    const Subspace& z, const std::vector<Subspace>& skip, int count) const {
  if (z.ambient() != n_) throw Error("substrate: ambient dimension mismatch");
  if (z.dim() > n_ - 2)
    throw Error("substrate: hyperplanes_through needs dim(z) <= n-2");
  std::vector<int> pivots = z.pivot_columns();
  std::vector<int> complement;
  for (int c = 0; c < n_; ++c)
    if (!std::binary_search(pivots.begin(), pivots.end(), c)) complement.push_back(c);
  const int k = static_cast<int>(complement.size());

  std::vector<Subspace> out;
  CoordSubspaceStream stream(k, k - 1);
  while (static_cast<int>(out.size()) < count) {
    Subspace coord = stream.next();
    std::vector<std::vector<Rational>> rows;
    for (const auto& zrow : z.rows()) rows.push_back(to_rational(zrow));
    for (const auto& crow : coord.rows()) {
      std::vector<Rational> row(n_, Rational(0));
      for (int t = 0; t < k; ++t) row[complement[t]] = Rational(crow[t]);
      rows.push_back(std::move(row));
    }
    Subspace h = Subspace::canonicalize(n_, std::move(rows));
    if (std::find(skip.begin(), skip.end(), h) != skip.end()) continue;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<Subspace> SubstrateHandle::subspaces_within(const Subspace& a, int dim,
                                                        int count) const {
  if (a.ambient() != n_) throw Error("substrate: ambient dimension mismatch");
  if (dim < 1 || dim >= a.dim())
    throw Error("substrate: subspaces_within needs 1 <= dim < dim(a)");
  std::vector<Subspace> out;
  CoordSubspaceStream stream(a.dim(), dim);
  while (static_cast<int>(out.size()) < count) {
    Subspace coord = stream.next();
    std::vector<std::vector<Rational>> rows;
    for (const auto& crow : coord.rows()) {
      std::vector<Rational> row(n_, Rational(0));
      for (int t = 0; t < a.dim(); ++t)
        for (int c = 0; c < n_; ++c) row[c] += Rational(crow[t]) * Rational(a.rows()[t][c]);
      rows.push_back(std::move(row));
    }
    out.push_back(Subspace::canonicalize(n_, std::move(rows)));
  }
  return out;
}

}  // namespace coxforge
