#include "liedetect/rep_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "liedetect/errors.hpp"
#include "liedetect/matrix_kernel.hpp"

namespace liedetect {

int Group::dimension() const {
  switch (kind) {
    case GroupKind::SO2: return 1;
    case GroupKind::Torus: return torus_dim;
    case GroupKind::SU2:
    case GroupKind::SO3: return 3;
  }
  return 0;
}

std::string Group::name() const {
  switch (kind) {
    case GroupKind::SO2: return "SO2";
    case GroupKind::Torus: return "T" + std::to_string(torus_dim);
    case GroupKind::SU2: return "SU2";
    case GroupKind::SO3: return "SO3";
  }
  return "?";
}

Group Group::parse(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t == "SO2" || t == "SO(2)" || t == "T1") return {GroupKind::SO2, 1};
  if (t == "SU2" || t == "SU(2)") return {GroupKind::SU2, 1};
  if (t == "SO3" || t == "SO(3)") return {GroupKind::SO3, 1};
  if (t.size() >= 2 && t[0] == 'T') {
    int d = 0;
    try {
      d = std::stoi(t.substr(1));
    } catch (...) {
      d = 0;
    }
    if (d == 1) return {GroupKind::SO2, 1};
    if (d >= 2) return {GroupKind::Torus, d};
  }
  throw Error(ErrorCode::Configuration, "unknown group '" + text + "'");
}

int RepresentationType::block_count() const {
  switch (group.kind) {
    case GroupKind::SO2: return static_cast<int>(weights.size());
    case GroupKind::Torus: return static_cast<int>(lattice.cols());
    default: return std::accumulate(parts.begin(), parts.end(), 0);
  }
}

int RepresentationType::min_ambient() const {
  switch (group.kind) {
    case GroupKind::SO2:
    case GroupKind::Torus: return 2 * block_count();
    default: return block_count();
  }
}

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

std::string RepresentationType::label() const {
  switch (group.kind) {
    case GroupKind::SO2: return join(weights);
    case GroupKind::Torus: {
      std::ostringstream os;
      os << '[';
      for (Eigen::Index i = 0; i < lattice.rows(); ++i) {
        std::vector<int> row(lattice.cols());
        for (Eigen::Index j = 0; j < lattice.cols(); ++j) row[j] = lattice(i, j);
        os << (i ? "," : "") << join(row);
      }
      os << ']';
      return os.str();
    }
    default: return join(parts);
  }
}

bool RepresentationType::operator==(const RepresentationType& other) const {
  if (!(group == other.group)) return false;
  switch (group.kind) {
    case GroupKind::SO2: return weights == other.weights;
    case GroupKind::Torus:
      return lattice.rows() == other.lattice.rows() && lattice.cols() == other.lattice.cols() &&
             canonical_lattice_key(lattice) == canonical_lattice_key(other.lattice);
    default: return parts == other.parts;
  }
}

RepresentationType so2_type(std::vector<int> weights) {
  RepresentationType r;
  r.group = {GroupKind::SO2, 1};
  for (int& w : weights) w = std::abs(w);
  std::sort(weights.begin(), weights.end());
  r.weights = std::move(weights);
  return r;
}

RepresentationType torus_type(const IMat& lattice) {
  RepresentationType r;
  r.group = {GroupKind::Torus, static_cast<int>(lattice.rows())};
  if (lattice.rows() == 1) r.group = {GroupKind::SO2, 1};
  r.lattice = lattice;
  if (lattice.rows() == 1) {
    std::vector<int> w(lattice.cols());
    for (Eigen::Index j = 0; j < lattice.cols(); ++j) w[j] = lattice(0, j);
    return so2_type(w);
  }
  return r;
}

RepresentationType partition_type(GroupKind kind, std::vector<int> parts) {
  RepresentationType r;
  r.group = {kind, 1};
  std::sort(parts.begin(), parts.end());
  r.parts = std::move(parts);
  return r;
}

// ---------------------------------------------------------------------------
// SO(2)

std::vector<RepresentationType> enumerate_so2_types(int m, int w_max, bool allow_zero, bool distinct_only) {
  if (m <= 0) throw Error(ErrorCode::EmptyAmbient, "m must be positive");
  if (w_max < 1) throw Error(ErrorCode::Configuration, "w_max must be at least 1");
  std::vector<RepresentationType> out;
  std::vector<int> cur(m, 0);
  const int lo = allow_zero ? 0 : 1;
  // depth-first over non-decreasing tuples, which yields lexicographic order
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == m) {
      int g = 0;
      for (int w : cur) g = std::gcd(g, w);
      if (g == 1) out.push_back(so2_type(cur));
      return;
    }
    for (int w = start; w <= w_max; ++w) {
      cur[pos] = w;
      self(self, pos + 1, distinct_only ? w + 1 : w);
    }
  };
  rec(rec, 0, lo);
  return out;
}

// ---------------------------------------------------------------------------
// Integer linear algebra

namespace {

using LMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Fraction-free Gaussian elimination.
long long bareiss_det(LMat a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

long long minor_gcd(const LMat& a, int k) {
  long long g = 0;
  for_each_combination(static_cast<int>(a.rows()), k, [&](const std::vector<int>& rows) {
    for_each_combination(static_cast<int>(a.cols()), k, [&](const std::vector<int>& cols) {
      LMat sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = a(rows[i], cols[j]);
      g = std::gcd(g, std::llabs(bareiss_det(sub)));
    });
  });
  return g;
}

LMat to_long(const IMat& m) { return m.cast<long long>(); }

}  // namespace

std::vector<long long> smith_invariants(const IMat& m) {
  const LMat a = to_long(m);
  const int r = static_cast<int>(std::min(a.rows(), a.cols()));
  std::vector<long long> out;
  long long prev = 1;
  for (int k = 1; k <= r; ++k) {
    const long long dk = minor_gcd(a, k);
    if (dk == 0) break;
    out.push_back(dk / prev);
    prev = dk;
  }
  return out;
}

int integer_rank(const IMat& m) {
  return static_cast<int>(Eigen::FullPivLU<Mat>(m.cast<double>()).rank());
}

bool is_primitive_lattice(const IMat& basis) {
  const auto inv = smith_invariants(basis);
  if (static_cast<Eigen::Index>(inv.size()) < basis.rows()) return false;
  return std::all_of(inv.begin(), inv.end(), [](long long v) { return v == 1; });
}

namespace {

// D * projection onto the row span, reduced to lowest terms.
CanonicalLatticeKey scaled_projection(const IMat& basis) {
  const Eigen::Index d = basis.rows(), m = basis.cols();
  const LMat b = to_long(basis);
  const LMat g = b * b.transpose();
  const long long det = bareiss_det(g);
  if (det == 0) throw Error(ErrorCode::RankDeficient, "lattice basis has rank < d");
  LMat adj(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      LMat minor(d - 1, d - 1);
      for (Eigen::Index r = 0, rr = 0; r < d; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < d; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = g(r, c);
        }
        ++rr;
      }
      adj(i, j) = (((i + j) % 2) ? -1 : 1) * bareiss_det(minor);
    }
  LMat s = b.transpose() * adj * b;
  long long gg = std::llabs(det);
  for (Eigen::Index i = 0; i < m * m; ++i) gg = std::gcd(gg, std::llabs(s(i)));
  CanonicalLatticeKey key;
  key.m = static_cast<int>(m);
  key.scale = det / gg;
  if (key.scale < 0) {
    key.scale = -key.scale;
    s = -s;
  }
  key.entries.resize(m * m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) key.entries[i * m + j] = s(i, j) / gg;
  return key;
}

CanonicalLatticeKey minimize_over_signed_permutations(const CanonicalLatticeKey& raw) {
  const int m = raw.m;
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<long long> best, cand(m * m);
  const int sign_patterns = 1 << std::max(0, m - 1);  // a global sign flip is invisible
  do {
    for (int mask = 0; mask < sign_patterns; ++mask) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const int si = (i > 0 && (mask >> (i - 1)) & 1) ? -1 : 1;
          const int sj = (j > 0 && (mask >> (j - 1)) & 1) ? -1 : 1;
          cand[i * m + j] = si * sj * raw.entries[perm[i] * m + perm[j]];
        }
      if (best.empty() || cand < best) best = cand;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  CanonicalLatticeKey out = raw;
  out.entries = best;
  return out;
}

}  // namespace

Mat CanonicalLatticeKey::projection() const {
  Mat p(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) p(i, j) = static_cast<double>(entries[i * m + j]) / static_cast<double>(scale);
  return p;
}

CanonicalLatticeKey canonical_lattice_key(const IMat& basis) {
  if (basis.rows() == 0 || integer_rank(basis) < basis.rows())
    throw Error(ErrorCode::RankDeficient, "lattice basis has rank < d");
  return minimize_over_signed_permutations(scaled_projection(basis));
}

// ---------------------------------------------------------------------------
// Tori

namespace {

// Columns are the block weights. A zero column is a trivial block and two columns that
// agree up to sign rotate two planes in lockstep; in both cases the orbit cannot span R^2m.
bool spanning_columns(const IMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).cwiseAbs().maxCoeff() == 0) return false;
    for (Eigen::Index k = 0; k < j; ++k)
      if (m.col(j) == m.col(k) || m.col(j) == -m.col(k)) return false;
  }
  return true;
}

long long small_det(const long long* a, int d, int stride, const int* cols) {
  auto at = [&](int i, int j) { return a[i * stride + cols[j]]; };
  switch (d) {
    case 1: return at(0, 0);
    case 2: return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    case 3:
      return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    default: {
      LMat sub(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sub(i, j) = at(i, j);
      return bareiss_det(sub);
    }
  }
}

// gcd of the maximal minors; it equals 1 exactly when the rows form a basis of a
// rank-d primitive lattice (all Smith invariants are 1).
long long maximal_minor_gcd(const IMat& m) {
  const int d = static_cast<int>(m.rows()), n = static_cast<int>(m.cols());
  std::vector<long long> a(d * n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  long long g = 0;
  for_each_combination(n, d, [&](const std::vector<int>& cols) { g = std::gcd(g, std::llabs(small_det(a.data(), d, n, cols.data()))); });
  return g;
}

// Smaller is a nicer representative: small entries first, then more non-negative entries.
std::tuple<int, int, int> representative_rank(const IMat& m) {
  int negatives = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) negatives += m(i) < 0;
  return {m.cwiseAbs().maxCoeff(), m.cwiseAbs().sum(), negatives};
}

bool lex_less(const IMat& a, const IMat& b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return a(i, j) > b(i, j);
  return false;
}

std::vector<RepresentationType> enumerate_torus_impl(int m, int d, int w_max) {
  struct Raw {
    std::vector<long long> entries;
    long long scale;
    bool operator==(const Raw&) const = default;
  };
  struct RawHash {
    size_t operator()(const Raw& r) const {
      size_t h = std::hash<long long>()(r.scale);
      for (long long v : r.entries) h = h * 1000003u ^ std::hash<long long>()(v);
      return h;
    }
  };
  std::unordered_map<Raw, CanonicalLatticeKey, RawHash> seen_spans;
  std::map<CanonicalLatticeKey, IMat> classes;

  const int base = 2 * w_max + 1;
  const int cells = m * d;
  std::vector<int> digits(cells, 0);
  IMat cur(d, m);
  while (true) {
    for (int c = 0; c < cells; ++c) cur(c / m, c % m) = digits[c] - w_max;
    if (spanning_columns(cur) && maximal_minor_gcd(cur) == 1) {
      const CanonicalLatticeKey raw = scaled_projection(cur);
      const Raw raw_id{raw.entries, raw.scale};
      auto it = seen_spans.find(raw_id);
      if (it == seen_spans.end()) it = seen_spans.emplace(raw_id, minimize_over_signed_permutations(raw)).first;
      auto [cls, inserted] = classes.emplace(it->second, cur);
      if (!inserted) {
        const auto a = representative_rank(cur), b = representative_rank(cls->second);
        if (a < b || (a == b && lex_less(cur, cls->second))) cls->second = cur;
      }
    }
    int c = cells - 1;
    while (c >= 0 && ++digits[c] == base) digits[c--] = 0;
    if (c < 0) break;
  }
  std::vector<RepresentationType> out;
  for (auto& [key, rep] : classes) out.push_back(torus_type(rep));
  return out;
}

}  // namespace

std::vector<RepresentationType> enumerate_torus_types(int m, int d, int w_max) {
  if (m <= 0) throw Error(ErrorCode::EmptyAmbient, "m must be positive");
  if (d <= 0) throw Error(ErrorCode::Configuration, "torus dimension must be positive");
  if (d > m) throw Error(ErrorCode::NoAlmostFaithfulRep, "T^" + std::to_string(d) + " has no almost-faithful representation with " + std::to_string(m) + " blocks");
  if (w_max < 1) throw Error(ErrorCode::Configuration, "w_max must be at least 1");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<RepresentationType>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({m, d, w_max});
    if (it != cache.end()) return it->second;
  }
  auto out = enumerate_torus_impl(m, d, w_max);
  std::lock_guard<std::mutex> lock(mu);
  cache[{m, d, w_max}] = out;
  return out;
}

// ---------------------------------------------------------------------------
// Partitions

namespace {

bool admissible_part(GroupKind kind, int p) {
  if (p <= 0) return false;
  if (p % 2 == 1) return true;
  return kind == GroupKind::SU2 && p % 4 == 0;
}

}  // namespace

std::vector<RepresentationType> enumerate_partition_types(GroupKind kind, int n, bool nontrivial_only) {
  if (kind != GroupKind::SU2 && kind != GroupKind::SO3)
    throw Error(ErrorCode::Configuration, "partition catalogs exist for SU2 and SO3 only");
  std::vector<RepresentationType> out;
  if (n < 1) return out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int min_part) -> void {
    if (remaining == 0) {
      const bool trivial = std::all_of(cur.begin(), cur.end(), [](int p) { return p == 1; });
      if (!(nontrivial_only && trivial)) out.push_back(partition_type(kind, cur));
      return;
    }
    for (int p = min_part; p <= remaining; ++p) {
      if (!admissible_part(kind, p)) continue;
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline catalogs

std::vector<RepresentationType> pipeline_candidates(const Group& group, int n, int w_max) {
  if (n < 1) throw Error(ErrorCode::EmptyAmbient, "ambient dimension must be positive");
  std::vector<RepresentationType> out;
  switch (group.kind) {
    case GroupKind::SO2: {
      if (n < 2) throw Error(ErrorCode::NoAlmostFaithfulRep, "SO2 needs ambient dimension >= 2");
      out = enumerate_so2_types(n / 2, w_max, false, true);
      break;
    }
    case GroupKind::Torus: {
      if (2 * group.torus_dim > n)
        throw Error(ErrorCode::NoAlmostFaithfulRep, group.name() + " has no almost-faithful representation in R^" + std::to_string(n));
      out = enumerate_torus_types(n / 2, group.torus_dim, w_max);
      break;
    }
    case GroupKind::SU2:
    case GroupKind::SO3: {
      out = enumerate_partition_types(group.kind, n, true);
      break;
    }
  }
  if (out.empty())
    throw Error(ErrorCode::NoAlmostFaithfulRep, group.name() + " has no candidate representation in R^" + std::to_string(n));
  return out;
}

// ---------------------------------------------------------------------------
// Irreducible representations

namespace {

// Real form of the spin-j representation, j integer, dimension 2j+1. The complex
// generators -i J_k are conjugated into the basis |0>, (|m> + (-1)^m |-m>)/sqrt2,
// i(|m> - (-1)^m |-m>)/sqrt2, where they become real.
Frame integer_spin_generators(int j) {
  using C = std::complex<double>;
  const int n = 2 * j + 1;
  auto index = [&](int mm) { return j - mm; };  // basis ordered m = j, ..., -j
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(n, n), jp = Eigen::MatrixXcd::Zero(n, n);
  for (int mm = -j; mm <= j; ++mm) {
    jz(index(mm), index(mm)) = static_cast<double>(mm);
    if (mm < j) jp(index(mm + 1), index(mm)) = std::sqrt(static_cast<double>(j * (j + 1) - mm * (mm + 1)));
  }
  Eigen::MatrixXcd jm = jp.adjoint();
  const C i(0.0, 1.0);
  Eigen::MatrixXcd jx = 0.5 * (jp + jm), jy = (jp - jm) / (2.0 * i);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  int col = 0;
  u(index(0), col++) = 1.0;
  for (int mm = 1; mm <= j; ++mm) {
    const double sgn = (mm % 2) ? -1.0 : 1.0;
    u(index(mm), col) = r;
    u(index(-mm), col++) = sgn * r;
    u(index(mm), col) = i * r;
    u(index(-mm), col++) = -i * sgn * r;
  }
  Frame out;
  for (const Eigen::MatrixXcd& g : {jx, jy, jz}) out.push_back((u.adjoint() * (-i * g) * u).real());
  return out;
}

// Matrix elements for half-integer j with real dimension 4j+2 (k, l are 1-based).
Frame half_integer_spin_generators(int two_j) {
  const double j = two_j / 2.0;
  const int n = 2 * two_j + 2;
  auto a = [&](int l) { return l >= 1 ? std::sqrt((2.0 * j * l - l * (l - 1.0)) / 4.0) : 0.0; };
  auto delta = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  Mat l1 = Mat::Zero(n, n), l2 = Mat::Zero(n, n), l3 = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      const double even = (k % 2 == 0) ? 1.0 : 0.0, odd = 1.0 - even;
      l1(k - 1, l - 1) = odd * (delta(l, k + 3) * a((k + 1) / 2) + delta(k, l + 1) * a((k - 1) / 2)) -
                         even * (delta(l, k + 1) * a(k / 2) + delta(k, l + 3) * a((k - 2) / 2));
      l2(k - 1, l - 1) = delta(l, k + 2) * a((k + 1) / 2) - delta(k, l + 2) * a((k - 1) / 2);
      l3(k - 1, l - 1) = 0.25 * (2.0 * even * delta(k, l + 1) * (2 * j + 2 - k) - 2.0 * odd * delta(l, k + 1) * (2 * j + 1 - k));
    }
  return {l1, l2, l3};
}

}  // namespace

IrrepBasis irrep_basis(GroupKind kind, int label) {
  IrrepBasis out;
  if (kind == GroupKind::SO2 || kind == GroupKind::Torus) {
    if (label == 0) {
      out.dimension = 1;
      out.generators = {Mat::Zero(1, 1)};
    } else {
      out.dimension = 2;
      out.generators = {rotation_generator(label)};
    }
    return out;
  }
  if (!admissible_part(kind, label))
    throw Error(ErrorCode::NoRealIrrep, "no real irreducible representation of " + Group{kind, 1}.name() + " in dimension " + std::to_string(label));
  out.dimension = label;
  if (label == 1) {
    out.generators = {Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1)};
  } else if (label % 2 == 1) {
    out.generators = integer_spin_generators((label - 1) / 2);
  } else {
    out.generators = half_integer_spin_generators(label / 2 - 1);
  }
  return out;
}

Frame group_generators(const RepresentationType& rep, int n) {
  const int need = rep.min_ambient();
  switch (rep.group.kind) {
    case GroupKind::SO2: {
      if (n < need || n > need + 1) throw Error(ErrorCode::DimensionMismatch, "SO2 type " + rep.label() + " does not act on R^" + std::to_string(n));
      Vec w(rep.weights.size());
      for (size_t i = 0; i < rep.weights.size(); ++i) w(i) = rep.weights[i];
      return {block_diag_generator(w, n)};
    }
    case GroupKind::Torus: {
      if (n < need || n > need + 1) throw Error(ErrorCode::DimensionMismatch, "torus type " + rep.label() + " does not act on R^" + std::to_string(n));
      Frame out;
      for (Eigen::Index i = 0; i < rep.lattice.rows(); ++i) out.push_back(block_diag_generator(rep.lattice.row(i).cast<double>().transpose(), n));
      return out;
    }
    default: {
      if (n != need) throw Error(ErrorCode::DimensionMismatch, "partition " + rep.label() + " does not sum to " + std::to_string(n));
      Frame out(3, Mat::Zero(n, n));
      int offset = 0;
      for (int p : rep.parts) {
        const IrrepBasis irr = irrep_basis(rep.group.kind, p);
        for (int k = 0; k < 3; ++k) out[k].block(offset, offset, p, p) = irr.generators[k];
        offset += p;
      }
      return out;
    }
  }
}

Frame assemble_frame(const RepresentationType& rep, int n) {
  Frame gens = group_generators(rep, n);
  Frame out = orthonormalize_frame(gens, 1e-12);
  if (out.size() != gens.size())
    throw Error(ErrorCode::RankDeficient, "type " + rep.label() + " has a degenerate pushforward algebra");
  return out;
}

}  // namespace liedetect
