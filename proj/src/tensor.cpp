#include "spm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spm/error.hpp"
#include "spm/multi_index.hpp"

namespace spm {

namespace {

void check_shape(int order, int length) {
  if (order < 0) throw DimensionError("tensor order must be non-negative");
  if (length <= 0) throw DimensionError("tensor length must be positive");
}

// Kronecker product of a lexicographic vector with the rows of one column.
std::vector<double> kron_extend(const std::vector<double>& prev, const double* col, int length) {
  std::vector<double> next(prev.size() * static_cast<std::size_t>(length));
  std::size_t k = 0;
  for (double p : prev)
    for (int c = 0; c < length; ++c) next[k++] = p * col[c];
  return next;
}

}  // namespace

DenseTensor::DenseTensor(int order, int length)
    : order_(order), length_(length) {
  check_shape(order, length);
  data_.assign(ipow(static_cast<std::size_t>(length), order), 0.0);
}

DenseTensor::DenseTensor(int order, int length, std::vector<double> data)
    : order_(order), length_(length), data_(std::move(data)) {
  check_shape(order, length);
  if (data_.size() != ipow(static_cast<std::size_t>(length), order))
    throw DimensionError("tensor data length must equal L^m");
}

double DenseTensor::at(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_) throw DimensionError("index arity != tensor order");
  return data_[ravel(index, length_)];
}

double& DenseTensor::at(std::span<const int> index) {
  if (static_cast<int>(index.size()) != order_) throw DimensionError("index arity != tensor order");
  return data_[ravel(index, length_)];
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

SymTensor::SymTensor(int order, int length) : t_(order, length) {}

SymTensor SymTensor::from_dense(const DenseTensor& t, double tol) {
  double scale = 1.0;
  for (double v : t.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::size_t c = canonical_linear(i, t.order(), t.length());
    if (std::abs(t[i] - t[c]) > tol * scale)
      throw DimensionError("tensor is not symmetric within tolerance");
  }
  // canonical representative, exact on already symmetric data
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[canonical_linear(i, t.order(), t.length())];
  return SymTensor::unchecked(DenseTensor(t.order(), t.length(), std::move(out)));
}

SymTensor SymTensor::from_data(int order, int length, std::vector<double> data, double tol) {
  return from_dense(DenseTensor(order, length, std::move(data)), tol);
}

SymTensor SymTensor::unchecked(DenseTensor t) { return SymTensor(std::move(t)); }

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  if (o.order() != order() || o.length() != length()) throw DimensionError("shape mismatch in +");
  auto d = t_.data();
  auto s = o.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  if (o.order() != order() || o.length() != length()) throw DimensionError("shape mismatch in -");
  auto d = t_.data();
  auto s = o.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (double& v : t_.data()) v *= s;
  return *this;
}

SymTensor symmetrize(const DenseTensor& t) {
  const std::size_t size = t.size();
  std::vector<double> sum(size, 0.0);
  std::vector<int> count(size, 0);
  std::vector<std::size_t> canon(size);
  for (std::size_t i = 0; i < size; ++i) {
    canon[i] = canonical_linear(i, t.order(), t.length());
    sum[canon[i]] += t[i];
    ++count[canon[i]];
  }
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = sum[canon[i]] / count[canon[i]];
  return SymTensor::unchecked(DenseTensor(t.order(), t.length(), std::move(out)));
}

SymTensor tensor_power(const Vector& v, int m) {
  if (m < 0) throw DimensionError("tensor power order must be non-negative");
  const int length = static_cast<int>(v.size());
  std::vector<double> data{1.0};
  for (int k = 0; k < m; ++k) data = kron_extend(data, v.data(), length);
  return SymTensor::unchecked(DenseTensor(m, length, std::move(data)));
}

DenseTensor outer(const DenseTensor& t, const DenseTensor& u) {
  if (t.length() != u.length()) throw DimensionError("outer: length mismatch");
  std::vector<double> data;
  data.reserve(t.size() * u.size());
  for (double a : t.data())
    for (double b : u.data()) data.push_back(a * b);
  return DenseTensor(t.order() + u.order(), t.length(), std::move(data));
}

DenseTensor contract(const DenseTensor& t, const DenseTensor& u) {
  if (t.length() != u.length()) throw DimensionError("contract: length mismatch");
  if (u.order() > t.order()) throw DimensionError("contract: order(U) > order(T)");
  const int rest = t.order() - u.order();
  DenseTensor out(rest, t.length());
  const std::size_t stride = out.size();
  auto o = out.data();
  for (std::size_t a = 0; a < u.size(); ++a) {
    const double ua = u[a];
    const double* row = t.data().data() + a * stride;
    for (std::size_t b = 0; b < stride; ++b) o[b] += row[b] * ua;
  }
  return out;
}

double inner(const DenseTensor& t, const DenseTensor& u) {
  if (t.order() != u.order() || t.length() != u.length()) throw DimensionError("inner: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * u[i];
  return s;
}

Eigen::Map<const RowMajorMatrix> flatten_mat(const SymTensor& t) {
  if (t.order() % 2 != 0) throw DimensionError("flatten_mat requires even order");
  const auto side = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(t.length()), t.order() / 2));
  return Eigen::Map<const RowMajorMatrix>(t.data().data(), side, side);
}

Vector vectorize(const SymTensor& u) {
  return Eigen::Map<const Vector>(u.data().data(), static_cast<Eigen::Index>(u.size()));
}

SymTensor unvectorize(const Vector& v, int order, int length) {
  std::vector<double> data(v.data(), v.data() + v.size());
  return SymTensor::from_data(order, length, std::move(data));
}

Matrix khatri_rao_power(const Matrix& a, int n) {
  if (n < 1) throw DimensionError("khatri_rao_power requires n >= 1");
  const int length = static_cast<int>(a.rows());
  Matrix out(static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(length), n)), a.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    std::vector<double> col{1.0};
    for (int k = 0; k < n; ++k) col = kron_extend(col, a.col(i).data(), length);
    out.col(i) = Eigen::Map<const Vector>(col.data(), static_cast<Eigen::Index>(col.size()));
  }
  return out;
}

Matrix star_power(const Matrix& a, int n) {
  if (n < 1) throw DimensionError("star_power requires n >= 1");
  if (a.cols() < 1) throw DimensionError("star_power requires at least one column");
  const int length = static_cast<int>(a.rows());
  const auto idx = sorted_multi_indices(static_cast<int>(a.cols()), n);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(length), n)),
                            static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    std::vector<int> arr = idx[c].entries;
    do {
      std::vector<double> col{1.0};
      for (int j : arr) col = kron_extend(col, a.col(j).data(), length);
      out.col(static_cast<Eigen::Index>(c)) += Eigen::Map<const Vector>(col.data(), out.rows());
    } while (std::next_permutation(arr.begin(), arr.end()));
    out.col(static_cast<Eigen::Index>(c)) /= static_cast<double>(idx[c].multiplicity);
  }
  return out;
}

SymTensor tucker_apply(const Matrix& a, const SymTensor& core) {
  if (a.cols() != core.length()) throw DimensionError("tucker_apply: A.cols() != core length");
  const int m = core.order();
  const auto big = static_cast<std::size_t>(a.rows());
  const auto small = static_cast<std::size_t>(a.cols());
  std::vector<std::size_t> dims(static_cast<std::size_t>(m), small);
  std::vector<double> cur(core.data().begin(), core.data().end());
  for (int mode = 0; mode < m; ++mode) {
    std::size_t outer_n = 1, inner_n = 1;
    for (int k = 0; k < mode; ++k) outer_n *= dims[static_cast<std::size_t>(k)];
    for (int k = mode + 1; k < m; ++k) inner_n *= dims[static_cast<std::size_t>(k)];
    std::vector<double> next(outer_n * big * inner_n, 0.0);
    for (std::size_t o = 0; o < outer_n; ++o)
      for (std::size_t kk = 0; kk < small; ++kk) {
        const double* src = cur.data() + (o * small + kk) * inner_n;
        for (std::size_t i = 0; i < big; ++i) {
          const double aik = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(kk));
          if (aik == 0.0) continue;
          double* dst = next.data() + (o * big + i) * inner_n;
          for (std::size_t in = 0; in < inner_n; ++in) dst[in] += aik * src[in];
        }
      }
    dims[static_cast<std::size_t>(mode)] = big;
    cur = std::move(next);
  }
  return symmetrize(DenseTensor(m, static_cast<int>(big), std::move(cur)));
}

Matrix core_to_matrix(const SymTensor& core) {
  if (core.order() % 2 != 0) throw DimensionError("core_to_matrix requires even order");
  const int n = core.order() / 2;
  const auto idx = sorted_multi_indices(core.length(), n);
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  std::vector<int> both(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& ii = idx[static_cast<std::size_t>(i)];
      const auto& jj = idx[static_cast<std::size_t>(j)];
      std::copy(ii.entries.begin(), ii.entries.end(), both.begin());
      std::copy(jj.entries.begin(), jj.entries.end(), both.begin() + n);
      out(i, j) = static_cast<double>(ii.multiplicity * jj.multiplicity) * core.at(both);
    }
  return out;
}

SymTensor matrix_to_core(const Matrix& m, int n, int ell) {
  const auto idx = sorted_multi_indices(ell, n);
  const auto k = static_cast<Eigen::Index>(idx.size());
  if (m.rows() != k || m.cols() != k) throw DimensionError("matrix_to_core: matrix is not K x K");
  std::map<std::vector<int>, std::size_t> position;
  for (std::size_t i = 0; i < idx.size(); ++i) position[idx[i].entries] = i;

  DenseTensor core(2 * n, ell);
  for (const auto& full : sorted_multi_indices(ell, 2 * n)) {
    double sum = 0.0;
    int splits = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      // J = full \ I as multisets, if I is contained in full
      std::vector<int> rest;
      if (!std::includes(full.entries.begin(), full.entries.end(), idx[i].entries.begin(), idx[i].entries.end()))
        continue;
      std::set_difference(full.entries.begin(), full.entries.end(), idx[i].entries.begin(),
                          idx[i].entries.end(), std::back_inserter(rest));
      const std::size_t j = position.at(rest);
      sum += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
             static_cast<double>(idx[i].multiplicity * idx[j].multiplicity);
      ++splits;
    }
    const double value = sum / splits;
    std::vector<int> arr = full.entries;
    do {
      core.at(arr) = value;
    } while (std::next_permutation(arr.begin(), arr.end()));
  }
  return SymTensor::unchecked(std::move(core));
}

void canonicalize_sign(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-14) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

SymTensor cp_reconstruct(const CPDecomposition& d, int order, int length) {
  for (const auto& c : d.components)
    if (c.vector.size() != length) throw DimensionError("cp_reconstruct: component length mismatch");
  if (order % 2 != 0 || order == 0 || d.components.empty()) {
    SymTensor out(order, length);
    for (const auto& c : d.components) out += c.weight * tensor_power(c.vector, order);
    return out;
  }
  // mat(T) = K diag(w) K^T with K the Khatri-Rao power, then symmetrized to
  // wash out rounding differences between arrangements.
  const auto r = static_cast<Eigen::Index>(d.components.size());
  Matrix a(length, r);
  Vector w(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    a.col(i) = d.components[static_cast<std::size_t>(i)].vector;
    w[i] = d.components[static_cast<std::size_t>(i)].weight;
  }
  const Matrix k = khatri_rao_power(a, order / 2);
  DenseTensor full(order, length);
  Eigen::Map<RowMajorMatrix>(full.data().data(), k.rows(), k.rows()).noalias() = k * w.asDiagonal() * k.transpose();
  return symmetrize(full);
}

SymTensor btd_reconstruct(const BlockTermDecomposition& d) {
  SymTensor out(d.order, d.length);
  for (const auto& b : d.blocks) {
    if (b.factor.rows() != d.length || b.core.order() != d.order)
      throw DimensionError("btd_reconstruct: block shape mismatch");
    out += tucker_apply(b.factor, b.core);
  }
  return out;
}

Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

}  // namespace spm
