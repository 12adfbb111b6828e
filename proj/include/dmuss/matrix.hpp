#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dmuss/errors.hpp"
#include "dmuss/field.hpp"

namespace dmuss {

// Dense row-major matrix over a prime field. Zero-sized dimensions are legal;
// a 0-column or 0-row matrix behaves like the empty linear map.
struct FieldMatrix {
  Field field;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> data;  // rows * cols canonical residues

  FieldMatrix() = default;
  FieldMatrix(Field f, std::size_t r, std::size_t c)
      : field(f), rows(r), cols(c), data(r * c, 0) {}
  FieldMatrix(Field f, std::size_t r, std::size_t c, std::vector<Elem> entries)
      : field(f), rows(r), cols(c), data(std::move(entries)) {
    if (data.size() != rows * cols) {
      throw ShapeMismatchError("FieldMatrix: entry count does not match shape");
    }
    for (Elem& e : data) e %= field.q;
  }

  Elem& at(std::size_t r, std::size_t c) {
    check_index(r, c);
    return data[r * cols + c];
  }
  Elem at(std::size_t r, std::size_t c) const {
    check_index(r, c);
    return data[r * cols + c];
  }
  std::span<const Elem> row(std::size_t r) const {
    check_index(r, cols == 0 ? 0 : cols - 1);
    return {data.data() + r * cols, cols};
  }

  static FieldMatrix identity(Field f, std::size_t n) {
    FieldMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data[i * n + i] = 1;
    return m;
  }

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.field == b.field && a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }

 private:
  void check_index(std::size_t r, std::size_t c) const {
    if (r >= rows || (cols > 0 && c >= cols)) {
      throw IndexOutOfRangeError("FieldMatrix: index (" + std::to_string(r) + "," +
                                 std::to_string(c) + ") out of " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
    }
  }
};

namespace detail {

// Row-echelon elimination in place; returns the pivot count (= rank).
// Pivots are chosen scanning columns left to right and rows top-down.
inline std::size_t eliminate(FieldMatrix& m, int* swap_parity = nullptr) {
  const Field f = m.field;
  std::size_t pivot_row = 0;
  if (swap_parity) *swap_parity = 0;
  for (std::size_t col = 0; col < m.cols && pivot_row < m.rows; ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.rows && m.data[sel * m.cols + col] == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != pivot_row) {
      for (std::size_t c = 0; c < m.cols; ++c) {
        std::swap(m.data[sel * m.cols + c], m.data[pivot_row * m.cols + c]);
      }
      if (swap_parity) *swap_parity ^= 1;
    }
    const Elem pivot = m.data[pivot_row * m.cols + col];
    const Elem pivot_inv = f.inv(pivot);
    for (std::size_t r = pivot_row + 1; r < m.rows; ++r) {
      const Elem factor = m.data[r * m.cols + col];
      if (factor == 0) continue;
      const Elem scale = f.mul(factor, pivot_inv);
      for (std::size_t c = col; c < m.cols; ++c) {
        m.data[r * m.cols + c] =
            f.sub(m.data[r * m.cols + c], f.mul(scale, m.data[pivot_row * m.cols + c]));
      }
    }
    ++pivot_row;
  }
  return pivot_row;
}

}  // namespace detail

inline std::size_t rank(FieldMatrix m) { return detail::eliminate(m); }

inline Elem determinant(FieldMatrix m) {
  if (m.rows != m.cols) {
    throw NotSquareError("determinant: matrix is " + std::to_string(m.rows) + "x" +
                         std::to_string(m.cols));
  }
  const Field f = m.field;
  int parity = 0;
  const std::size_t r = detail::eliminate(m, &parity);
  if (r < m.rows) return 0;
  Elem det = 1;
  for (std::size_t i = 0; i < m.rows; ++i) det = f.mul(det, m.data[i * m.cols + i]);
  return parity ? f.neg(det) : det;
}

// Gauss-Jordan reduction that turns the target-column block into an identity
// stacked over zeros while preserving the row space. Target columns are
// pivoted in the given order; the pivot row for the t-th target column is the
// first row >= t with a nonzero entry, scanning top-down.
inline FieldMatrix pivot_reduce(FieldMatrix m, const std::vector<std::size_t>& target_cols) {
  const Field f = m.field;
  if (target_cols.size() > m.rows) {
    throw RankDeficientTargetError("pivot_reduce: more target columns than rows");
  }
  for (std::size_t col : target_cols) {
    if (col >= m.cols) {
      throw IndexOutOfRangeError("pivot_reduce: target column " + std::to_string(col) +
                                 " out of range");
    }
  }
  std::size_t next = 0;
  for (std::size_t col : target_cols) {
    std::size_t sel = next;
    while (sel < m.rows && m.data[sel * m.cols + col] == 0) ++sel;
    if (sel == m.rows) {
      throw RankDeficientTargetError("pivot_reduce: target block is rank deficient at column " +
                                     std::to_string(col));
    }
    if (sel != next) {
      for (std::size_t c = 0; c < m.cols; ++c) {
        std::swap(m.data[sel * m.cols + c], m.data[next * m.cols + c]);
      }
    }
    const Elem pivot_inv = f.inv(m.data[next * m.cols + col]);
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.data[next * m.cols + c] = f.mul(m.data[next * m.cols + c], pivot_inv);
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == next) continue;
      const Elem factor = m.data[r * m.cols + col];
      if (factor == 0) continue;
      for (std::size_t c = 0; c < m.cols; ++c) {
        m.data[r * m.cols + c] =
            f.sub(m.data[r * m.cols + c], f.mul(factor, m.data[next * m.cols + c]));
      }
    }
    ++next;
  }
  return m;
}

inline FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.field.q != b.field.q) {
    throw ShapeMismatchError("mat_mul: operands live in different fields");
  }
  if (a.cols != b.rows) {
    throw ShapeMismatchError("mat_mul: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                             " times " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
  }
  const Field f = a.field;
  FieldMatrix out(f, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Elem aik = a.data[i * a.cols + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        out.data[i * out.cols + j] =
            f.add(out.data[i * out.cols + j], f.mul(aik, b.data[k * b.cols + j]));
      }
    }
  }
  return out;
}

// Extracted block in the given row/column order; indices may repeat.
inline FieldMatrix submatrix(const FieldMatrix& m, const std::vector<std::size_t>& row_idx,
                             const std::vector<std::size_t>& col_idx) {
  for (std::size_t r : row_idx) {
    if (r >= m.rows) throw IndexOutOfRangeError("submatrix: row " + std::to_string(r));
  }
  for (std::size_t c : col_idx) {
    if (c >= m.cols) throw IndexOutOfRangeError("submatrix: column " + std::to_string(c));
  }
  FieldMatrix out(m.field, row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i) {
    for (std::size_t j = 0; j < col_idx.size(); ++j) {
      out.data[i * out.cols + j] = m.data[row_idx[i] * m.cols + col_idx[j]];
    }
  }
  return out;
}

inline FieldMatrix transpose(const FieldMatrix& m) {
  FieldMatrix out(m.field, m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out.data[c * out.cols + r] = m.data[r * m.cols + c];
  }
  return out;
}

inline FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows != b.rows || a.field.q != b.field.q) {
    throw ShapeMismatchError("hstack: incompatible shapes");
  }
  FieldMatrix out(a.field, a.rows, a.cols + b.cols);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) out.data[r * out.cols + c] = a.data[r * a.cols + c];
    for (std::size_t c = 0; c < b.cols; ++c) {
      out.data[r * out.cols + a.cols + c] = b.data[r * b.cols + c];
    }
  }
  return out;
}

inline FieldMatrix vstack(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols != b.cols || a.field.q != b.field.q) {
    throw ShapeMismatchError("vstack: incompatible shapes");
  }
  FieldMatrix out(a.field, a.rows + b.rows, a.cols);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
  return out;
}

// Row spaces are equal iff stacking changes no rank.
inline bool same_row_space(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols != b.cols || a.field.q != b.field.q) return false;
  const std::size_t ra = rank(a);
  const std::size_t rb = rank(b);
  return ra == rb && rank(vstack(a, b)) == ra;
}

}  // namespace dmuss
