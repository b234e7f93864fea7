#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecmds/func.hpp"

namespace ecmds {

struct CodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense matrix over one field; entries are packed field values.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const FieldCtx& F, int rows, int cols);

  const FieldCtx& field() const { return *F_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int32_t& at(int r, int c) { return a_[idx(r, c)]; }
  int32_t at(int r, int c) const { return a_[idx(r, c)]; }

  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  size_t idx(int r, int c) const;
  const FieldCtx* F_ = nullptr;
  int rows_ = 0, cols_ = 0;
  std::vector<int32_t> a_;
};

int rank(const Matrix& M);
Matrix rref(const Matrix& M);
int32_t det(const Matrix& M);  // square input
// determinant test on the square submatrix picked by rows x cols
bool minor_nonsingular(const Matrix& M, const std::vector<int>& rows,
                       const std::vector<int>& cols);

// Everything needed to rebuild a generator matrix from scratch.
struct CodeMeta {
  Curve E;
  std::vector<Point> H;  // evaluation subgroup, canonical order
  std::vector<Point> D;  // evaluation points = column order
  Point P = Point::infinity();  // pole point removed from D (even case only)
  Point Q;                      // pole point outside H
  int k = 0;
  bool even_case = false;
  bool extended = false;
  // Row receiving the 1 in the column appended by extend_code: the basis
  // element whose pole order at P is exactly k-1.  -1 for odd-case codes.
  int ext_row = -1;
};

struct LinearCode {
  Matrix gen;  // k x n, full row rank
  CodeMeta meta;

  int n() const { return gen.cols(); }
  int k() const { return gen.rows(); }
};

// Length |H|: evaluates the basis of functions with poles only at Q
// (order <= k) at every point of H.  k odd, 1 < k < |H|, Q outside H.
LinearCode build_code_odd(const Curve& E, const Subgroup& H, int k,
                          const Point& Q);

// Length |H|-1: evaluates the basis with poles at P (order <= k-1) and Q
// (order <= 1) at H minus P.  k even, P in H, Q outside H, 1 < k < |H|-1.
LinearCode build_code_even(const Curve& E, const Subgroup& H, int k,
                           const Point& P, const Point& Q);

// Appends one column of weight 1 to an even-case code: the 1 sits in the
// row of the basis element with pole order exactly k-1 at P (ext_row),
// all other rows get 0.  Length grows by 1, dimension is unchanged.
LinearCode extend_code(const LinearCode& C);

// Plain-text matrix document: "key value" header lines (q, modulus, n, k),
// then k rows of n element strings; '#' lines are comments.
std::string emit_code_text(const LinearCode& C);
// Structured document {q, modulus, n, k, rows, meta} as JSON.
std::string emit_code_json(const LinearCode& C);

// Matrix document decoupled from any live FieldCtx, so files can be read
// before the field exists.  Accepts both emit formats (JSON is detected by
// a leading '{').
struct MatrixDoc {
  int64_t q = 0;
  std::vector<int> modulus;  // coefficients low -> high, monic
  int n = 0, k = 0;
  std::vector<std::vector<std::string>> rows;  // element strings

  // construction record, present only in structured documents
  bool has_meta = false;
  std::vector<std::string> curve;  // a1, a2, a3, a4, a6
  std::vector<std::string> H, D;   // point strings
  std::string P, Q;
  bool even_case = false, extended = false;
  int ext_row = -1;
};
MatrixDoc read_matrix_doc(const std::string& text);
// Field matching a document's (q, modulus).
FieldCtx field_of_doc(const MatrixDoc& doc);
Matrix doc_to_matrix(const FieldCtx& F, const MatrixDoc& doc);
// Full code, requires has_meta; validates the record against the matrix.
LinearCode code_of_doc(const FieldCtx& F, const MatrixDoc& doc);

}  // namespace ecmds
