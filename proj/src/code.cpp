#include "ecmds/code.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace ecmds {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw CodeError(msg);
}

}  // namespace

Matrix::Matrix(const FieldCtx& F, int rows, int cols)
    : F_(&F), rows_(rows), cols_(cols) {
  require(rows > 0 && cols > 0, "matrix dimensions must be positive");
  a_.assign((size_t)rows * cols, 0);
}

size_t Matrix::idx(int r, int c) const {
  require(F_ != nullptr, "matrix has no field");
  require(r >= 0 && r < rows_ && c >= 0 && c < cols_,
          "matrix index out of range");
  return (size_t)r * cols_ + c;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  if (F_ == nullptr || o.F_ == nullptr) return F_ == o.F_ && a_ == o.a_;
  // same field parameters, not necessarily the same context instance
  if (F_->p() != o.F_->p() || F_->m() != o.F_->m() ||
      F_->modulus() != o.F_->modulus())
    return false;
  return a_ == o.a_;
}

Matrix rref(const Matrix& M) {
  const FieldCtx& F = M.field();
  Matrix R = M;
  int r = 0;
  for (int c = 0; c < R.cols() && r < R.rows(); ++c) {
    int sel = -1;
    for (int i = r; i < R.rows(); ++i)
      if (R.at(i, c)) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < R.cols(); ++j) std::swap(R.at(r, j), R.at(sel, j));
    int32_t inv = F.invv(R.at(r, c));
    for (int j = 0; j < R.cols(); ++j) R.at(r, j) = F.mulv(R.at(r, j), inv);
    for (int i = 0; i < R.rows(); ++i) {
      if (i == r || !R.at(i, c)) continue;
      int32_t f = R.at(i, c);
      for (int j = 0; j < R.cols(); ++j)
        R.at(i, j) = F.subv(R.at(i, j), F.mulv(f, R.at(r, j)));
    }
    ++r;
  }
  return R;
}

int rank(const Matrix& M) {
  Matrix R = rref(M);
  int r = 0;
  for (int i = 0; i < R.rows(); ++i)
    for (int j = 0; j < R.cols(); ++j)
      if (R.at(i, j)) { ++r; break; }
  return r;
}

int32_t det(const Matrix& M) {
  require(M.rows() == M.cols(), "determinant needs a square matrix");
  const FieldCtx& F = M.field();
  Matrix A = M;
  int n = A.rows();
  int32_t d = F.one().v;
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    for (int i = c; i < n; ++i)
      if (A.at(i, c)) { sel = i; break; }
    if (sel < 0) return 0;
    if (sel != c) {
      for (int j = 0; j < n; ++j) std::swap(A.at(c, j), A.at(sel, j));
      d = F.negv(d);
    }
    d = F.mulv(d, A.at(c, c));
    int32_t inv = F.invv(A.at(c, c));
    for (int i = c + 1; i < n; ++i) {
      if (!A.at(i, c)) continue;
      int32_t f = F.mulv(A.at(i, c), inv);
      for (int j = c; j < n; ++j)
        A.at(i, j) = F.subv(A.at(i, j), F.mulv(f, A.at(c, j)));
    }
  }
  return d;
}

bool minor_nonsingular(const Matrix& M, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  require(rows.size() == cols.size() && !rows.empty(),
          "minor needs equally many rows and columns");
  int k = (int)rows.size();
  Matrix S(M.field(), k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) S.at(i, j) = M.at(rows[i], cols[j]);
  return det(S) != 0;
}

namespace {

Matrix evaluate_basis(const RRBasis& B, const std::vector<Point>& D,
                      const FieldCtx& F) {
  Matrix G(F, (int)B.funcs.size(), (int)D.size());
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < G.cols(); ++j)
      G.at(i, j) = evaluate(B.funcs[i], D[j]).v;
  return G;
}

}  // namespace

LinearCode build_code_odd(const Curve& E, const Subgroup& H, int k,
                          const Point& Q) {
  const FieldCtx& F = *E.F;
  int n = (int)H.members.size();
  require(k % 2 == 1, "this construction needs odd k");
  require(k > 1 && k < n, "need 1 < k < " + std::to_string(n));
  require(E.on_curve(Q), "Q is not on the curve");
  require(!H.contains(Q), "Q must lie outside the evaluation subgroup");

  RRBasis B = rr_basis_kQ(E, k, Q);
  LinearCode C;
  C.gen = evaluate_basis(B, H.members, F);
  if (rank(C.gen) != k) throw CodeError("evaluation matrix lost rank (internal)");

  C.meta.E = E;
  C.meta.H = H.members;
  C.meta.D = H.members;
  C.meta.Q = Q;
  C.meta.k = k;
  return C;
}

LinearCode build_code_even(const Curve& E, const Subgroup& H, int k,
                           const Point& P, const Point& Q) {
  const FieldCtx& F = *E.F;
  int n = (int)H.members.size() - 1;
  require(k % 2 == 0, "this construction needs even k");
  require(k > 1 && k < n, "need 1 < k < " + std::to_string(n));
  require(H.contains(P), "P must lie in the evaluation subgroup");
  require(E.on_curve(Q), "Q is not on the curve");
  require(!H.contains(Q), "Q must lie outside the evaluation subgroup");

  RRBasis B = rr_basis_mixed(E, k, P, Q);
  std::vector<Point> D;
  for (const Point& T : H.members)
    if (T != P) D.push_back(T);

  LinearCode C;
  C.gen = evaluate_basis(B, D, F);
  if (rank(C.gen) != k) throw CodeError("evaluation matrix lost rank (internal)");

  C.meta.E = E;
  C.meta.H = H.members;
  C.meta.D = D;
  C.meta.P = P;
  C.meta.Q = Q;
  C.meta.k = k;
  C.meta.even_case = true;
  for (int i = 0; i < k; ++i)
    if (B.vals[i].at(P) == -(k - 1)) {
      require(C.meta.ext_row < 0, "pole order k-1 not unique (internal)");
      C.meta.ext_row = i;
    }
  require(C.meta.ext_row >= 0, "no basis row with pole order k-1 (internal)");
  return C;
}

LinearCode extend_code(const LinearCode& C) {
  require(C.meta.even_case, "only even-case codes can be extended");
  require(!C.meta.extended, "code is already extended");
  int k = C.k(), n = C.n();
  require(C.meta.ext_row >= 0 && C.meta.ext_row < k,
          "construction record lacks the extension row");

  LinearCode X = C;
  X.gen = Matrix(C.gen.field(), k, n + 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) X.gen.at(i, j) = C.gen.at(i, j);
  X.gen.at(C.meta.ext_row, n) = C.gen.field().one().v;
  X.meta.extended = true;
  return X;
}

namespace {

std::string join_csv(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string curve_coeff_list(const Curve& E) {
  const FieldCtx& F = *E.F;
  return F.render(E.a1) + " " + F.render(E.a2) + " " + F.render(E.a3) +
         " " + F.render(E.a4) + " " + F.render(E.a6);
}

}  // namespace

std::string emit_code_text(const LinearCode& C) {
  const FieldCtx& F = C.gen.field();
  std::ostringstream out;
  out << "q " << F.q() << "\n";
  out << "modulus " << join_csv(F.modulus()) << "\n";
  out << "n " << C.n() << "\n";
  out << "k " << C.k() << "\n";
  for (int i = 0; i < C.k(); ++i) {
    for (int j = 0; j < C.n(); ++j) {
      if (j) out << " ";
      out << F.render(F.el(C.gen.at(i, j)));
    }
    out << "\n";
  }
  out << "# curve " << C.meta.E.render() << "\n";
  out << "# coefficients " << curve_coeff_list(C.meta.E) << "\n";
  if (C.meta.even_case) out << "# P " << point_string(C.meta.P) << "\n";
  out << "# Q " << point_string(C.meta.Q) << "\n";
  out << "# construction " << (C.meta.even_case ? "even" : "odd")
      << " k=" << C.meta.k << " extended=" << (C.meta.extended ? 1 : 0);
  if (C.meta.even_case) out << " ext_row=" << C.meta.ext_row;
  out << "\n";
  return out.str();
}

std::string emit_code_json(const LinearCode& C) {
  const FieldCtx& F = C.gen.field();
  nlohmann::json j;
  j["q"] = F.q();
  j["modulus"] = F.modulus();
  j["n"] = C.n();
  j["k"] = C.k();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < C.k(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int jcol = 0; jcol < C.n(); ++jcol)
      row.push_back(F.render(F.el(C.gen.at(i, jcol))));
    rows.push_back(row);
  }
  j["rows"] = rows;

  nlohmann::json meta;
  meta["curve"] = {F.render(C.meta.E.a1), F.render(C.meta.E.a2),
                   F.render(C.meta.E.a3), F.render(C.meta.E.a4),
                   F.render(C.meta.E.a6)};
  nlohmann::json hp = nlohmann::json::array(), dp = nlohmann::json::array();
  for (const Point& T : C.meta.H) hp.push_back(point_string(T));
  for (const Point& T : C.meta.D) dp.push_back(point_string(T));
  meta["H"] = hp;
  meta["D"] = dp;
  if (C.meta.even_case) meta["P"] = point_string(C.meta.P);
  meta["Q"] = point_string(C.meta.Q);
  meta["k"] = C.meta.k;
  meta["even_case"] = C.meta.even_case;
  meta["extended"] = C.meta.extended;
  if (C.meta.even_case) meta["ext_row"] = C.meta.ext_row;
  j["meta"] = meta;
  return j.dump(2) + "\n";
}

namespace {

MatrixDoc doc_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CodeError(std::string("bad JSON matrix document: ") + e.what());
  }
  MatrixDoc doc;
  try {
    doc.q = j.at("q").get<int64_t>();
    doc.modulus = j.at("modulus").get<std::vector<int>>();
    doc.n = j.at("n").get<int>();
    doc.k = j.at("k").get<int>();
    for (const auto& row : j.at("rows"))
      doc.rows.push_back(row.get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw CodeError(std::string("JSON matrix document missing fields: ") +
                    e.what());
  }
  if (j.contains("meta")) {
    try {
      const auto& m = j.at("meta");
      doc.curve = m.at("curve").get<std::vector<std::string>>();
      doc.H = m.at("H").get<std::vector<std::string>>();
      doc.D = m.at("D").get<std::vector<std::string>>();
      doc.Q = m.at("Q").get<std::string>();
      doc.even_case = m.at("even_case").get<bool>();
      doc.extended = m.at("extended").get<bool>();
      if (doc.even_case) {
        doc.P = m.at("P").get<std::string>();
        doc.ext_row = m.at("ext_row").get<int>();
      }
      if (m.at("k").get<int>() != doc.k)
        throw CodeError("construction record disagrees on k");
      doc.has_meta = true;
    } catch (const nlohmann::json::exception& e) {
      throw CodeError(std::string("bad construction record: ") + e.what());
    }
  }
  return doc;
}

MatrixDoc doc_from_text(const std::string& text) {
  MatrixDoc doc;
  std::istringstream in(text);
  std::string line;
  bool saw_q = false, saw_n = false, saw_k = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (!saw_q || !saw_n || !saw_k || doc.modulus.empty()) {
      std::string val;
      if (tok == "q" && (ls >> val)) {
        doc.q = std::stoll(val);
        saw_q = true;
      } else if (tok == "modulus" && (ls >> val)) {
        std::istringstream cs(val);
        std::string c;
        while (std::getline(cs, c, ',')) doc.modulus.push_back(std::stoi(c));
      } else if (tok == "n" && (ls >> val)) {
        doc.n = std::stoi(val);
        saw_n = true;
      } else if (tok == "k" && (ls >> val)) {
        doc.k = std::stoi(val);
        saw_k = true;
      } else {
        throw CodeError("matrix rows before a complete q/modulus/n/k header");
      }
      continue;
    }
    std::vector<std::string> row{tok};
    std::string el;
    while (ls >> el) row.push_back(el);
    doc.rows.push_back(std::move(row));
  }
  if (!saw_q || !saw_n || !saw_k || doc.modulus.empty())
    throw CodeError("matrix document missing q/modulus/n/k header");
  return doc;
}

}  // namespace

MatrixDoc read_matrix_doc(const std::string& text) {
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i == std::string::npos) throw CodeError("empty matrix document");
  MatrixDoc doc =
      text[i] == '{' ? doc_from_json(text) : doc_from_text(text);
  if (doc.q < 2) throw CodeError("matrix document: bad field size");
  if (doc.n <= 0 || doc.k <= 0 || doc.k > doc.n)
    throw CodeError("matrix document: need 0 < k <= n");
  if ((int)doc.rows.size() != doc.k)
    throw CodeError("matrix document: expected " + std::to_string(doc.k) +
                    " rows, found " + std::to_string(doc.rows.size()));
  for (const auto& row : doc.rows)
    if ((int)row.size() != doc.n)
      throw CodeError("matrix document: row with " +
                      std::to_string(row.size()) + " entries, expected " +
                      std::to_string(doc.n));
  return doc;
}

FieldCtx field_of_doc(const MatrixDoc& doc) {
  int p, m;
  try {
    std::tie(p, m) = factor_prime_power(doc.q);
  } catch (const FieldError&) {
    throw CodeError("field size is not a prime power");
  }
  if ((int)doc.modulus.size() != m + 1)
    throw CodeError("modulus degree does not match the field size");
  return make_field(p, m, doc.modulus);
}

Matrix doc_to_matrix(const FieldCtx& F, const MatrixDoc& doc) {
  if (F.q() != doc.q) throw CodeError("field does not match the document");
  Matrix M(F, doc.k, doc.n);
  for (int i = 0; i < doc.k; ++i)
    for (int j = 0; j < doc.n; ++j)
      M.at(i, j) = F.parse(doc.rows[i][j]).v;
  return M;
}

LinearCode code_of_doc(const FieldCtx& F, const MatrixDoc& doc) {
  require(doc.has_meta, "document carries no construction record");
  require(doc.curve.size() == 5, "curve record needs five coefficients");

  LinearCode C;
  C.gen = doc_to_matrix(F, doc);
  if (rank(C.gen) != doc.k) throw CodeError("matrix is not full row rank");

  std::vector<FieldElement> a;
  for (const std::string& s : doc.curve) a.push_back(F.parse(s));
  C.meta.E = new_curve(F, a);
  for (const std::string& s : doc.H) {
    Point T = parse_point(F, s);
    require(C.meta.E.on_curve(T), "subgroup point off the curve: " + s);
    C.meta.H.push_back(T);
  }
  std::sort(C.meta.H.begin(), C.meta.H.end());
  for (const std::string& s : doc.D) {
    Point T = parse_point(F, s);
    require(C.meta.E.on_curve(T), "evaluation point off the curve: " + s);
    C.meta.D.push_back(T);
  }
  C.meta.Q = parse_point(F, doc.Q);
  require(C.meta.E.on_curve(C.meta.Q), "pole point off the curve");
  require(!std::binary_search(C.meta.H.begin(), C.meta.H.end(), C.meta.Q),
          "pole point lies inside the evaluation subgroup");
  C.meta.k = doc.k;
  C.meta.even_case = doc.even_case;
  C.meta.extended = doc.extended;
  require(doc.even_case == (doc.k % 2 == 0),
          "construction parity disagrees with k");
  require(!doc.extended || doc.even_case, "only even-case codes extend");
  int expect_d = doc.n - (doc.extended ? 1 : 0);
  require((int)C.meta.D.size() == expect_d,
          "evaluation point count disagrees with the matrix width");
  require(C.meta.H.size() == C.meta.D.size() + (doc.even_case ? 1 : 0),
          "subgroup size disagrees with the evaluation points");
  for (const Point& T : C.meta.D)
    require(std::binary_search(C.meta.H.begin(), C.meta.H.end(), T),
            "evaluation point outside the subgroup");
  if (doc.even_case) {
    C.meta.P = parse_point(F, doc.P);
    require(std::binary_search(C.meta.H.begin(), C.meta.H.end(), C.meta.P),
            "removed point is not in the subgroup");
    require(doc.ext_row >= 0 && doc.ext_row < doc.k,
            "extension row out of range");
    C.meta.ext_row = doc.ext_row;
  }
  return C;
}

}  // namespace ecmds
