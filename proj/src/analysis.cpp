#include "ecmds/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ecmds {

namespace {

const CodeMeta& construction_of(const LinearCode& C) {
  if (C.meta.k <= 0)
    throw CodeError("matrix has no construction record; only minors, "
                    "distance and schur checks apply");
  return C.meta;
}

bool member(const std::vector<Point>& sorted_pts, const Point& P) {
  return std::binary_search(sorted_pts.begin(), sorted_pts.end(), P);
}

// [k]Q for the odd case, [k-1]P + Q for the even case
Point construction_point(const CodeMeta& meta) {
  const Curve& E = meta.E;
  if (meta.even_case)
    return ec_add(E, scalar_mul(E, meta.k - 1, meta.P), meta.Q);
  return scalar_mul(E, meta.k, meta.Q);
}

std::string point_list(const std::vector<Point>& pts) {
  std::string s;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += " ";
    s += point_string(pts[i]);
  }
  return s;
}

// runs fn(block) for block = 0..nblocks-1, on `workers` threads
template <class Fn>
void run_blocks(int nblocks, int workers, Fn&& fn) {
  if (workers <= 1 || nblocks <= 1) {
    for (int b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::atomic<int> next{0};
  auto drain = [&] {
    for (int b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) fn(b);
  };
  std::vector<std::thread> pool;
  int nt = std::min(workers, nblocks);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
}

// every t-combination of {0..n-1} whose first element is `first`,
// in lexicographic order; stops early if fn returns false
template <class Fn>
void combos_with_first(int n, int t, int first, Fn&& fn) {
  std::vector<int> idx(t);
  idx[0] = first;
  for (int i = 1; i < t; ++i) idx[i] = first + i;
  if (idx.back() >= n) return;
  while (true) {
    if (!fn(idx)) return;
    int i = t - 1;
    while (i >= 1 && idx[i] == n - t + i) --i;
    if (i == 0) return;
    ++idx[i];
    for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// violation of the subset criterion: T lands in D but outside the subset
bool subset_violates(const CodeMeta& meta, const Point& Gpt,
                     const std::vector<int>& idx) {
  const Curve& E = meta.E;
  Point T = Gpt;
  for (int i : idx) T = ec_sub(E, T, meta.D[i]);
  // D is in column order, not necessarily sorted: scan instead of bisect
  if (std::find(meta.D.begin(), meta.D.end(), T) == meta.D.end()) return false;
  for (int i : idx)
    if (meta.D[i] == T) return false;
  return true;
}

}  // namespace

int64_t binom_capped(int n, int k, int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);  // exact: product of i+1 consecutive ints
    if (r > cap) return cap + 1;
  }
  return r;
}

bool MdsReport::all_pass() const {
  if (methods.empty()) return false;
  for (const MethodResult& m : methods)
    if (!m.pass) return false;
  return true;
}

MethodResult mds_structural(const LinearCode& C) {
  const CodeMeta& meta = construction_of(C);
  Point T = construction_point(meta);
  MethodResult r{"structural", !member(meta.H, T), true, 1, ""};
  if (!r.pass)
    r.witness = (meta.even_case ? "[k-1]P + Q = " : "[k]Q = ") +
                point_string(T) + " lies in the evaluation subgroup";
  return r;
}

MethodResult mds_lemma2_exhaustive(const LinearCode& C, int64_t budget,
                                   int workers) {
  const CodeMeta& meta = construction_of(C);
  if (meta.extended)
    throw CodeError("subset criterion does not apply to extended codes");
  int n = (int)meta.D.size(), t = meta.k - 1;
  int64_t total = binom_capped(n, t, budget);
  if (total > budget)
    throw BudgetError("subset criterion needs more than " +
                      std::to_string(budget) + " subsets");
  Point Gpt = construction_point(meta);

  int nblocks = n - t + 1;
  std::vector<std::vector<int>> block_witness(nblocks);
  run_blocks(nblocks, workers, [&](int b) {
    combos_with_first(n, t, b, [&](const std::vector<int>& idx) {
      if (subset_violates(meta, Gpt, idx) && block_witness[b].empty())
        block_witness[b] = idx;
      return true;  // no early exit: keeps counts scheduling-independent
    });
  });

  MethodResult r{"subsets", true, true, total, ""};
  for (const auto& w : block_witness)
    if (!w.empty()) {
      r.pass = false;
      std::vector<Point> pts;
      for (int i : w) pts.push_back(meta.D[i]);
      r.witness = "violating subset " + point_list(pts);
      break;  // blocks are in lex order; first hit is canonical
    }
  return r;
}

MethodResult mds_lemma2_sampled(const LinearCode& C, int64_t samples,
                                uint64_t seed) {
  const CodeMeta& meta = construction_of(C);
  if (meta.extended)
    throw CodeError("subset criterion does not apply to extended codes");
  int n = (int)meta.D.size(), t = meta.k - 1;
  Point Gpt = construction_point(meta);
  std::mt19937_64 rng(seed);

  MethodResult r{"subsets", true, false, samples, ""};
  std::vector<int> idx(t);
  for (int64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < t;) {
      int c = (int)(rng() % n);
      bool dup = false;
      for (int j = 0; j < i; ++j) dup |= idx[j] == c;
      if (!dup) idx[i++] = c;
    }
    std::sort(idx.begin(), idx.end());
    if (subset_violates(meta, Gpt, idx)) {
      r.pass = false;
      std::vector<Point> pts;
      for (int i : idx) pts.push_back(meta.D[i]);
      r.witness = "violating subset " + point_list(pts);
      break;
    }
  }
  return r;
}

MethodResult mds_by_minors(const Matrix& G, int64_t budget, int workers) {
  int n = G.cols(), k = G.rows();
  int64_t total = binom_capped(n, k, budget);
  if (total > budget)
    throw BudgetError("minor check needs more than " + std::to_string(budget) +
                      " determinants");
  std::vector<int> all_rows(k);
  for (int i = 0; i < k; ++i) all_rows[i] = i;

  int nblocks = n - k + 1;
  std::vector<std::vector<int>> block_witness(nblocks);
  run_blocks(nblocks, workers, [&](int b) {
    combos_with_first(n, k, b, [&](const std::vector<int>& idx) {
      if (!minor_nonsingular(G, all_rows, idx) && block_witness[b].empty())
        block_witness[b] = idx;
      return true;
    });
  });

  MethodResult r{"minors", true, true, total, ""};
  for (const auto& w : block_witness)
    if (!w.empty()) {
      r.pass = false;
      std::string cols;
      for (size_t i = 0; i < w.size(); ++i)
        cols += (i ? "," : "") + std::to_string(w[i]);
      r.witness = "singular minor at columns {" + cols + "}";
      break;
    }
  return r;
}

MethodResult mds_minors_sampled(const Matrix& G, int64_t samples,
                                uint64_t seed) {
  int n = G.cols(), k = G.rows();
  std::vector<int> all_rows(k);
  for (int i = 0; i < k; ++i) all_rows[i] = i;
  std::mt19937_64 rng(seed);

  MethodResult r{"minors", true, false, samples, ""};
  std::vector<int> idx(k);
  for (int64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < k;) {
      int c = (int)(rng() % n);
      bool dup = false;
      for (int j = 0; j < i; ++j) dup |= idx[j] == c;
      if (!dup) idx[i++] = c;
    }
    std::sort(idx.begin(), idx.end());
    if (!minor_nonsingular(G, all_rows, idx)) {
      r.pass = false;
      std::string cols;
      for (int i = 0; i < k; ++i) cols += (i ? "," : "") + std::to_string(idx[i]);
      r.witness = "singular minor at columns {" + cols + "}";
      break;
    }
  }
  return r;
}

namespace {

// weight-minimization over one enumeration block; blocks are (lead
// position, value of the digit after the lead), so results merge
// deterministically by block id regardless of the worker count
struct BlockBest {
  int weight = -1;
  std::vector<int32_t> message;
};

class DistanceScan {
 public:
  DistanceScan(const Matrix& G) : G_(G), F_(G.field()) {
    k_ = G.rows();
    n_ = G.cols();
    q_ = (int32_t)F_.q();
    scaled_.assign((size_t)k_ * q_ * n_, 0);
    for (int r = 0; r < k_; ++r)
      for (int32_t s = 0; s < q_; ++s)
        for (int j = 0; j < n_; ++j)
          scaled_[idx(r, s) + j] = F_.mulv(s, G_.at(r, j));
    if (q_ <= 256) {
      addtab_.assign((size_t)q_ * q_, 0);
      for (int32_t a = 0; a < q_; ++a)
        for (int32_t b = 0; b < q_; ++b)
          addtab_[(size_t)a * q_ + b] = F_.addv(a, b);
    }
    delta_inc_.resize(q_);
    for (int32_t c = 0; c + 1 < q_; ++c) delta_inc_[c] = F_.subv(c + 1, c);
    delta_reset_ = F_.subv(0, q_ - 1);

    for (int p = 0; p < k_; ++p) {
      if (p == k_ - 1)
        blocks_.push_back({p, -1});
      else
        for (int32_t c = 0; c < q_; ++c) blocks_.push_back({p, c});
    }
  }

  int num_blocks() const { return (int)blocks_.size(); }

  BlockBest run_block(int b) const {
    auto [p, c] = blocks_[b];
    std::vector<int32_t> cw(n_);
    for (int j = 0; j < n_; ++j) cw[j] = G_.at(p, j);
    int L = k_ - 1 - p;  // digits at positions p+1 .. k-1
    std::vector<int32_t> digits(std::max(L, 0), 0);
    if (L > 0) {
      digits[0] = c;
      if (c) add_scaled(cw, p + 1, c);
    }

    BlockBest best;
    auto consider = [&] {
      int w = 0;
      for (int j = 0; j < n_; ++j) w += cw[j] != 0;
      if (best.weight < 0 || w < best.weight) {
        best.weight = w;
        best.message.assign(k_, 0);
        best.message[p] = 1;
        for (int i = 0; i < L; ++i) best.message[p + 1 + i] = digits[i];
      }
    };
    consider();
    if (L <= 1) return best;  // digit 0 is fixed by the block
    while (true) {
      int i = L - 1;
      while (i >= 1 && digits[i] == q_ - 1) {
        add_scaled(cw, p + 1 + i, delta_reset_);
        digits[i] = 0;
        --i;
      }
      if (i == 0) break;
      add_scaled(cw, p + 1 + i, delta_inc_[digits[i]]);
      ++digits[i];
      consider();
    }
    return best;
  }

 private:
  size_t idx(int r, int32_t s) const { return ((size_t)r * q_ + s) * n_; }

  void add_scaled(std::vector<int32_t>& cw, int r, int32_t s) const {
    const int32_t* row = &scaled_[idx(r, s)];
    if (!addtab_.empty()) {
      for (int j = 0; j < n_; ++j) cw[j] = addtab_[(size_t)cw[j] * q_ + row[j]];
    } else {
      for (int j = 0; j < n_; ++j) cw[j] = F_.addv(cw[j], row[j]);
    }
  }

  const Matrix& G_;
  const FieldCtx& F_;
  int k_, n_;
  int32_t q_;
  std::vector<int32_t> scaled_, addtab_, delta_inc_;
  int32_t delta_reset_ = 0;
  std::vector<std::pair<int, int32_t>> blocks_;
};

}  // namespace

DistanceResult min_distance_detail(const Matrix& G, int64_t budget,
                                   int workers) {
  int k = G.rows();
  int64_t q = G.field().q();
  int64_t classes = 0, qpow = 1;
  for (int i = 0; i < k; ++i) {
    classes += qpow;
    if (classes > budget)
      throw BudgetError("distance enumeration needs more than " +
                        std::to_string(budget) + " codeword classes");
    qpow *= q;
  }

  DistanceScan scan(G);
  std::vector<BlockBest> best(scan.num_blocks());
  run_blocks(scan.num_blocks(), workers,
             [&](int b) { best[b] = scan.run_block(b); });

  DistanceResult res;
  res.classes = classes;
  for (const BlockBest& bb : best)
    if (bb.weight >= 0 && (res.d < 0 || bb.weight < res.d)) {
      res.d = bb.weight;
      res.message = bb.message;
    }
  return res;
}

int min_distance_bruteforce(const Matrix& G, int64_t budget, int workers) {
  return min_distance_detail(G, budget, workers).d;
}

MethodResult mds_distance(const Matrix& G, int64_t budget, int workers) {
  DistanceResult dr = min_distance_detail(G, budget, workers);
  int claimed = G.cols() - G.rows() + 1;
  MethodResult r{"distance", dr.d == claimed, true, dr.classes, ""};
  if (!r.pass) {
    const FieldCtx& F = G.field();
    std::string msg;
    for (size_t i = 0; i < dr.message.size(); ++i)
      msg += (i ? " " : "") + F.render(F.el(dr.message[i]));
    r.witness = "weight-" + std::to_string(dr.d) + " codeword from message [" +
                msg + "]";
  }
  return r;
}

int sampled_distance_bound(const Matrix& G, int64_t samples, uint64_t seed) {
  const FieldCtx& F = G.field();
  int k = G.rows(), n = G.cols();
  int64_t q = F.q();
  std::mt19937_64 rng(seed);
  int best = n + 1;
  std::vector<int32_t> msg(k), cw(n);
  for (int64_t s = 0; s < samples; ++s) {
    bool nonzero = false;
    for (int i = 0; i < k; ++i) nonzero |= (msg[i] = (int32_t)(rng() % q)) != 0;
    if (!nonzero) { --s; continue; }
    std::fill(cw.begin(), cw.end(), 0);
    for (int i = 0; i < k; ++i) {
      if (!msg[i]) continue;
      for (int j = 0; j < n; ++j)
        cw[j] = F.addv(cw[j], F.mulv(msg[i], G.at(i, j)));
    }
    int w = 0;
    for (int j = 0; j < n; ++j) w += cw[j] != 0;
    best = std::min(best, w);
  }
  return best;
}

MdsReport verify_mds(const LinearCode& C,
                     const std::vector<std::string>& methods, int64_t budget,
                     uint64_t seed, int64_t samples, int workers,
                     bool exhaustive_only) {
  MdsReport R;
  R.n = C.n();
  R.k = C.k();
  R.claimed_d = R.n - R.k + 1;
  for (const std::string& m : methods) {
    if (m == "structural") {
      R.methods.push_back(mds_structural(C));
    } else if (m == "subsets") {
      try {
        R.methods.push_back(mds_lemma2_exhaustive(C, budget, workers));
      } catch (const BudgetError&) {
        if (exhaustive_only) throw;
        R.methods.push_back(mds_lemma2_sampled(C, samples, seed));
      }
    } else if (m == "minors") {
      try {
        R.methods.push_back(mds_by_minors(C.gen, budget, workers));
      } catch (const BudgetError&) {
        if (exhaustive_only) throw;
        R.methods.push_back(mds_minors_sampled(C.gen, samples, seed));
      }
    } else if (m == "distance") {
      try {
        DistanceResult dr = min_distance_detail(C.gen, budget, workers);
        R.verified_d = dr.d;
        MethodResult r{"distance", dr.d == R.claimed_d, true, dr.classes, ""};
        if (!r.pass) {
          const FieldCtx& F = C.gen.field();
          std::string msg;
          for (size_t i = 0; i < dr.message.size(); ++i)
            msg += (i ? " " : "") + F.render(F.el(dr.message[i]));
          r.witness = "weight-" + std::to_string(dr.d) +
                      " codeword from message [" + msg + "]";
        }
        R.methods.push_back(std::move(r));
      } catch (const BudgetError&) {
        if (exhaustive_only) throw;
        int bound = sampled_distance_bound(C.gen, samples, seed);
        MethodResult r{"distance", bound >= R.claimed_d, false, samples, ""};
        if (!r.pass)
          r.witness =
              "sampled codeword of weight " + std::to_string(bound) +
              " below " + std::to_string(R.claimed_d);
        R.methods.push_back(std::move(r));
      }
    } else {
      throw CodeError("unknown verification method '" + m + "'");
    }
  }
  return R;
}

Matrix schur_product_rows(const Matrix& G) {
  const FieldCtx& F = G.field();
  int k = G.rows(), n = G.cols();
  Matrix S(F, k * (k + 1) / 2, n);
  int r = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j, ++r)
      for (int c = 0; c < n; ++c)
        S.at(r, c) = F.mulv(G.at(i, c), G.at(j, c));
  return S;
}

SchurReport schur_square(const Matrix& G) {
  SchurReport R;
  R.n = G.cols();
  R.k = rank(G);
  R.dim_square = rank(schur_product_rows(G));
  R.expected = std::min(2 * R.k, R.n);
  R.rs_baseline = 2 * R.k - 1;
  R.verdict = (2 * R.k <= R.n && R.dim_square != R.rs_baseline)
                  ? "not-RS-equivalent"
                  : "inconclusive";
  return R;
}

Matrix rs_control_matrix(const FieldCtx& F, int n, int k) {
  if (n > F.q() || k < 1 || k > n)
    throw CodeError("control code needs 1 <= k <= n <= q");
  std::vector<int32_t> pts(n);
  pts[0] = 0;
  if (n > 1) pts[1] = F.one().v;
  for (int j = 2; j < n; ++j) pts[j] = F.mulv(pts[j - 1], F.w().v);
  Matrix M(F, k, n);
  for (int j = 0; j < n; ++j) {
    int32_t acc = F.one().v;
    for (int i = 0; i < k; ++i) {
      M.at(i, j) = acc;
      acc = F.mulv(acc, pts[j]);
    }
  }
  return M;
}

BoundCheck mec_bound_check(const LinearCode& C) {
  const CodeMeta& meta = construction_of(C);
  const FieldCtx& F = *meta.E.F;
  int64_t q = F.q();
  int64_t N = count_points(meta.E);
  BoundCheck b;
  if (q < 289) {
    b.note = "skipped: q = " + std::to_string(q) + " < 289";
    return b;
  }
  if (C.k() < 3 || (int64_t)C.k() > N / 10) {
    b.note = "skipped: k = " + std::to_string(C.k()) + " outside [3, " +
             std::to_string(N / 10) + "]";
    return b;
  }
  b.applicable = true;
  int64_t n = C.n();
  bool half = 2 * n <= N;
  bool mec = 2 * n <= q + 1 + isqrt64(4 * q);
  b.pass = half && mec;
  b.note = "n = " + std::to_string(n) + ", N/2 = " + std::to_string(N / 2) +
           ", (q+1)/2 + sqrt(q) bound " + (mec ? "holds" : "violated");
  return b;
}

namespace {

std::string method_line(const MethodResult& m) {
  std::string s = "  " + m.method + ": " + (m.pass ? "pass" : "FAIL") +
                  " (checked " + std::to_string(m.checked) +
                  (m.exhaustive ? ", exhaustive" : ", sampled") + ")";
  if (!m.witness.empty()) s += " -- " + m.witness;
  return s;
}

}  // namespace

std::string mds_report_text(const MdsReport& R) {
  std::ostringstream out;
  out << "[" << R.n << "," << R.k << "] code, target distance "
      << R.claimed_d << "\n";
  for (const MethodResult& m : R.methods) out << method_line(m) << "\n";
  if (R.verified_d >= 0) out << "  verified distance: " << R.verified_d << "\n";
  out << "overall: " << (R.all_pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string schur_report_text(const SchurReport& R) {
  std::ostringstream out;
  out << "schur square of [" << R.n << "," << R.k << "] code: dim "
      << R.dim_square << " (min(2k,n) = " << R.expected
      << ", GRS baseline = " << R.rs_baseline << ")\n";
  out << "verdict: " << R.verdict << "\n";
  return out.str();
}

std::string mds_report_json(const MdsReport& R) {
  nlohmann::json j;
  j["n"] = R.n;
  j["k"] = R.k;
  j["claimed_d"] = R.claimed_d;
  if (R.verified_d >= 0) j["verified_d"] = R.verified_d;
  j["all_pass"] = R.all_pass();
  nlohmann::json ms = nlohmann::json::array();
  for (const MethodResult& m : R.methods) {
    nlohmann::json e;
    e["method"] = m.method;
    e["pass"] = m.pass;
    e["exhaustive"] = m.exhaustive;
    e["checked"] = m.checked;
    if (!m.witness.empty()) e["witness"] = m.witness;
    ms.push_back(e);
  }
  j["methods"] = ms;
  return j.dump(2) + "\n";
}

std::string schur_report_json(const SchurReport& R) {
  nlohmann::json j;
  j["n"] = R.n;
  j["k"] = R.k;
  j["dim_square"] = R.dim_square;
  j["expected"] = R.expected;
  j["rs_baseline"] = R.rs_baseline;
  j["verdict"] = R.verdict;
  return j.dump(2) + "\n";
}

}  // namespace ecmds
