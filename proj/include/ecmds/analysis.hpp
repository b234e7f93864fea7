#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecmds/code.hpp"

namespace ecmds {

inline constexpr int64_t kDefaultBudget = 10'000'000;
inline constexpr int64_t kDefaultSamples = 100'000;
inline constexpr uint64_t kDefaultSeed = 0xECC5;

// One verification method's outcome.  `checked` counts subsets, minors or
// codeword classes examined; `exhaustive` is false for sampled fallbacks;
// `witness` describes the violation when pass is false.
struct MethodResult {
  std::string method;
  bool pass = false;
  bool exhaustive = true;
  int64_t checked = 0;
  std::string witness;
};

struct MdsReport {
  int n = 0, k = 0;
  int claimed_d = 0;   // n - k + 1
  int verified_d = -1; // set only by an exhaustive distance enumeration
  std::vector<MethodResult> methods;

  bool all_pass() const;
};

struct SchurReport {
  int n = 0, k = 0;
  int dim_square = 0;
  int expected = 0;     // min(2k, n)
  int rs_baseline = 0;  // 2k - 1
  std::string verdict;  // "not-RS-equivalent" or "inconclusive"
};

struct BoundCheck {
  bool applicable = false;
  bool pass = false;
  std::string note;
};

// Group-law condition of the recorded construction: [k]Q outside H for the
// odd case, [k-1]P + Q outside H for the even case.  Implies the subset
// criterion for the unextended evaluation code.
MethodResult mds_structural(const LinearCode& C);

// Subset criterion over all (k-1)-subsets S of the evaluation points:
// writing T = [k]Q - sum(S) (odd case) resp. [k-1]P + Q - sum(S) (even),
// requires T outside D or inside S.  Throws BudgetError when C(n, k-1)
// exceeds the budget; not applicable to extended codes.
MethodResult mds_lemma2_exhaustive(const LinearCode& C,
                                   int64_t budget = kDefaultBudget,
                                   int workers = 1);
MethodResult mds_lemma2_sampled(const LinearCode& C,
                                int64_t samples = kDefaultSamples,
                                uint64_t seed = kDefaultSeed);

// Nonsingularity of every k x k minor.  Throws BudgetError when C(n, k)
// exceeds the budget.
MethodResult mds_by_minors(const Matrix& G, int64_t budget = kDefaultBudget,
                           int workers = 1);
MethodResult mds_minors_sampled(const Matrix& G,
                                int64_t samples = kDefaultSamples,
                                uint64_t seed = kDefaultSeed);

// Exact minimum weight over all (q^k - 1)/(q - 1) codeword classes.
// Throws BudgetError when the class count exceeds the budget.
struct DistanceResult {
  int d = -1;
  int64_t classes = 0;
  std::vector<int32_t> message;  // packed message hitting the minimum
};
DistanceResult min_distance_detail(const Matrix& G,
                                   int64_t budget = kDefaultBudget,
                                   int workers = 1);
int min_distance_bruteforce(const Matrix& G, int64_t budget = kDefaultBudget,
                            int workers = 1);
// Same enumeration wrapped as a pass/fail against n - k + 1.
MethodResult mds_distance(const Matrix& G, int64_t budget = kDefaultBudget,
                          int workers = 1);
// Minimum weight over random messages: an upper bound on the distance.
int sampled_distance_bound(const Matrix& G, int64_t samples = kDefaultSamples,
                           uint64_t seed = kDefaultSeed);

// Runs the requested methods ("structural", "subsets", "minors",
// "distance") and assembles the report; budget overruns fall back to the
// sampled variants with exhaustive = false, unless exhaustive_only is set,
// in which case the BudgetError propagates.
MdsReport verify_mds(const LinearCode& C,
                     const std::vector<std::string>& methods,
                     int64_t budget = kDefaultBudget,
                     uint64_t seed = kDefaultSeed,
                     int64_t samples = kDefaultSamples, int workers = 1,
                     bool exhaustive_only = false);

// All k(k+1)/2 componentwise row products, stacked.
Matrix schur_product_rows(const Matrix& G);
SchurReport schur_square(const Matrix& G);

// Vandermonde control code on the points 0, 1, w, w^2, ...; its square has
// dimension min(2k - 1, n), the baseline the verdict compares against.
Matrix rs_control_matrix(const FieldCtx& F, int n, int k);

// Length bound n <= (q+1)/2 + sqrt(q) (checked integer-exactly) together
// with n <= N/2; only applicable for q >= 289 and 3 <= k <= N/10.
BoundCheck mec_bound_check(const LinearCode& C);

// Binomial coefficient, saturating at cap + 1 to avoid overflow.
int64_t binom_capped(int n, int k, int64_t cap);

std::string mds_report_text(const MdsReport& R);
std::string schur_report_text(const SchurReport& R);
std::string mds_report_json(const MdsReport& R);
std::string schur_report_json(const SchurReport& R);

}  // namespace ecmds
