#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ecmds/analysis.hpp"

using namespace ecmds;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(ECMDS_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Matrix fixture_matrix(const FieldCtx& F, const std::string& name) {
  return doc_to_matrix(F, read_matrix_doc(slurp(name)));
}

Point pt(const FieldCtx& F, const char* x, const char* y) {
  return {F.parse(x), F.parse(y)};
}

LinearCode f8_code(const FieldCtx& F) {
  Curve E = new_curve(F, F.one(), F.zero(), F.one(), F.zero(), F.one());
  Subgroup H = index2_subgroup(group_structure(E));
  return build_code_even(E, H, 4, Point::infinity(), pt(F, "w^3", "w^4"));
}

LinearCode f9_code(const FieldCtx& F) {
  Curve E = new_curve(F, F.zero(), F.zero(), F.zero(), F.one(), F.zero());
  std::vector<Point> members = {
      Point::infinity(),  pt(F, "0", "0"),   pt(F, "w", "1"),
      pt(F, "w", "2"),    pt(F, "w^2", "0"), pt(F, "w^7", "w^2"),
      pt(F, "w^7", "w^6"), pt(F, "w^6", "0")};
  return build_code_odd(E, subgroup_span(E, members), 3, pt(F, "2", "1"));
}

LinearCode f49_code(const FieldCtx& F) {
  Curve E = new_curve(F, F.zero(), F.zero(), F.zero(), F.one(), F.zero());
  Point A1 = pt(F, "w^41", "w^28");
  Point A2 = pt(F, "w^31", "w^6");
  Point g1 = scalar_mul(E, 2, A1);
  Point g2 = ec_add(E, g1, scalar_mul(E, 7, A2));
  Subgroup H = subgroup_span(E, {g1, g2});
  return build_code_odd(E, H, 5, A1);
}

}  // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binom_capped(6, 3, kDefaultBudget) == 20);
  CHECK(binom_capped(8, 2, kDefaultBudget) == 28);
  CHECK(binom_capped(32, 4, kDefaultBudget) == 35960);
  CHECK(binom_capped(32, 5, kDefaultBudget) == 201376);
  CHECK(binom_capped(6, 0, kDefaultBudget) == 1);
  CHECK(binom_capped(6, 7, kDefaultBudget) == 0);
  CHECK(binom_capped(64, 32, 1000) == 1001);  // saturates
}

TEST_CASE("all methods agree on the [6,4] code") {
  FieldCtx F = make_field(2, 3, {{1, 1, 0, 1}});
  LinearCode C = f8_code(F);

  MdsReport R = verify_mds(C, {"structural", "subsets", "minors", "distance"});
  CHECK(R.n == 6);
  CHECK(R.k == 4);
  CHECK(R.claimed_d == 3);
  CHECK(R.verified_d == 3);
  CHECK(R.all_pass());
  REQUIRE(R.methods.size() == 4);
  CHECK(R.methods[0].method == "structural");
  CHECK(R.methods[1].checked == 20);    // C(6,3) subsets
  CHECK(R.methods[2].checked == 15);    // C(6,4) minors
  CHECK(R.methods[3].checked == 585);   // (8^4-1)/7 codeword classes
  for (const auto& m : R.methods) {
    CHECK(m.pass);
    CHECK(m.exhaustive);
    CHECK(m.witness.empty());
  }

  std::string text = mds_report_text(R);
  CHECK(text.find("overall: PASS") != std::string::npos);
  CHECK(text.find("verified distance: 3") != std::string::npos);
}

TEST_CASE("fixture matrices verify without a construction record") {
  FieldCtx F8 = make_field(2, 3, {{1, 1, 0, 1}});
  LinearCode C1;
  C1.gen = fixture_matrix(F8, "q8_matrix.txt");
  CHECK(min_distance_bruteforce(C1.gen) == 3);
  CHECK(mds_by_minors(C1.gen).pass);
  CHECK_THROWS_AS(mds_structural(C1), CodeError);
  CHECK_THROWS_AS(mds_lemma2_exhaustive(C1), CodeError);

  FieldCtx F9 = make_field(3, 2, {{2, 2, 1}});
  Matrix m2 = fixture_matrix(F9, "q9_matrix.txt");
  CHECK(min_distance_bruteforce(m2) == 6);
  MethodResult mm = mds_by_minors(m2);
  CHECK(mm.pass);
  CHECK(mm.checked == 56);
}

TEST_CASE("extension is distance-verified with the pole-order row") {
  FieldCtx F = make_field(2, 3, {{1, 1, 0, 1}});
  LinearCode C = f8_code(F);
  LinearCode X = extend_code(C);

  MdsReport R = verify_mds(X, {"minors", "distance"});
  CHECK(R.claimed_d == 4);
  CHECK(R.verified_d == 4);
  CHECK(R.all_pass());
  CHECK(R.methods[0].checked == 35);  // C(7,4)

  CHECK_THROWS_AS(mds_lemma2_exhaustive(X), CodeError);

  // appending the unit into the final basis row instead stalls at
  // distance 3: that variant is not MDS, which is why extend_code picks
  // the pole-order-(k-1) row
  Matrix bad(F, 4, 7);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) bad.at(i, j) = C.gen.at(i, j);
  bad.at(3, 6) = 1;
  CHECK(min_distance_bruteforce(bad) == 3);
}

TEST_CASE("odd-case [8,3] code passes everything") {
  FieldCtx F = make_field(3, 2, {{2, 2, 1}});
  LinearCode C = f9_code(F);

  // [3]Q lands outside the subgroup
  Point c3 = scalar_mul(C.meta.E, 3, C.meta.Q);
  CHECK(c3 == pt(F, "2", "2"));
  MethodResult st = mds_structural(C);
  CHECK(st.pass);

  MdsReport R = verify_mds(C, {"structural", "subsets", "minors", "distance"});
  CHECK(R.all_pass());
  CHECK(R.verified_d == 6);
  CHECK(R.methods[1].checked == 28);  // C(8,2)
  CHECK(R.methods[2].checked == 56);  // C(8,3)
  CHECK(R.methods[3].checked == 91);  // (9^3-1)/8
}

TEST_CASE("even case with finite removed point, extension distances") {
  FieldCtx F = make_field(3, 2, {{2, 2, 1}});
  Curve E = new_curve(F, F.zero(), F.zero(), F.zero(), F.one(), F.zero());
  std::vector<Point> members = {
      Point::infinity(),  pt(F, "0", "0"),   pt(F, "w", "1"),
      pt(F, "w", "2"),    pt(F, "w^2", "0"), pt(F, "w^7", "w^2"),
      pt(F, "w^7", "w^6"), pt(F, "w^6", "0")};
  Subgroup H = subgroup_span(E, members);
  LinearCode C = build_code_even(E, H, 4, pt(F, "0", "0"), pt(F, "1", "w^2"));

  CHECK(min_distance_bruteforce(C.gen) == 4);  // [7,4,4]
  CHECK(mds_structural(C).pass);
  CHECK(mds_lemma2_exhaustive(C).pass);

  LinearCode X = extend_code(C);
  CHECK(min_distance_bruteforce(X.gen) == 5);  // [8,4,5]
  CHECK(mds_by_minors(X.gen).pass);

  // unit in the final row never reaches distance 5 here either
  Matrix bad(F, 4, 8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 7; ++j) bad.at(i, j) = C.gen.at(i, j);
  bad.at(3, 7) = 1;
  CHECK(min_distance_bruteforce(bad) == 4);
}

TEST_CASE("large [32,5] code: exhaustive checks at scale") {
  FieldCtx F = make_field(7, 2, {{3, 6, 1}});
  LinearCode C = f49_code(F);
  REQUIRE(C.n() == 32);
  REQUIRE(C.k() == 5);

  CHECK(mds_structural(C).pass);

  MethodResult lem = mds_lemma2_exhaustive(C);
  CHECK(lem.pass);
  CHECK(lem.checked == 35960);

  MethodResult min5 = mds_by_minors(C.gen);
  CHECK(min5.pass);
  CHECK(min5.checked == 201376);

  DistanceResult dr = min_distance_detail(C.gen);
  CHECK(dr.d == 28);
  CHECK(dr.classes == 5884901);

  // worker count must not change any outcome
  CHECK(min_distance_bruteforce(C.gen, kDefaultBudget, 4) == 28);
  MethodResult lem4 = mds_lemma2_exhaustive(C, kDefaultBudget, 4);
  CHECK(lem4.pass);
  CHECK(lem4.checked == lem.checked);
  MethodResult min4 = mds_by_minors(C.gen, kDefaultBudget, 4);
  CHECK(min4.pass);
  CHECK(min4.checked == min5.checked);
}

TEST_CASE("violations are found and reported") {
  FieldCtx F = make_field(3, 2, {{2, 2, 1}});
  LinearCode C = f9_code(F);

  // same curve and points, but a pole point inside the subgroup: the
  // group-law condition fails and a violating subset exists
  LinearCode probe;
  probe.gen = rs_control_matrix(F, 8, 3);  // placeholder rows; meta drives
  probe.meta = C.meta;
  probe.meta.Q = pt(F, "w", "1");
  REQUIRE(std::binary_search(probe.meta.H.begin(), probe.meta.H.end(),
                             probe.meta.Q));

  MethodResult st = mds_structural(probe);
  CHECK(!st.pass);
  CHECK(st.witness.find("[k]Q") != std::string::npos);

  MethodResult lem = mds_lemma2_exhaustive(probe);
  CHECK(!lem.pass);
  CHECK(lem.witness.find("violating subset") != std::string::npos);

  MethodResult sam = mds_lemma2_sampled(probe, 2000);
  CHECK(!sam.pass);

  // a repeated column defeats the minor check
  Matrix rep(F, 2, 3);
  rep.at(0, 0) = rep.at(0, 1) = 1;
  rep.at(1, 0) = rep.at(1, 1) = F.w().v;
  rep.at(0, 2) = 1;
  rep.at(1, 2) = 2;
  MethodResult mm = mds_by_minors(rep);
  CHECK(!mm.pass);
  CHECK(mm.witness == "singular minor at columns {0,1}");

  // distance failure carries the offending message
  MethodResult md = mds_distance(rep);
  CHECK(!md.pass);
  CHECK(md.witness.find("weight-") != std::string::npos);
}

TEST_CASE("distance on trivial codes") {
  FieldCtx F = make_field(2, 3, {{1, 1, 0, 1}});
  Matrix I(F, 3, 3);
  for (int i = 0; i < 3; ++i) I.at(i, i) = 1;
  CHECK(min_distance_bruteforce(I) == 1);  // d = n-k+1 = 1

  Matrix par(F, 3, 4);  // identity plus an all-ones parity column
  for (int i = 0; i < 3; ++i) {
    par.at(i, i) = 1;
    par.at(i, 3) = 1;
  }
  CHECK(min_distance_bruteforce(par) == 2);

  Matrix rep(F, 1, 5);
  for (int j = 0; j < 5; ++j) rep.at(0, j) = F.w().v;
  CHECK(min_distance_bruteforce(rep) == 5);
}

TEST_CASE("budgets trigger errors and sampled fallbacks") {
  FieldCtx F = make_field(3, 2, {{2, 2, 1}});
  LinearCode C = f9_code(F);

  CHECK_THROWS_AS(min_distance_bruteforce(C.gen, 10), BudgetError);
  CHECK_THROWS_AS(mds_by_minors(C.gen, 10), BudgetError);
  CHECK_THROWS_AS(mds_lemma2_exhaustive(C, 10), BudgetError);

  MdsReport R = verify_mds(C, {"subsets", "minors", "distance"}, 10,
                           kDefaultSeed, 500);
  CHECK(R.all_pass());
  CHECK(R.verified_d == -1);  // nothing exhaustive ran
  for (const auto& m : R.methods) {
    CHECK(!m.exhaustive);
    CHECK(m.checked == 500);
  }

  // sampling is deterministic in the seed
  MdsReport R2 = verify_mds(C, {"subsets", "minors", "distance"}, 10,
                            kDefaultSeed, 500);
  CHECK(mds_report_json(R) == mds_report_json(R2));

  CHECK(sampled_distance_bound(C.gen, 2000) >= 6);

  CHECK_THROWS_AS(verify_mds(C, {"nonsense"}), CodeError);
}

TEST_CASE("schur squares separate these codes from control codes") {
  FieldCtx F8 = make_field(2, 3, {{1, 1, 0, 1}});
  FieldCtx F9 = make_field(3, 2, {{2, 2, 1}});
  FieldCtx F49 = make_field(7, 2, {{3, 6, 1}});

  // k > n/2: square fills the whole space, test is inconclusive
  SchurReport r1 = schur_square(f8_code(F8).gen);
  CHECK(r1.dim_square == 6);
  CHECK(r1.expected == 6);
  CHECK(r1.verdict == "inconclusive");

  SchurReport r2 = schur_square(f9_code(F9).gen);
  CHECK(r2.dim_square == 6);   // min(2k, n) = 6
  CHECK(r2.rs_baseline == 5);
  CHECK(r2.verdict == "not-RS-equivalent");

  SchurReport r3 = schur_square(f49_code(F49).gen);
  CHECK(r3.dim_square == 10);
  CHECK(r3.rs_baseline == 9);
  CHECK(r3.verdict == "not-RS-equivalent");

  // the control evaluation code hits the baseline instead
  Matrix rs = rs_control_matrix(F9, 8, 3);
  SchurReport rc = schur_square(rs);
  CHECK(rc.dim_square == 5);
  CHECK(rc.verdict == "inconclusive");

  // square dimension is invariant under row reduction
  Matrix m2 = fixture_matrix(F9, "q9_matrix.txt");
  CHECK(schur_square(rref(m2)).dim_square == schur_square(m2).dim_square);
  CHECK(schur_square(m2).dim_square == 6);

  Matrix one(F9, 1, 6);
  for (int j = 0; j < 6; ++j) one.at(0, j) = 1;
  CHECK(schur_square(one).dim_square == 1);

  std::string text = schur_report_text(r2);
  CHECK(text.find("verdict: not-RS-equivalent") != std::string::npos);
  std::string js = schur_report_json(r3);
  CHECK(js.find("\"dim_square\": 10") != std::string::npos);
}

TEST_CASE("length bound applies only at large q") {
  FieldCtx F8 = make_field(2, 3, {{1, 1, 0, 1}});
  BoundCheck small = mec_bound_check(f8_code(F8));
  CHECK(!small.applicable);
  CHECK(small.note.find("q = 8 < 289") != std::string::npos);

  FieldCtx F = make_field(17, 2, std::nullopt);
  Curve E = search_curve(F, 300);
  GroupStructure S = group_structure(E);
  CHECK(S.N == 300);
  Subgroup H = index2_subgroup(S);
  Point Q;
  for (const Point& P : S.points)
    if (!H.contains(P)) { Q = P; break; }
  LinearCode C = build_code_odd(E, H, 3, Q);
  CHECK(C.n() == 150);

  BoundCheck big = mec_bound_check(C);
  CHECK(big.applicable);
  CHECK(big.pass);
  CHECK(big.note.find("bound holds") != std::string::npos);

  // dimension outside the window is reported as skipped
  LinearCode C2 = C;
  C2.gen = rs_control_matrix(F, 150, 2);
  C2.meta.k = 2;
  BoundCheck skip = mec_bound_check(C2);
  CHECK(!skip.applicable);
  CHECK(skip.note.find("outside [3, 30]") != std::string::npos);
}
