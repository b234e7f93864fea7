#include "ecmds/cli.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecmds/analysis.hpp"
#include "ecmds/code.hpp"
#include "ecmds/ec.hpp"
#include "ecmds/gf.hpp"

namespace ecmds {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace((unsigned char)c)) {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

int64_t parse_int(const std::string& s) {
  size_t pos = 0;
  int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (...) {
    pos = 0;
  }
  if (s.empty() || pos != s.size())
    throw CodeError("bad integer '" + s + "'");
  return v;
}

std::vector<int64_t> parse_int_csv(const std::string& s) {
  std::vector<int64_t> v;
  for (const std::string& part : split(s, ',')) v.push_back(parse_int(part));
  return v;
}

FieldCtx field_from(int64_t q, const std::string& modulus) {
  auto [p, m] = factor_prime_power(q);
  std::optional<std::vector<int>> mod;
  if (!modulus.empty()) {
    if (modulus.find('x') != std::string::npos) {
      mod = parse_poly_string(modulus, p);
    } else {
      std::vector<int> c;
      for (int64_t v : parse_int_csv(modulus)) c.push_back((int)v);
      mod = c;
    }
  }
  return make_field(p, m, mod);
}

Point point_arg(const FieldCtx& F, const std::string& s) {
  if (s == "O" || s == "o" || s == "inf") return Point::infinity();
  return parse_point(F, s);
}

Point first_point_outside(const Curve& E, const Subgroup& H) {
  for (const Point& P : enumerate_points(E))
    if (!H.contains(P)) return P;
  throw CodeError("every rational point lies in the subgroup");
}

Curve curve_arg(const FieldCtx& F, const std::string& csv) {
  std::vector<std::string> parts = split(csv, ',');
  if (parts.size() != 5)
    throw CodeError("--curve needs five coefficients a1,a2,a3,a4,a6");
  std::vector<FieldElement> a;
  for (const std::string& s : parts) a.push_back(F.parse(s));
  return new_curve(F, a);
}

Subgroup subgroup_arg(const Curve& E, const std::string& spec) {
  if (spec.find('[') != std::string::npos) {
    std::vector<Point> gens;
    for (const std::string& s : split(spec, ';'))
      gens.push_back(point_arg(*E.F, s));
    return subgroup_span(E, gens);
  }
  int64_t sel = parse_int(spec);
  if (sel < 0 || sel > 2)
    throw CodeError(
        "--subgroup takes a selector 0/1/2 or a ';'-separated point list");
  return index2_subgroup(group_structure(E), (int)sel);
}

std::string structure_string(const GroupStructure& S) {
  if (S.d1 == 1) return "Z_" + std::to_string(S.d2);
  return "Z_" + std::to_string(S.d1) + " x Z_" + std::to_string(S.d2);
}

std::string coefficient_list(const Curve& E) {
  const FieldCtx& F = *E.F;
  return F.render(E.a1) + " " + F.render(E.a2) + " " + F.render(E.a3) + " " +
         F.render(E.a4) + " " + F.render(E.a6);
}

std::string csv_of(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

// ---------------------------------------------------------------- search

struct SearchOpts {
  int64_t q = 0;
  std::string modulus;
  int64_t target_n = 0;
  int64_t budget = kDefaultBudget;
  std::string format = "text";
};

int cmd_search(const SearchOpts& o, std::ostream& out) {
  FieldCtx F = field_from(o.q, o.modulus);
  int64_t target = o.target_n ? o.target_n : waterhouse_max_even_N(F.q());
  Curve E = search_curve(F, target, o.budget);
  GroupStructure S = group_structure(E);

  if (o.format == "structured") {
    nlohmann::json j;
    j["q"] = (int64_t)F.q();
    j["modulus"] = F.modulus();
    j["curve"] = E.render();
    j["coefficients"] = {F.render(E.a1), F.render(E.a2), F.render(E.a3),
                         F.render(E.a4), F.render(E.a6)};
    j["points"] = S.N;
    j["structure"] = {{"d1", S.d1}, {"d2", S.d2}};
    nlohmann::json gens = nlohmann::json::array();
    if (S.d1 > 1) gens.push_back(point_string(S.g1));
    gens.push_back(point_string(S.g2));
    j["generators"] = gens;
    out << j.dump(2) << "\n";
  } else {
    out << "q " << F.q() << "\n";
    out << "modulus " << csv_of(F.modulus()) << "\n";
    out << "curve " << E.render() << "\n";
    out << "coefficients " << coefficient_list(E) << "\n";
    out << "points " << S.N << "\n";
    out << "structure " << structure_string(S) << "\n";
    if (S.d1 == 1)
      out << "generator " << point_string(S.g2) << "\n";
    else
      out << "generators " << point_string(S.g1) << " " << point_string(S.g2)
          << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- build

struct BuildOpts {
  int64_t q = 0;
  std::string modulus;
  std::string curve;
  int64_t target_n = 0;
  std::string subgroup = "0";
  int k = 0;
  std::string p_point = "O";
  std::string q_point;
  bool extend = false;
  int64_t budget = kDefaultBudget;
  std::string format = "text";
};

int cmd_build(const BuildOpts& o, std::ostream& out) {
  if (o.extend && o.k % 2)
    throw CodeError("--extend applies to even k only");
  FieldCtx F = field_from(o.q, o.modulus);
  Curve E =
      o.curve.empty()
          ? search_curve(F, o.target_n ? o.target_n : waterhouse_max_even_N(F.q()),
                         o.budget)
          : curve_arg(F, o.curve);
  Subgroup H = subgroup_arg(E, o.subgroup);

  Point Q = o.q_point.empty() ? first_point_outside(E, H)
                              : point_arg(F, o.q_point);
  LinearCode C;
  if (o.k % 2) {
    C = build_code_odd(E, H, o.k, Q);
  } else {
    C = build_code_even(E, H, o.k, point_arg(F, o.p_point), Q);
    if (o.extend) C = extend_code(C);
  }
  out << (o.format == "structured" ? emit_code_json(C) : emit_code_text(C));
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  std::string file;
  std::string methods = "auto";
  int64_t budget = kDefaultBudget;
  uint64_t seed = kDefaultSeed;
  int workers = 1;
  bool exhaustive_only = false;
  std::string format = "text";
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
  std::ifstream in(o.file);
  if (!in) throw CodeError("cannot open '" + o.file + "'");
  std::stringstream buf;
  buf << in.rdbuf();

  MatrixDoc doc = read_matrix_doc(buf.str());
  FieldCtx F = field_of_doc(doc);
  LinearCode C;
  if (doc.has_meta)
    C = code_of_doc(F, doc);
  else
    C.gen = doc_to_matrix(F, doc);

  std::vector<std::string> methods;
  if (o.methods == "auto") {
    if (doc.has_meta) {
      methods.push_back("structural");
      if (!doc.extended) methods.push_back("subsets");
      methods.push_back("minors");
      methods.push_back("distance");
    } else {
      methods = {"minors", "distance"};
    }
  } else {
    methods = split(o.methods, ',');
  }

  MdsReport R = verify_mds(C, methods, o.budget, o.seed, kDefaultSamples,
                           o.workers, o.exhaustive_only);
  SchurReport S = schur_square(C.gen);
  BoundCheck B;
  if (doc.has_meta) B = mec_bound_check(C);

  if (o.format == "structured") {
    nlohmann::json j;
    j["mds"] = nlohmann::json::parse(mds_report_json(R));
    j["schur"] = nlohmann::json::parse(schur_report_json(S));
    if (doc.has_meta)
      j["bound"] = {{"applicable", B.applicable},
                    {"pass", B.pass},
                    {"note", B.note}};
    out << j.dump(2) << "\n";
  } else {
    out << mds_report_text(R);
    out << schur_report_text(S);
    if (doc.has_meta) out << "length bound: " << B.note << "\n";
  }
  bool ok = R.all_pass() && (!B.applicable || B.pass);
  return ok ? 0 : 1;
}

// ----------------------------------------------------------------- sweep

struct SweepOpts {
  std::string qs = "4,7,8,9,11,16,49";
  std::string ks;
  int64_t budget = kDefaultBudget;
  std::string format = "text";
};

int64_t expected_half_length(int64_t q, int p, int m) {
  if (p != 2) return (q + 1) / 2 + isqrt64(q);
  if (m % 2 == 0) return (q + 2 * isqrt64(q)) / 2;
  return (q + 1 + isqrt64(4 * q)) / 2;
}

struct KCell {
  int k = 0;
  int n = 0;
  bool structural = false;
  int dim = 0;
  int baseline = 0;
  std::string verdict;
  std::string error;
};

struct QRow {
  int64_t q = 0, N = 0, n = 0, expected = 0;
  bool match = false;
  std::string error;
  std::vector<KCell> cells;
};

int cmd_sweep(const SweepOpts& o, std::ostream& out) {
  std::vector<int64_t> qs = parse_int_csv(o.qs);
  std::vector<int64_t> ks;
  if (!o.ks.empty()) ks = parse_int_csv(o.ks);

  std::vector<QRow> rows;
  for (int64_t q : qs) {
    QRow row;
    row.q = q;
    try {
      auto [p, m] = factor_prime_power(q);
      FieldCtx F = make_field(p, m);
      row.N = waterhouse_max_even_N(q);
      Curve E = search_curve(F, row.N, o.budget);
      GroupStructure S = group_structure(E);
      Subgroup H = index2_subgroup(S);
      row.n = (int64_t)H.members.size();
      row.expected = expected_half_length(q, p, m);
      row.match = row.n == row.expected;
      for (int64_t k : ks) {
        KCell cell;
        cell.k = (int)k;
        try {
          LinearCode C =
              k % 2 ? build_code_odd(E, H, (int)k, first_point_outside(E, H))
                    : build_code_even(E, H, (int)k, Point::infinity(),
                                      first_point_outside(E, H));
          cell.n = C.n();
          cell.structural = mds_structural(C).pass;
          SchurReport sr = schur_square(C.gen);
          cell.dim = sr.dim_square;
          cell.baseline = sr.rs_baseline;
          cell.verdict = sr.verdict;
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        row.cells.push_back(cell);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }

  bool all_ok = true;
  for (const QRow& row : rows) {
    if (!row.error.empty() || !row.match) all_ok = false;
    for (const KCell& cell : row.cells)
      if (!cell.error.empty() || !cell.structural) all_ok = false;
  }

  if (o.format == "structured") {
    nlohmann::json arr = nlohmann::json::array();
    for (const QRow& row : rows) {
      nlohmann::json j;
      j["q"] = row.q;
      if (!row.error.empty()) {
        j["error"] = row.error;
        arr.push_back(j);
        continue;
      }
      j["N"] = row.N;
      j["n"] = row.n;
      j["expected"] = row.expected;
      j["match"] = row.match;
      if (!row.cells.empty()) {
        nlohmann::json cells = nlohmann::json::array();
        for (const KCell& cell : row.cells) {
          nlohmann::json c;
          c["k"] = cell.k;
          if (!cell.error.empty()) {
            c["error"] = cell.error;
          } else {
            c["n"] = cell.n;
            c["structural"] = cell.structural;
            c["schur_dim"] = cell.dim;
            c["baseline"] = cell.baseline;
            c["verdict"] = cell.verdict;
          }
          cells.push_back(c);
        }
        j["codes"] = cells;
      }
      arr.push_back(j);
    }
    out << arr.dump(2) << "\n";
  } else {
    out << std::left << std::setw(6) << "q" << std::setw(6) << "N"
        << std::setw(6) << "n" << std::setw(10) << "expected" << "match"
        << "\n";
    for (const QRow& row : rows) {
      if (!row.error.empty()) {
        out << std::left << std::setw(6) << row.q << "error: " << row.error
            << "\n";
        continue;
      }
      out << std::left << std::setw(6) << row.q << std::setw(6) << row.N
          << std::setw(6) << row.n << std::setw(10) << row.expected
          << (row.match ? "yes" : "NO") << "\n";
    }
    if (!ks.empty()) {
      out << "\ncodes:\n";
      for (const QRow& row : rows)
        for (const KCell& cell : row.cells) {
          out << "q=" << row.q << " k=" << cell.k << " ";
          if (!cell.error.empty()) {
            out << "error: " << cell.error << "\n";
          } else {
            out << "[" << cell.n << "," << cell.k << "]"
                << " structural=" << (cell.structural ? "pass" : "FAIL")
                << " schur_dim=" << cell.dim << " baseline=" << cell.baseline
                << " verdict=" << cell.verdict << "\n";
          }
        }
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"MDS codes from elliptic curves over small finite fields"};
  app.name("ecmds");
  app.footer(
      "exit codes: 0 ok, 1 verification failed, 2 bad input, 3 budget "
      "exceeded");
  app.require_subcommand(1);

  SearchOpts so;
  BuildOpts bo;
  VerifyOpts vo;
  SweepOpts wo;
  int rc = 0;

  CLI::App* search = app.add_subcommand(
      "search", "find a curve with a given rational point count");
  search->add_option("--q", so.q, "field size (prime power)")->required();
  search->add_option("--modulus", so.modulus,
                     "field modulus: coefficient csv (low to high) or a "
                     "polynomial in x");
  search->add_option("--target-n", so.target_n,
                     "point count to hit (default: largest even group order)");
  search->add_option("--budget", so.budget,
                     "curve candidates scanned before giving up");
  search->add_option("--format", so.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  search->callback([&] { rc = cmd_search(so, out); });

  CLI::App* build = app.add_subcommand(
      "build", "construct an evaluation code and emit its matrix");
  build->add_option("--q", bo.q, "field size (prime power)")->required();
  build->add_option("--modulus", bo.modulus,
                    "field modulus: coefficient csv (low to high) or a "
                    "polynomial in x");
  build->add_option("--curve", bo.curve,
                    "curve coefficients a1,a2,a3,a4,a6 (default: search)");
  build->add_option("--target-n", bo.target_n,
                    "point count for the curve search when --curve is absent");
  build->add_option("--subgroup", bo.subgroup,
                    "index-2 subgroup selector 0/1/2, or ';'-separated "
                    "generator points");
  build->add_option("--k", bo.k, "code dimension")->required();
  build->add_option("--p-point", bo.p_point,
                    "evaluation point removed in the even-k case (default O)");
  build->add_option("--q-point", bo.q_point,
                    "pole point outside the subgroup (default: first such "
                    "point in canonical order)");
  build->add_flag("--extend", bo.extend,
                  "append the extension column (even k)");
  build->add_option("--budget", bo.budget,
                    "curve candidates scanned before giving up");
  build->add_option("--format", bo.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  build->callback([&] { rc = cmd_build(bo, out); });

  CLI::App* verify = app.add_subcommand(
      "verify", "check a matrix document for the MDS property");
  verify->add_option("matrix", vo.file, "matrix document (text or JSON)")
      ->required();
  verify->add_option("--methods", vo.methods,
                     "comma list of structural,subsets,minors,distance, or "
                     "auto");
  verify->add_option("--budget", vo.budget,
                     "work cap per exhaustive method");
  verify->add_option("--seed", vo.seed, "seed for sampled fallbacks");
  verify->add_option("--workers", vo.workers, "worker threads");
  verify->add_flag("--exhaustive-only", vo.exhaustive_only,
                   "report budget overruns instead of sampling");
  verify->add_option("--format", vo.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  verify->callback([&] { rc = cmd_verify(vo, out); });

  CLI::App* sweep = app.add_subcommand(
      "sweep", "tabulate achieved code lengths across field sizes");
  sweep->add_option("--q", wo.qs, "comma-separated field sizes");
  sweep->add_option("--k", wo.ks,
                    "comma-separated dimensions to build per field");
  sweep->add_option("--budget", wo.budget,
                    "curve candidates scanned per field");
  sweep->add_option("--format", wo.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  sweep->callback([&] { rc = cmd_sweep(wo, out); });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e, out, err);
    return r == 0 ? 0 : 2;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace ecmds
