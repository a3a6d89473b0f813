#include "sigmadep/cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sigmadep/dependence.hpp"
#include "sigmadep/errors.hpp"
#include "sigmadep/isomonodromy.hpp"
#include "sigmadep/parser.hpp"
#include "sigmadep/sequence.hpp"

#ifndef SIGMADEP_VERSION
#define SIGMADEP_VERSION "0.0.0"
#endif

namespace sigmadep::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kDefaultTower = {"t", "z: phi=z+1, sigma=z+t"};

struct Options {
  std::vector<std::string> vars;
  std::uint64_t seed = 0;
  std::size_t trials = 20;
  bool json = false;

  std::string expr;  // analyze, verify-cert, seq-check corroboration
  std::string word;
  std::string b;
  long u = 1;

  std::string matrix;
  std::string coeffs;
  std::string convention;
  std::string gauge;
  long degree_cap = 20;

  long i0 = 0;
  long horizon = 10;
  std::vector<std::string> params;
  bool auto_advance = false;
};

// Filled in by a command; input is echoed even when the command throws.
struct Result {
  Json input = Json::object();
  Json payload = Json::object();
  int exit_code = kError;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string text_or_stdin(const std::string& value, std::istream& in, const char* what) {
  if (!value.empty() && value != "-") return value;
  std::string all{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  all = trim(all);
  if (all.empty()) throw EngineError(ErrorCode::invalid_argument, std::string("no ") + what + " given");
  return all;
}

std::string format_matrix(const Matrix& m, const TowerSpec& tower) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += to_string(m.at(r, c), tower);
    }
    out += "]";
  }
  return out + "]";
}

Json qmatrix_json(const QMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const BigRational& x : row) r.push_back(to_string(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

// A bare expression is read as a 1x1 matrix.
Matrix read_matrix(const std::string& text, const TowerSpec& tower) {
  if (trim(text).rfind('[', 0) == 0) return Matrix(parse_matrix(text, tower));
  return Matrix({{parse_expression(text, tower)}});
}

std::vector<long> read_word(const std::string& text) {
  std::vector<long> word;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw EngineError(ErrorCode::invalid_argument, "word entries must be integers: '" + item + "'");
    }
    word.push_back(n);
  }
  if (word.empty()) throw EngineError(ErrorCode::invalid_argument, "empty word");
  return word;
}

Point read_params(const std::vector<std::string>& items, const TowerSpec& tower) {
  Point p;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw EngineError(ErrorCode::invalid_argument, "expected name=value, got '" + item + "'");
    }
    const std::string name = trim(item.substr(0, eq));
    const auto v = tower.index_of(name);
    if (!v) throw EngineError(ErrorCode::unknown_variable, "unknown variable " + name);
    if (*v == tower.top()) {
      throw EngineError(ErrorCode::invalid_argument, "the equation variable is the sequence index");
    }
    p[*v] = evaluate(parse_expression(item.substr(eq + 1), std::vector<std::string>{}), {});
  }
  return p;
}

Json tower_json(const TowerSpec& tower) {
  Json out = Json::array();
  for (int v = 0; v <= tower.top(); ++v) out.push_back(format_var_decl(tower, v));
  return out;
}

Json numeric_json(const NumericCheck& c, std::size_t trials) {
  return Json{{"agree", c.agree}, {"trials", trials}, {"evaluated", c.evaluated}, {"skipped", c.skipped}};
}

Json numeric_or_error(const std::function<NumericCheck()>& run, std::size_t trials) {
  try {
    return numeric_json(run(), trials);
  } catch (const EngineError& e) {
    if (e.code() != ErrorCode::all_samples_hit_poles) throw;
    return Json{{"agree", nullptr}, {"trials", trials}, {"error", error_code_name(e.code())}};
  }
}

Json certificate_json(const Certificate& c, const TowerSpec& tower) {
  Json l = Json::array();
  for (const auto& [key, value] : c.l_table) {
    const auto& [k, d, cls] = key;
    l.push_back(Json{{"i", cls + 1}, {"k", k}, {"d", d}, {"l", value}});
  }
  return Json{{"word", c.word.exponents}, {"u", c.u}, {"b", to_string(c.b, tower)}, {"l_table", l}};
}

void analyze(const Options& o, const TowerSpec& tower, std::istream& in, Result& r) {
  const std::string text = text_or_stdin(o.expr, in, "expression");
  r.input["a"] = text;
  const FieldElement a = parse_expression(text, tower);
  r.input["a_normalized"] = to_string(a, tower);
  const Verdict v = decide(a, tower);
  const std::vector<std::string> names = [&] {
    std::vector<std::string> n;
    for (const VarDecl& d : tower.vars()) n.push_back(d.name);
    return n;
  }();

  Json classes = Json::array();
  for (std::size_t i = 0; i < v.decomposition.classes.size(); ++i) {
    const ShiftClass& cls = v.decomposition.classes[i];
    Json terms = Json::array();
    for (const auto& [kd, s] : cls.terms) terms.push_back(Json{{"k", kd.first}, {"d", kd.second}, {"s", s}});
    classes.push_back(Json{{"i", i + 1}, {"representative", format_poly(cls.representative, names)}, {"terms", terms}});
  }
  Json aik = Json::array();
  for (std::size_t i = 0; i < v.aik.classes; ++i) {
    Json row = Json::array();
    for (long k = 0; k < v.aik.t; ++k) row.push_back(v.aik.at(i, k));
    aik.push_back(std::move(row));
  }
  Json kernel = Json::array();
  for (const IntVector& vec : v.kernel) {
    Json k = Json::array();
    for (const BigInt& x : vec) k.push_back(x.get_str());
    kernel.push_back(std::move(k));
  }

  Json& p = r.payload;
  p["verdict"] = v.dependent() ? "dependent" : "independent";
  p["lambda"] = to_string(v.decomposition.lambda, tower);
  p["lambda_root_of_unity"] = v.lambda_root_of_unity;
  p["t"] = v.decomposition.t;
  p["N"] = v.decomposition.N;
  p["classes"] = classes;
  p["aik"] = aik;
  p["kernel"] = kernel;
  if (v.dependent()) {
    const Certificate& c = v.certificate();
    p["certificate"] = certificate_json(c, tower);
    const SamplePlan plan = make_sample_plan(tower, o.trials, o.seed);
    p["verification"] = Json{
        {"symbolic", verify_certificate(a, c, tower)},
        {"numeric", numeric_or_error([&] { return check_certificate_numeric(a, c, tower, plan); }, o.trials)}};
    r.exit_code = kPositive;
  } else {
    Json w = Json::array();
    for (const IndependenceWitness& x : v.witnesses()) {
      w.push_back(Json{{"i", x.class_index + 1},
                       {"k", x.k},
                       {"value", x.value},
                       {"representative", format_poly(x.representative, names)}});
    }
    p["witnesses"] = w;
    r.exit_code = kNegative;
  }
}

void verify_cert(const Options& o, const TowerSpec& tower, std::istream& in, Result& r) {
  if (o.word.empty() || o.b.empty()) throw EngineError(ErrorCode::invalid_argument, "--word and --b are required");
  const std::string text = text_or_stdin(o.expr, in, "expression");
  r.input["a"] = text;
  r.input["word"] = o.word;
  r.input["b"] = o.b;
  const FieldElement a = parse_expression(text, tower);
  Certificate c{{read_word(o.word)}, parse_expression(o.b, tower), {}, o.u};
  if (c.b.is_zero()) throw EngineError(ErrorCode::invalid_argument, "b must be nonzero");
  const bool ok = verify_certificate(a, c, tower);
  const SamplePlan plan = make_sample_plan(tower, o.trials, o.seed);
  r.payload = Json{
      {"valid", ok},
      {"symbolic", ok},
      {"numeric", numeric_or_error([&] { return check_certificate_numeric(a, c, tower, plan); }, o.trials)}};
  r.exit_code = ok ? kPositive : kNegative;
}

CompanionConvention read_convention(const std::string& s) {
  if (s == "standard") return CompanionConvention::standard;
  if (s == "transposed") return CompanionConvention::transposed;
  throw EngineError(ErrorCode::invalid_argument, "convention must be standard or transposed");
}

const char* convention_name(CompanionConvention c) {
  return c == CompanionConvention::standard ? "standard" : "transposed";
}

void isomono(const Options& o, const TowerSpec& tower, std::istream& in, Result& r) {
  r.input["tower"] = tower_json(tower);
  std::vector<std::pair<std::string, LinearSystem>> systems;
  if (!o.coeffs.empty()) {
    if (!o.matrix.empty()) throw EngineError(ErrorCode::invalid_argument, "give either a matrix or --coeffs");
    const std::vector<FieldElement> cs = parse_list(o.coeffs, tower);
    r.input["coeffs"] = o.coeffs;
    std::vector<CompanionConvention> conventions;
    if (o.convention.empty()) {
      conventions = {CompanionConvention::standard, CompanionConvention::transposed};
    } else {
      conventions = {read_convention(o.convention)};
    }
    for (CompanionConvention c : conventions) systems.emplace_back(convention_name(c), companion(cs, tower, c));
  } else {
    const std::string text = text_or_stdin(o.matrix, in, "matrix");
    r.input["A"] = text;
    systems.emplace_back("", make_system(read_matrix(text, tower), tower));
  }

  Json& p = r.payload;
  const SamplePlan plan = make_sample_plan(tower, o.trials, o.seed);
  if (!o.gauge.empty()) {
    r.input["B"] = o.gauge;
    p["mode"] = "verify";
    const Matrix B = read_matrix(o.gauge, tower);
    Json checks = Json::array();
    bool any = false;
    for (const auto& [name, sys] : systems) {
      Json c;
      if (!name.empty()) c["convention"] = name;
      c["A"] = format_matrix(sys.A, tower);
      const bool ok = verify_isomonodromic(sys, {B});
      c["isomonodromic"] = ok;
      c["numeric"] = numeric_or_error([&] { return check_isomonodromy_numeric(sys, {B}, plan); }, o.trials);
      any = any || ok;
      checks.push_back(std::move(c));
    }
    p["isomonodromic"] = any;
    p["checks"] = checks;
    r.exit_code = any ? kPositive : kNegative;
    return;
  }

  if (systems.size() != 1) {
    throw EngineError(ErrorCode::invalid_argument, "solve mode needs a single system (pass --convention)");
  }
  const LinearSystem& sys = systems.front().second;
  p["mode"] = "solve";
  p["A"] = format_matrix(sys.A, tower);
  const IsomonodromyResult res = is_isomonodromic(sys, o.degree_cap, o.seed);
  p["degree_cap"] = res.degree_cap;
  if (res.witness) {
    p["witness"] = format_matrix(res.witness->B, tower);
    p["degree_used"] = res.degree_used;
    p["solution_dim"] = res.solution_dim;
    p["verification"] = Json{
        {"symbolic", verify_isomonodromic(sys, *res.witness)},
        {"numeric", numeric_or_error([&] { return check_isomonodromy_numeric(sys, *res.witness, plan); }, o.trials)}};
    r.exit_code = kPositive;
  } else {
    p["witness"] = nullptr;
    r.exit_code = kNegative;
  }
}

void seq_check(const Options& o, const TowerSpec& tower, std::istream& in, Result& r) {
  const std::string text = text_or_stdin(o.matrix, in, "matrix");
  r.input["A"] = text;
  r.input["i0"] = o.i0;
  r.input["horizon"] = o.horizon;
  r.input["params"] = o.params;
  const LinearSystem sys = make_system(read_matrix(text, tower), tower);
  const Point params = read_params(o.params, tower);
  const SequenceFrame f = fundamental_matrix(sys, o.i0, o.horizon, params, o.auto_advance);
  Json& p = r.payload;
  p["i0"] = f.i0;
  p["horizon"] = f.horizon;
  p["skipped"] = f.skipped;
  p["first"] = qmatrix_json(f.values.front());
  p["last"] = qmatrix_json(f.values.back());
  Json values = Json::array();
  for (const QMatrix& y : f.values) values.push_back(qmatrix_json(y));
  p["values"] = values;
  const bool law = satisfies_frame_law(sys, f);
  p["frame_law"] = law;
  bool ok = law;
  if (!o.expr.empty()) {
    if (o.word.empty() || o.b.empty()) throw EngineError(ErrorCode::invalid_argument, "--word and --b are required");
    const FieldElement a = parse_expression(o.expr, tower);
    const Certificate c{{read_word(o.word)}, parse_expression(o.b, tower), {}, o.u};
    const SamplePlan plan = make_sample_plan(tower, o.trials, o.seed);
    Json num = numeric_or_error([&] { return check_certificate_numeric(a, c, tower, plan); }, o.trials);
    ok = ok && num["agree"] == true;
    p["certificate"] = Json{{"a", o.expr}, {"word", c.word.exponents}, {"b", o.b}, {"numeric", num}};
  }
  r.exit_code = ok ? kPositive : kNegative;
}

void render_text(const Json& j, const std::string& indent, std::string& out) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      out += indent + key + ":\n";
      render_text(value, indent + "  ", out);
    } else if (value.is_string()) {
      out += indent + key + ": " + value.get<std::string>() + "\n";
    } else {
      out += indent + key + ": " + value.dump() + "\n";
    }
  }
}

}  // namespace

Outcome run(const std::vector<std::string>& args, std::istream& in) {
  const auto start = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Decides sigma-algebraic dependence for phi(y) = a y and checks isomonodromy.", "sigmadep"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--var", o.vars, "Tower level, bottom first (default: t, then \"z: phi=z+1, sigma=z+t\")")
      ->allow_extra_args(false);
  app.add_option("--seed", o.seed, "Seed for sampling and random combinations");
  app.add_option("--trials", o.trials, "Numeric samples per check")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json, "Emit the JSON report");

  CLI::App* an = app.add_subcommand("analyze", "Decide dependence of the solutions of phi(y) = a y");
  an->add_option("a", o.expr, "Coefficient a (stdin when omitted or -)");

  CLI::App* vc = app.add_subcommand("verify-cert", "Check prod sigma^r(a)^n_r = phi(b)/b");
  vc->add_option("a", o.expr, "Coefficient a (stdin when omitted or -)");
  vc->add_option("--word", o.word, "Exponents n_0,n_1,...")->required();
  vc->add_option("--b", o.b, "Certificate b")->required();
  vc->add_option("--u", o.u, "Root-of-unity multiplier");

  CLI::App* im = app.add_subcommand("isomono", "Verify or search for B with phi(B) = sigma(A) B A^-1");
  im->add_option("A", o.matrix, "Matrix [[..], ..] or scalar (stdin when omitted or -)");
  im->add_option("--coeffs", o.coeffs, "Scalar equation c_0, ..., c_{m-1} (companion system)");
  im->add_option("--convention", o.convention, "standard or transposed companion");
  im->add_option("--B", o.gauge, "Gauge matrix to verify; solve mode without it");
  im->add_option("--degree-cap", o.degree_cap, "Numerator degree bound in solve mode")->check(CLI::NonNegativeNumber);

  CLI::App* sq = app.add_subcommand("seq-check", "Build Y(i+1) = A(i) Y(i) and corroborate a certificate");
  sq->add_option("A", o.matrix, "Matrix or scalar (stdin when omitted or -)");
  sq->add_option("--i0", o.i0, "Start index");
  sq->add_option("--horizon", o.horizon, "Number of frame values")->check(CLI::PositiveNumber);
  sq->add_option("--param", o.params, "Parameter value name=rational (repeatable)")->allow_extra_args(false);
  sq->add_flag("--auto-advance", o.auto_advance, "Restart past indices where A is singular");
  sq->add_option("--cert-a", o.expr, "Coefficient whose certificate is corroborated");
  sq->add_option("--word", o.word, "Certificate word");
  sq->add_option("--b", o.b, "Certificate b");

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["engine"] = std::string("sigmadep ") + SIGMADEP_VERSION;
  int code = kError;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {kPositive, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return {kPositive, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    // Options are stored only after a full parse; honor --json anyway.
    for (const std::string& a : args) {
      if (a == "--") break;
      o.json = o.json || a == "--json";
    }
    report["command"] = nullptr;
    report["seed"] = o.seed;
    report["status"] = "error";
    report["error"] = Json{{"code", "usage"}, {"message", e.what()}};
    code = kError;
  }

  if (!report.contains("status")) {
    const CLI::App* sub = app.get_subcommands().front();
    report["command"] = sub->get_name();
    report["seed"] = o.seed;
    Result r;
    r.input["tower"] = Json(o.vars.empty() ? kDefaultTower : o.vars);
    try {
      const TowerSpec tower = parse_tower(o.vars.empty() ? kDefaultTower : o.vars);
      r.input["tower"] = tower_json(tower);
      if (sub == an) analyze(o, tower, in, r);
      else if (sub == vc) verify_cert(o, tower, in, r);
      else if (sub == im) isomono(o, tower, in, r);
      else seq_check(o, tower, in, r);
      report["input"] = r.input;
      report["status"] = "ok";
      report["result"] = r.payload;
      code = r.exit_code;
    } catch (const ParseError& e) {
      report["input"] = r.input;
      report["status"] = "error";
      report["error"] = Json{{"code", error_code_name(e.code())},
                             {"message", e.what()},
                             {"position", e.position()},
                             {"expected", e.expected()}};
    } catch (const EngineError& e) {
      report["input"] = r.input;
      report["status"] = "error";
      report["error"] = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
    } catch (const std::exception& e) {
      report["input"] = r.input;
      report["status"] = "error";
      report["error"] = Json{{"code", "internal"}, {"message", e.what()}};
    }
  }
  report["exit_code"] = code;
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  report["timing_ms"] = std::round(elapsed.count() * 1000.0) / 1000.0;

  if (o.json) return {code, report.dump(2) + "\n"};
  std::string text;
  render_text(report, "", text);
  return {code, text};
}

std::string without_timing(const std::string& report_json) {
  Json j = Json::parse(report_json);
  j.erase("timing_ms");
  return j.dump(2);
}

}  // namespace sigmadep::cli
