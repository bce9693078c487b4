// osa - command-line front end: analyze equations, verify catalog solutions,
// sweep amplitude families, balance exponents, and render the comparison
// report. Every command emits exactly one JSON envelope in --json mode and
// is byte-deterministic (sorted keys, 17 significant digits).
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "osa/balance.hpp"
#include "osa/catalog.hpp"
#include "osa/errors.hpp"
#include "osa/jsonio.hpp"
#include "osa/parse.hpp"
#include "osa/scale.hpp"
#include "osa/solve.hpp"
#include "osa/verify.hpp"

namespace {

using osa::Ansatz;
using osa::BalanceObjective;
using osa::BranchSolution;
using osa::CatalogEntry;
using osa::ExponentConstraint;
using osa::Grid;
using osa::JsonValue;
using osa::ResidualReport;
using osa::ScaleRelation;
using osa::ScanFamily;
using osa::SolutionSpec;

// A requested id that names no catalog entry, solution, or scan family.
struct UnknownId : std::runtime_error {
  explicit UnknownId(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string joinArgs(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<std::string> splitCsv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string readFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw osa::ValidationFailure("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

const char* modeName(ScaleRelation::Mode m) {
  return m == ScaleRelation::Mode::Real ? "real" : "envelope";
}

const char* branchKindName(BranchSolution::Kind k) {
  switch (k) {
    case BranchSolution::Kind::Explicit: return "explicit";
    case BranchSolution::Kind::Implicit: return "implicit";
    case BranchSolution::Kind::Constraint: return "constraint";
  }
  return "explicit";
}

const char* featureKindName(osa::FeatureKind k) {
  switch (k) {
    case osa::FeatureKind::Bright: return "bright";
    case osa::FeatureKind::Kink: return "kink";
    case osa::FeatureKind::Dark: return "dark";
    case osa::FeatureKind::Compacton: return "compacton";
  }
  return "bright";
}

// ---------------------------------------------------------------------------
// JSON builders

JsonValue gridJson(const Grid& g) {
  JsonValue v = JsonValue::makeObject();
  v.object["xmin"] = JsonValue::of(g.xmin);
  v.object["xmax"] = JsonValue::of(g.xmax);
  v.object["n"] = JsonValue::of(static_cast<long>(g.n));
  v.object["h"] = JsonValue::of(g.h);
  return v;
}

JsonValue reportJson(const ResidualReport& rep) {
  JsonValue v = JsonValue::makeObject();
  v.object["solutionId"] = JsonValue::of(rep.solutionId);
  v.object["grid"] = gridJson(rep.grid);
  v.object["relativeSupResidual"] = JsonValue::of(rep.relativeSupResidual);
  v.object["convergenceSlope"] = JsonValue::of(rep.convergenceSlope);
  JsonValue bands = JsonValue::makeArray();
  for (const auto& b : rep.excludedBands) {
    JsonValue bv = JsonValue::makeObject();
    bv.object["lo"] = JsonValue::of(b.lo);
    bv.object["hi"] = JsonValue::of(b.hi);
    bands.array.push_back(std::move(bv));
  }
  v.object["excludedBands"] = std::move(bands);
  return v;
}

JsonValue stringsJson(const std::vector<std::string>& xs) {
  JsonValue v = JsonValue::makeArray();
  for (const auto& s : xs) v.array.push_back(JsonValue::of(s));
  return v;
}

JsonValue branchJson(const BranchSolution& br) {
  JsonValue v = JsonValue::makeObject();
  v.object["kind"] = JsonValue::of(branchKindName(br.kind));
  v.object["expression"] = JsonValue::of(br.expression);
  v.object["validity"] = JsonValue::of(br.validity);
  JsonValue sc = JsonValue::makeObject();
  for (const auto& [name, s] : br.signChoices)
    sc.object[name] = JsonValue::of(static_cast<long>(s));
  v.object["signChoices"] = std::move(sc);
  return v;
}

JsonValue solutionJson(const SolutionSpec& s) {
  JsonValue v = JsonValue::makeObject();
  v.object["id"] = JsonValue::of(s.id);
  v.object["equationId"] = JsonValue::of(s.equationId);
  v.object["form"] = JsonValue::of(s.form);
  v.object["kind"] = JsonValue::of(s.kind);
  v.object["complexField"] = JsonValue::of(s.complexField);
  v.object["amplitude"] = JsonValue::of(s.amplitude);
  v.object["widthParam"] = JsonValue::of(s.widthParam);
  v.object["velocity"] = JsonValue::of(s.velocity);
  v.object["omega"] = JsonValue::of(s.omega);
  JsonValue params = JsonValue::makeObject();
  for (const auto& [k, val] : s.params) params.object[k] = JsonValue::of(val);
  v.object["params"] = std::move(params);
  JsonValue rels = JsonValue::makeArray();
  for (const auto& r : s.knownRelations) {
    JsonValue rv = JsonValue::makeObject();
    rv.object["text"] = JsonValue::of(r.text);
    rv.object["provenance"] = JsonValue::of(osa::provenanceName(r.provenance));
    rv.object["source"] = JsonValue::of(r.source);
    rels.array.push_back(std::move(rv));
  }
  v.object["knownRelations"] = std::move(rels);
  v.object["notes"] = JsonValue::of(s.notes);
  return v;
}

// ---------------------------------------------------------------------------
// Shared command context

struct CommandOutput {
  JsonValue result = JsonValue::makeObject();
  std::vector<std::string> warnings;
  std::string human;  // stdout text in human mode
};

void errorObject(JsonValue& result, const std::string& type, const std::string& message) {
  JsonValue e = JsonValue::makeObject();
  e.object["type"] = JsonValue::of(type);
  e.object["message"] = JsonValue::of(message);
  result.object["error"] = std::move(e);
}

int runEmitting(const std::string& command, const std::string& echo, bool json,
                const std::function<void(CommandOutput&)>& body) {
  CommandOutput out;
  int code = 0;
  std::string errText;
  try {
    body(out);
  } catch (const osa::GridTooCoarseWithReport& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "grid-too-coarse", e.what());
    out.result.object["report"] = reportJson(e.report);
  } catch (const osa::GridTooCoarse& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "grid-too-coarse", e.what());
  } catch (const osa::ParseError& e) {
    code = 2;
    errText = e.what();
    errorObject(out.result, "parse", e.what());
    JsonValue& eo = out.result.object["error"];
    eo.object["position"] = JsonValue::of(static_cast<long>(e.position));
    eo.object["line"] = JsonValue::of(static_cast<long>(e.line));
    eo.object["column"] = JsonValue::of(static_cast<long>(e.column));
    eo.object["expected"] = JsonValue::of(e.expected);
    eo.object["found"] = JsonValue::of(e.found);
  } catch (const osa::UnboundSymbol& e) {
    code = 2;
    errText = e.what();
    errorObject(out.result, "parse", e.what());
  } catch (const osa::DegenerateRelation& e) {
    code = 3;
    errText = e.what();
    errorObject(out.result, "degenerate", e.what());
  } catch (const osa::EmptyRelation& e) {
    code = 3;
    errText = e.what();
    errorObject(out.result, "degenerate", e.what());
  } catch (const osa::NotPowerLawStructured& e) {
    code = 3;
    errText = e.what();
    errorObject(out.result, "degenerate", e.what());
  } catch (const UnknownId& e) {
    code = 4;
    errText = e.what();
    errorObject(out.result, "unknown-id", e.what());
  } catch (const osa::ValidationFailure& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "validation", e.what());
  } catch (const osa::FlatProfile& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "validation", e.what());
  } catch (const osa::RangeTooNarrow& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "validation", e.what());
  } catch (const osa::OverflowError& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "validation", e.what());
  } catch (const osa::UnsupportedRHS& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "validation", e.what());
  } catch (const osa::ModulusNotDifferentiable& e) {
    code = 5;
    errText = e.what();
    errorObject(out.result, "validation", e.what());
  } catch (const std::exception& e) {
    code = 1;
    errText = e.what();
    errorObject(out.result, "internal", e.what());
  }

  if (json) {
    JsonValue env = JsonValue::makeObject();
    env.object["schemaVersion"] = JsonValue::of("1");
    env.object["command"] = JsonValue::of(command);
    env.object["inputEcho"] = JsonValue::of(echo);
    env.object["result"] = std::move(out.result);
    env.object["warnings"] = stringsJson(out.warnings);
    std::fputs(osa::write_json(env).c_str(), stdout);
  } else if (code == 0) {
    std::fputs(out.human.c_str(), stdout);
    for (const auto& w : out.warnings)
      std::fprintf(stderr, "warning: %s\n", w.c_str());
  } else {
    std::fprintf(stderr, "osa %s: error: %s\n", command.c_str(), errText.c_str());
  }
  return code;
}

// ---------------------------------------------------------------------------
// analyze

void runAnalyze(CommandOutput& out, const std::string& equation,
                const std::vector<std::string>& params, const std::string& modeStr,
                const std::string& ansatzText) {
  ScaleRelation::Mode mode = modeStr == "envelope" ? ScaleRelation::Mode::Envelope
                                                   : ScaleRelation::Mode::Real;
  std::optional<Ansatz> ansatz;
  if (!ansatzText.empty()) ansatz = osa::parse_ansatz(ansatzText);

  osa::Expr eq = osa::parse_equation(equation, params);
  osa::Expr reduced = osa::traveling_reduce(eq);
  std::vector<ScaleRelation> rels = osa::scale_substitute(reduced, mode);

  out.result.object["equation"] = JsonValue::of(equation);
  out.result.object["mode"] = JsonValue::of(modeName(mode));
  out.result.object["params"] = stringsJson(params);
  out.result.object["ansatz"] =
      ansatz ? JsonValue::of(ansatz->text) : JsonValue::null();

  std::string human;
  human += "equation:  " + equation + "\n";
  human += "mode:      " + std::string(modeName(mode)) + "\n";
  if (ansatz) human += "ansatz:    " + ansatz->text + "\n";

  JsonValue relArr = JsonValue::makeArray();
  for (const auto& raw : rels) {
    ScaleRelation rel = osa::normalize(raw);
    std::string relText = osa::renderRelation(rel);
    ScaleRelation solved = rel;
    std::string solvedText = relText;
    if (ansatz) {
      solved = osa::normalize(osa::apply_ansatz(rel, *ansatz));
      solvedText = osa::renderRelation(solved);
    }
    std::vector<BranchSolution> branches = osa::solve_for_L(solved);
    std::vector<std::string> lines = osa::presentBranches(branches);

    JsonValue rv = JsonValue::makeObject();
    rv.object["imaginaryPart"] = JsonValue::of(rel.imaginaryPart);
    rv.object["relationText"] = JsonValue::of(relText);
    rv.object["ansatzAppliedText"] =
        ansatz ? JsonValue::of(solvedText) : JsonValue::null();
    JsonValue brArr = JsonValue::makeArray();
    for (const auto& br : branches) brArr.array.push_back(branchJson(br));
    rv.object["branches"] = std::move(brArr);
    rv.object["lines"] = stringsJson(lines);

    if (rels.size() > 1)
      human += rel.imaginaryPart ? "-- imaginary part --\n" : "-- real part --\n";
    human += "relation:  " + relText + "\n";
    if (ansatz && solvedText != relText)
      human += "with ansatz: " + solvedText + "\n";

    if (ansatz) {
      try {
        ExponentConstraint ec =
            osa::exponent_balance(solved, BalanceObjective{}, ansatz->exponent);
        rv.object["widthExponent"] = JsonValue::of(ec.q.str());
        rv.object["structureConstraints"] = stringsJson(ec.equalities);
        human += "width exponent: " + ec.qText + "\n";
        if (!ec.equalities.empty()) {
          human += "structure constraints: ";
          for (size_t i = 0; i < ec.equalities.size(); ++i)
            human += (i ? "; " : "") + ec.equalities[i];
          human += "\n";
        }
      } catch (const osa::NotPowerLawStructured& e) {
        rv.object["widthExponent"] = JsonValue::null();
        out.warnings.push_back(std::string("width exponent not power-law: ") + e.what());
      }
    }

    human += branches.size() == 1 && branches[0].kind != BranchSolution::Kind::Explicit
                 ? "solution:\n"
                 : "width branches:\n";
    for (const auto& line : lines) human += "  " + line + "\n";
    for (const auto& br : branches) {
      if (!br.validity.empty())
        human += "    [" + br.expression + "] " + br.validity + "\n";
    }
    relArr.array.push_back(std::move(rv));
  }
  out.result.object["relations"] = std::move(relArr);
  out.human = human;
}

// ---------------------------------------------------------------------------
// verify

void runVerify(CommandOutput& out, const std::vector<CatalogEntry>& entries,
               const std::vector<SolutionSpec>& solutions, const std::string& id,
               long gridN, double tolOverride) {
  const SolutionSpec* sol = osa::find_solution(solutions, id);
  if (!sol) throw UnknownId("unknown solution id: " + id);
  auto plan = osa::validation_plan(id);
  if (!plan || !sol->eval)
    throw osa::ValidationFailure(
        "solution '" + id + "' is a notes-only record without an evaluator; "
        "it cannot be verified numerically");
  Grid grid = gridN > 0 ? Grid(plan->grid.xmin, plan->grid.xmax, gridN) : plan->grid;
  double tol = tolOverride > 0 ? tolOverride : plan->tolerance;

  const CatalogEntry* entry = osa::find_entry(entries, sol->equationId);
  if (!entry) throw UnknownId("solution references unknown equation: " + sol->equationId);
  osa::Expr eq = osa::parse_equation(entry->equationSrc, entry->params);

  ResidualReport rep = osa::residual(eq, *sol, grid, tol);

  out.result.object["solution"] = solutionJson(*sol);
  out.result.object["equation"] = JsonValue::of(entry->equationSrc);
  out.result.object["grid"] = gridJson(grid);
  out.result.object["tolerance"] = JsonValue::of(tol);
  out.result.object["report"] = reportJson(rep);
  out.result.object["passed"] = JsonValue::of(rep.relativeSupResidual <= tol);

  std::string human;
  human += "solution:   " + sol->id + "  (equation " + sol->equationId + ": " +
           entry->equationSrc + ")\n";
  human += "form:       " + sol->form + "\n";
  human += "constants:  A = " + fmt17(sol->amplitude) + "  L = " + fmt17(sol->widthParam) +
           "  V = " + fmt17(sol->velocity);
  if (sol->complexField) human += "  omega = " + fmt17(sol->omega);
  human += "\n";
  human += "grid:       [" + fmt17(grid.xmin) + ", " + fmt17(grid.xmax) + "]  n = " +
           std::to_string(grid.n) + "  h = " + fmt17(grid.h) + "\n";
  human += "tolerance:  " + fmt17(tol) + "\n";
  human += "relative sup residual: " + fmt17(rep.relativeSupResidual) + "\n";
  human += "convergence slope:     " + fmt17(rep.convergenceSlope) + "\n";
  human += "excluded bands:        " + std::to_string(rep.excludedBands.size()) + "\n";
  if (!sol->knownRelations.empty()) {
    human += "relations confirmed by the residual:\n";
    for (const auto& r : sol->knownRelations)
      human += "  [" + std::string(osa::provenanceName(r.provenance)) + "] " + r.text + "\n";
  }
  human += "status:     PASS\n";
  out.human = human;
}

// ---------------------------------------------------------------------------
// scan

struct AmplitudeRange {
  double lo = 0.0, hi = 0.0;
  long count = 0;
};

AmplitudeRange parseRange(const std::string& s) {
  auto bad = [&](std::size_t pos, const std::string& expected, const std::string& found) {
    throw osa::ParseError(pos, expected, found, 1, static_cast<int>(pos) + 1);
  };
  AmplitudeRange r;
  std::size_t c1 = s.find(':');
  std::size_t c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    bad(s.size(), "an amplitude range lo:hi:count", s);
  try {
    std::size_t used = 0;
    r.lo = std::stod(s.substr(0, c1), &used);
    if (used != c1) bad(used, "a number", s.substr(used, c1 - used));
    std::string mid = s.substr(c1 + 1, c2 - c1 - 1);
    r.hi = std::stod(mid, &used);
    if (used != mid.size()) bad(c1 + 1 + used, "a number", mid.substr(used));
    std::string last = s.substr(c2 + 1);
    r.count = std::stol(last, &used);
    if (used != last.size()) bad(c2 + 1 + used, "an integer count", last.substr(used));
  } catch (const std::invalid_argument&) {
    bad(0, "an amplitude range lo:hi:count", s);
  } catch (const std::out_of_range&) {
    bad(0, "an amplitude range within double precision", s);
  }
  if (!(r.lo > 0.0)) throw osa::ValidationFailure("amplitude range needs lo > 0");
  if (!(r.hi > r.lo)) throw osa::ValidationFailure("amplitude range needs hi > lo");
  if (r.count < 2) throw osa::ValidationFailure("amplitude range needs count >= 2");
  return r;
}

void runScan(CommandOutput& out, const std::vector<SolutionSpec>& solutions,
             const std::string& id, const std::string& rangeStr) {
  const ScanFamily* fam = osa::find_family(id);
  if (!fam) {
    if (!osa::find_solution(solutions, id)) throw UnknownId("unknown solution id: " + id);
    throw osa::ValidationFailure("solution '" + id +
                                 "' has no amplitude-parameterized scan family");
  }
  AmplitudeRange range = parseRange(rangeStr);

  // Geometric spacing: width sweeps are read on log-log axes.
  std::vector<double> amplitudes(range.count);
  double ratio = std::pow(range.hi / range.lo,
                          1.0 / static_cast<double>(range.count - 1));
  for (long i = 0; i < range.count; ++i)
    amplitudes[i] = range.lo * std::pow(ratio, static_cast<double>(i));
  amplitudes.back() = range.hi;

  std::string csv = "A,W_measured,W_predicted,branch\n";
  JsonValue rows = JsonValue::makeArray();
  std::map<double, double> measured;
  for (double A : amplitudes) {
    SolutionSpec member = fam->member(A);
    Grid grid = fam->gridFor(A);
    std::vector<double> u(static_cast<size_t>(grid.n));
    for (long i = 0; i < grid.n; ++i)
      u[static_cast<size_t>(i)] = member.eval(grid.x(i)).real();
    osa::Features f = osa::measure_features(u, grid, fam->featureKind);
    double predicted = fam->fwhmFactor * member.widthParam;
    measured[A] = f.width;
    csv += fmt17(A) + "," + fmt17(f.width) + "," + fmt17(predicted) + "," +
           fam->branchLabel + "\n";
    JsonValue row = JsonValue::makeObject();
    row.object["A"] = JsonValue::of(A);
    row.object["wMeasured"] = JsonValue::of(f.width);
    row.object["wPredicted"] = JsonValue::of(predicted);
    row.object["branch"] = JsonValue::of(fam->branchLabel);
    rows.array.push_back(std::move(row));
  }

  JsonValue famJson = JsonValue::makeObject();
  famJson.object["solutionId"] = JsonValue::of(fam->solutionId);
  famJson.object["description"] = JsonValue::of(fam->description);
  famJson.object["featureKind"] = JsonValue::of(featureKindName(fam->featureKind));
  famJson.object["predictedExponent"] = JsonValue::of(fam->predictedExponent);
  famJson.object["fwhmFactor"] = JsonValue::of(fam->fwhmFactor);
  famJson.object["branchLabel"] = JsonValue::of(fam->branchLabel);
  out.result.object["family"] = std::move(famJson);
  out.result.object["rows"] = std::move(rows);
  out.result.object["csv"] = JsonValue::of(csv);

  if (range.count >= 5 && range.hi >= 10.0 * range.lo) {
    osa::ScalingFit fit = osa::fit_scaling(
        fam->solutionId, amplitudes,
        [&measured](double a) { return measured.at(a); }, fam->predictedExponent);
    JsonValue fv = JsonValue::makeObject();
    fv.object["slope"] = JsonValue::of(fit.slope);
    fv.object["slopeStdErr"] = JsonValue::of(fit.slopeStdErr);
    fv.object["predictedExponent"] = JsonValue::of(fit.predictedExponent);
    out.result.object["fit"] = std::move(fv);
  } else {
    out.result.object["fit"] = JsonValue::null();
    out.warnings.push_back(
        "scaling fit skipped: it needs at least 5 amplitudes spanning a decade");
  }

  out.human = csv;
}

// ---------------------------------------------------------------------------
// balance

BalanceObjective parseObjective(const std::string& s) {
  BalanceObjective obj;
  if (s.empty() || s == "none") {
    obj.kind = BalanceObjective::Kind::None;
  } else if (s == "constant_width") {
    obj.kind = BalanceObjective::Kind::ConstantWidth;
  } else if (s == "mass_invariance") {
    obj.kind = BalanceObjective::Kind::MassInvariant;
  } else if (s == "width_prop_velocity") {
    obj.kind = BalanceObjective::Kind::WidthPropVelocity;
  } else if (s.rfind("power_law:", 0) == 0) {
    obj.kind = BalanceObjective::Kind::PowerLaw;
    std::string q = s.substr(10);
    std::size_t slash = q.find('/');
    try {
      long num = std::stol(slash == std::string::npos ? q : q.substr(0, slash));
      long den = slash == std::string::npos ? 1 : std::stol(q.substr(slash + 1));
      obj.q0 = osa::Rational(num, den);
    } catch (const std::exception&) {
      throw osa::ParseError(10, "a rational exponent p or p/q", q, 1, 11);
    }
  } else {
    throw osa::ParseError(
        0,
        "an objective: none | constant_width | mass_invariance | "
        "width_prop_velocity | power_law:<p[/q]>",
        s, 1, 1);
  }
  return obj;
}

void runBalance(CommandOutput& out, const std::string& equation,
                const std::vector<std::string>& params, const std::string& ansatzText,
                const std::string& objectiveStr) {
  BalanceObjective objective = parseObjective(objectiveStr);
  std::optional<Ansatz> ansatz;
  if (!ansatzText.empty()) ansatz = osa::parse_ansatz(ansatzText);

  osa::Expr eq = osa::parse_equation(equation, params);
  std::vector<ScaleRelation> rels =
      osa::scale_substitute(osa::traveling_reduce(eq), ScaleRelation::Mode::Real);
  ScaleRelation rel = osa::normalize(rels.front());
  if (ansatz) rel = osa::normalize(osa::apply_ansatz(rel, *ansatz));

  std::optional<osa::ExponentExpr> ansatzExponent;
  if (ansatz && ansatz->kind == Ansatz::Kind::PowerLaw)
    ansatzExponent = ansatz->exponent;
  ExponentConstraint ec = osa::exponent_balance(rel, objective, ansatzExponent);

  out.result.object["equation"] = JsonValue::of(equation);
  out.result.object["relationText"] = JsonValue::of(osa::renderRelation(rel));
  out.result.object["ansatz"] = ansatz ? JsonValue::of(ansatz->text) : JsonValue::null();
  out.result.object["objective"] =
      JsonValue::of(objectiveStr.empty() ? std::string("none") : objectiveStr);
  out.result.object["widthExponent"] = JsonValue::of(ec.q.str());
  out.result.object["widthExponentText"] = JsonValue::of(ec.qText);
  out.result.object["equalities"] = stringsJson(ec.equalities);
  out.result.object["solution"] = JsonValue::of(ec.solutionDescription);
  out.result.object["satisfiable"] = JsonValue::of(ec.satisfiable);

  std::string human;
  human += "equation:   " + equation + "\n";
  human += "relation:   " + osa::renderRelation(rel) + "\n";
  if (ansatz) human += "ansatz:     " + ansatz->text + "\n";
  human += "objective:  " + (objectiveStr.empty() ? std::string("none") : objectiveStr) + "\n";
  human += "width exponent: " + ec.qText + "\n";
  if (!ec.equalities.empty()) {
    human += "constraints: ";
    for (size_t i = 0; i < ec.equalities.size(); ++i)
      human += (i ? "; " : "") + ec.equalities[i];
    human += "\n";
  }
  if (!ec.solutionDescription.empty())
    human += "solution:   " + ec.solutionDescription + "\n";
  human += std::string("satisfiable: ") + (ec.satisfiable ? "yes" : "no") + "\n";
  out.human = human;
}

// ---------------------------------------------------------------------------
// spectrum

void runSpectrum(CommandOutput& out, const std::vector<SolutionSpec>& solutions,
                 const std::string& id, int jMin, int jMax) {
  const SolutionSpec* sol = osa::find_solution(solutions, id);
  if (!sol) throw UnknownId("unknown solution id: " + id);
  auto plan = osa::validation_plan(id);
  if (!plan || !sol->eval)
    throw osa::ValidationFailure(
        "solution '" + id + "' is a notes-only record without an evaluator");
  Grid grid = plan->grid;
  std::vector<double> u(static_cast<size_t>(grid.n));
  for (long i = 0; i < grid.n; ++i)
    u[static_cast<size_t>(i)] = sol->eval(grid.x(i)).real();

  osa::ScaleSpectrum sp = osa::scale_spectrum(u, grid, jMin, jMax);

  std::string csv = "j,scale,energy,dominant\n";
  JsonValue energies = JsonValue::makeArray();
  for (int j = sp.jMin; j <= sp.jMax; ++j) {
    double e = sp.energies[static_cast<size_t>(j - sp.jMin)];
    csv += std::to_string(j) + "," + fmt17(std::pow(2.0, -j)) + "," + fmt17(e) + "," +
           (j == sp.dominantJ ? "1" : "0") + "\n";
    energies.array.push_back(JsonValue::of(e));
  }
  out.result.object["solutionId"] = JsonValue::of(id);
  out.result.object["grid"] = gridJson(grid);
  out.result.object["jMin"] = JsonValue::of(static_cast<long>(sp.jMin));
  out.result.object["jMax"] = JsonValue::of(static_cast<long>(sp.jMax));
  out.result.object["dominantJ"] = JsonValue::of(static_cast<long>(sp.dominantJ));
  out.result.object["dominanceRatio"] = JsonValue::of(sp.dominanceRatio);
  out.result.object["energies"] = std::move(energies);
  out.result.object["csv"] = JsonValue::of(csv);
  out.human = csv;
}

// ---------------------------------------------------------------------------
// catalog + report

std::vector<CatalogEntry> loadCatalog(const std::string& catalogFile) {
  if (catalogFile.empty()) return osa::build_catalog();
  return osa::catalog_from_json(readFileOrThrow(catalogFile));
}

void runCatalogList(CommandOutput& out, const std::vector<CatalogEntry>& entries) {
  JsonValue arr = JsonValue::makeArray();
  std::string human;
  human += "id                  mode      flag          ansatz\n";
  for (const auto& e : entries) {
    JsonValue row = JsonValue::makeObject();
    row.object["id"] = JsonValue::of(e.id);
    row.object["mode"] = JsonValue::of(modeName(e.mode));
    row.object["matchFlag"] = JsonValue::of(osa::matchFlagName(e.matchFlag));
    row.object["ansatz"] = e.ansatz ? JsonValue::of(e.ansatz->text) : JsonValue::null();
    arr.array.push_back(std::move(row));

    std::string id = e.id;
    id.resize(20, ' ');
    std::string mode = modeName(e.mode);
    mode.resize(10, ' ');
    std::string flag = osa::matchFlagName(e.matchFlag);
    flag.resize(14, ' ');
    human += id + mode + flag + (e.ansatz ? e.ansatz->text : "-") + "\n";
  }
  out.result.object["entries"] = std::move(arr);
  out.result.object["count"] = JsonValue::of(static_cast<long>(entries.size()));
  out.human = human;
}

void runCatalogShow(CommandOutput& out, const std::vector<CatalogEntry>& entries,
                    const std::string& id) {
  const CatalogEntry* e = osa::find_entry(entries, id);
  if (!e) throw UnknownId("unknown catalog id: " + id);

  // Reuse the serialized document shape for the single entry.
  JsonValue doc = osa::parse_json(osa::catalog_to_json({*e}));
  out.result = doc.at("entries").array.front();

  std::string human;
  human += "id:        " + e->id + "\n";
  human += "equation:  " + e->equationSrc + "\n";
  if (!e->params.empty()) {
    human += "params:    ";
    for (size_t i = 0; i < e->params.size(); ++i)
      human += (i ? ", " : "") + e->params[i];
    human += "\n";
  }
  human += "mode:      " + std::string(modeName(e->mode)) + "\n";
  if (e->ansatz) human += "ansatz:    " + e->ansatz->text + "\n";
  human += "derived:   " + e->relationText + "\n";
  human += "width branches:\n";
  for (const auto& line : e->engineLines) human += "  " + line + "\n";
  human += "quoted:    " + e->literatureRelation + "\n";
  human += "source:    " + e->sourceRef + "\n";
  human += "verdict:   " + std::string(osa::matchFlagName(e->matchFlag)) + "\n";
  if (!e->notes.empty()) human += "notes:     " + e->notes + "\n";
  out.human = human;
}

void runCatalogDump(CommandOutput& out, const std::vector<CatalogEntry>& entries) {
  std::string doc = osa::catalog_to_json(entries);
  out.result = osa::parse_json(doc);
  out.human = doc;
}

void runReport(CommandOutput& out, const std::vector<CatalogEntry>& entries) {
  std::string md = osa::render_report(entries);
  out.result.object["markdown"] = JsonValue::of(md);
  out.result.object["entryCount"] = JsonValue::of(static_cast<long>(entries.size()));
  out.human = md;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "osa - one-scale analysis of localized traveling waves in 1+1D nonlinear "
      "PDEs: derive amplitude-width-velocity relations, verify them against "
      "exact solutions, and compare with published closed forms"};
  app.require_subcommand(1);
  bool json = false;

  // analyze
  std::string eqArg, eqFile, paramsCsv, modeStr = "real", ansatzText;
  auto* analyze = app.add_subcommand(
      "analyze", "Derive and solve the width relation of an equation");
  auto* eqOpt = analyze->add_option("equation", eqArg, "Equation in the DSL, e.g. "
                                    "\"u_t + 6*u*u_x + u_xxx = 0\"");
  analyze->add_option("--file", eqFile, "Read the equation from a file instead")
      ->excludes(eqOpt);
  analyze->add_option("--params", paramsCsv, "Comma-separated symbolic parameters");
  analyze->add_option("--mode", modeStr, "Substitution mode: real | envelope")
      ->check(CLI::IsMember({"real", "envelope"}));
  analyze->add_option("--ansatz", ansatzText,
                      "Velocity ansatz, e.g. \"V = alpha*A^(n-1)\"");
  analyze->add_flag("--json", json, "Emit a JSON envelope");

  // verify
  std::string verifyId;
  long gridN = 0;
  double tolOverride = 0.0;
  auto* verify = app.add_subcommand(
      "verify", "Check a catalog solution against its equation by residual");
  verify->add_option("solutionId", verifyId, "Solution id (see catalog list)")
      ->required();
  verify->add_option("--grid-n", gridN, "Override the number of grid points");
  verify->add_option("--tolerance", tolOverride, "Override the residual tolerance");
  verify->add_flag("--json", json, "Emit a JSON envelope");

  // scan
  std::string scanId, rangeStr;
  auto* scan = app.add_subcommand(
      "scan", "Sweep a solution family over amplitudes; CSV of measured widths");
  scan->add_option("solutionId", scanId, "Family id (kdv_sech2, mkdv_sech, ...)")
      ->required();
  scan->add_option("--amplitude-range", rangeStr,
                   "lo:hi:count, geometrically spaced")
      ->required();
  scan->add_flag("--json", json, "Emit a JSON envelope");

  // balance
  std::string balEq, balFile, balParamsCsv, balAnsatz, objectiveStr = "none";
  auto* balance = app.add_subcommand(
      "balance", "Reduce the exponent conditions a width objective imposes");
  auto* balEqOpt = balance->add_option("equation", balEq, "Equation in the DSL");
  balance->add_option("--file", balFile, "Read the equation from a file instead")
      ->excludes(balEqOpt);
  balance->add_option("--params", balParamsCsv, "Comma-separated symbolic parameters");
  balance->add_option("--ansatz", balAnsatz, "Velocity ansatz, e.g. \"V = V0*A^(m-1)\"");
  balance->add_option("--objective", objectiveStr,
                      "none | constant_width | mass_invariance | "
                      "width_prop_velocity | power_law:<p[/q]>");
  balance->add_flag("--json", json, "Emit a JSON envelope");

  // spectrum
  std::string spectrumId;
  int jMin = -4, jMax = 4;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Dyadic scale spectrum of a solution profile (CSV)");
  spectrum->add_option("solutionId", spectrumId, "Solution id")->required();
  spectrum->add_option("--jmin", jMin, "Coarsest dyadic level (default -4)");
  spectrum->add_option("--jmax", jMax, "Finest dyadic level (default 4)");
  spectrum->add_flag("--json", json, "Emit a JSON envelope");

  // catalog
  std::string catalogFile, showId;
  auto* catalog = app.add_subcommand("catalog", "Inspect the equation catalog");
  catalog->require_subcommand(1);
  catalog->add_option("--catalog", catalogFile,
                      "Load the catalog from a JSON document instead of building it");
  auto* catList = catalog->add_subcommand("list", "One line per entry");
  catList->add_flag("--json", json, "Emit a JSON envelope");
  auto* catShow = catalog->add_subcommand("show", "Full record of one entry");
  catShow->add_option("id", showId, "Catalog entry id")->required();
  catShow->add_flag("--json", json, "Emit a JSON envelope");
  auto* catDump = catalog->add_subcommand(
      "dump", "Serialize the catalog as the JSON document `report --catalog` reads");
  catDump->add_flag("--json", json, "Emit a JSON envelope");

  // report
  std::string reportCatalogFile;
  auto* report = app.add_subcommand(
      "report", "Markdown comparison of derived vs quoted width relations");
  report->add_option("--catalog", reportCatalogFile,
                     "Load the catalog from a JSON document instead of building it");
  report->add_flag("--json", json, "Emit a JSON envelope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string echo = joinArgs(argc, argv);

  if (analyze->parsed()) {
    return runEmitting("analyze", echo, json, [&](CommandOutput& out) {
      std::string eq = eqArg;
      if (eq.empty() && !eqFile.empty()) eq = trimmed(readFileOrThrow(eqFile));
      if (eq.empty())
        throw osa::ParseError(0, "an equation string or --file", "nothing", 1, 1);
      runAnalyze(out, eq, splitCsv(paramsCsv), modeStr, ansatzText);
    });
  }
  if (verify->parsed()) {
    return runEmitting("verify", echo, json, [&](CommandOutput& out) {
      runVerify(out, osa::build_catalog(), osa::build_solutions(), verifyId, gridN,
                tolOverride);
    });
  }
  if (scan->parsed()) {
    return runEmitting("scan", echo, json, [&](CommandOutput& out) {
      runScan(out, osa::build_solutions(), scanId, rangeStr);
    });
  }
  if (balance->parsed()) {
    return runEmitting("balance", echo, json, [&](CommandOutput& out) {
      std::string eq = balEq;
      if (eq.empty() && !balFile.empty()) eq = trimmed(readFileOrThrow(balFile));
      if (eq.empty())
        throw osa::ParseError(0, "an equation string or --file", "nothing", 1, 1);
      runBalance(out, eq, splitCsv(balParamsCsv), balAnsatz, objectiveStr);
    });
  }
  if (spectrum->parsed()) {
    return runEmitting("spectrum", echo, json, [&](CommandOutput& out) {
      runSpectrum(out, osa::build_solutions(), spectrumId, jMin, jMax);
    });
  }
  if (catalog->parsed()) {
    if (catList->parsed()) {
      return runEmitting("catalog list", echo, json, [&](CommandOutput& out) {
        runCatalogList(out, loadCatalog(catalogFile));
      });
    }
    if (catShow->parsed()) {
      return runEmitting("catalog show", echo, json, [&](CommandOutput& out) {
        runCatalogShow(out, loadCatalog(catalogFile), showId);
      });
    }
    return runEmitting("catalog dump", echo, json, [&](CommandOutput& out) {
      runCatalogDump(out, loadCatalog(catalogFile));
    });
  }
  return runEmitting("report", echo, json, [&](CommandOutput& out) {
    runReport(out, loadCatalog(reportCatalogFile));
  });
}
