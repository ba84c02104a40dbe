#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "lvar/ambiguity.hpp"
#include "lvar/divergence.hpp"
#include "lvar/errors.hpp"
#include "lvar/lambda_var.hpp"
#include "lvar/oracle.hpp"
#include "lvar/risk_sharing.hpp"

namespace lvar::cli {
namespace {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

class SchemaError : public Error {
 public:
  using Error::Error;
  const char* reason() const noexcept override { return "schema"; }
};

struct Flags {
  std::string command;
  std::string scenario;
  std::string output;
  std::string format = "json";
  bool oracle = false;
  std::optional<double> grid_x;
  std::optional<double> grid_y;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
};

const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string(where) + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& v : j) out.push_back(number(v, what));
  return out;
}

std::string text(const json& j, const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

json ext(const ExtReal& v) {
  if (v.is_pos_inf()) return "+inf";
  if (v.is_neg_inf()) return "-inf";
  return v.value();
}

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Outcome space, named measures and the scenario's parsed pieces.
class Scenario {
 public:
  explicit Scenario(json doc) : doc_(std::move(doc)) {
    if (!doc_.is_object()) throw SchemaError("scenario must be a JSON object");
    const json& version = field(doc_, "version", "scenario");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
      throw SchemaError("unsupported scenario version; expected " + std::to_string(kSchemaVersion));
    }
    if (doc_.contains("outcomes")) {
      const json& o = doc_.at("outcomes");
      if (o.is_number_integer()) {
        if (o.get<long long>() < 1) throw SchemaError("outcomes must be positive");
        space_ = FiniteSpace::with_size(o.get<std::size_t>());
      } else if (o.is_array()) {
        std::vector<std::string> labels;
        for (const json& l : o) labels.push_back(text(l, "outcome label"));
        space_ = FiniteSpace::create(std::move(labels));
      } else {
        throw SchemaError("outcomes must be a count or a list of labels");
      }
    }
    if (doc_.contains("P")) measures_.emplace("P", measure_from(doc_.at("P")));
    if (doc_.contains("measures")) {
      const json& ms = doc_.at("measures");
      if (!ms.is_object()) throw SchemaError("measures must map names to probability vectors");
      for (const auto& [name, w] : ms.items()) measures_.emplace(name, measure_from(w));
    }
  }

  const json& doc() const { return doc_; }
  const SpacePtr& space() const {
    if (!space_) throw SchemaError("scenario: missing field 'outcomes'");
    return space_;
  }

  std::optional<std::string> command() const {
    if (!doc_.contains("command")) return std::nullopt;
    return text(doc_.at("command"), "command");
  }

  RandomVariable variable(const json& j, const char* what) const { return RandomVariable(space(), numbers(j, what)); }
  RandomVariable X() const { return variable(field(doc_, "X", "scenario"), "X"); }

  const ProbabilityMeasure& measure(const json& ref) const {
    const std::string name = text(ref, "measure reference");
    const auto it = measures_.find(name);
    if (it == measures_.end()) throw SchemaError("unknown measure '" + name + "'");
    return it->second;
  }

  /// The "measure" field of j, or the only declared measure.
  const ProbabilityMeasure& base_of(const json& j) const {
    if (j.contains("measure")) return measure(j.at("measure"));
    if (measures_.size() == 1) return measures_.begin()->second;
    throw SchemaError("missing field 'measure' and no single default measure");
  }

  static LambdaFn lambda(const json& j) {
    if (!j.is_object()) throw SchemaError("lambda must be an object");
    if (j.contains("constant")) return LambdaFn::constant(number(j.at("constant"), "lambda.constant"));
    const Direction dir = direction_from_string(text(field(j, "direction", "lambda"), "lambda.direction"));
    return LambdaFn::step(dir, numbers(field(j, "breakpoints", "lambda"), "lambda.breakpoints"),
                          numbers(field(j, "values", "lambda"), "lambda.values"));
  }

  static PhiFn phi(const json& j) {
    const std::string kind = text(field(j, "kind", "phi"), "phi.kind");
    if (kind == "kl") return PhiFn::kl();
    if (kind == "alpha") return PhiFn::alpha(number(field(j, "a", "phi"), "phi.a"));
    if (kind == "chi_squared") return PhiFn::chi_squared();
    if (kind == "band") return PhiFn::band(number(field(j, "k1", "phi"), "phi.k1"), number(field(j, "k2", "phi"), "phi.k2"));
    throw SchemaError("unknown phi kind '" + kind + "'");
  }

  Capacity capacity(const json& j) const {
    const std::string type = text(field(j, "type", "capacity"), "capacity.type");
    if (type == "measure") return Capacity::measure(base_of(j));
    if (type == "sup_of_measures") {
      const json& refs = field(j, "measures", "capacity");
      if (!refs.is_array()) throw SchemaError("capacity.measures must be an array of names");
      std::vector<ProbabilityMeasure> ms;
      for (const json& r : refs) ms.push_back(measure(r));
      return Capacity::sup_of_measures(std::move(ms));
    }
    if (type == "expectation_cap") return Capacity::expectation_cap(variable(field(j, "Y", "capacity"), "Y"), base_of(j));
    if (type == "band") {
      return Capacity::likelihood_band(variable(field(j, "Y1", "capacity"), "Y1"),
                                       variable(field(j, "Y2", "capacity"), "Y2"), base_of(j));
    }
    if (type == "table") return Capacity::table(space(), numbers(field(j, "values", "capacity"), "capacity.values"));
    if (type == "distortion") return Capacity::distortion(distortion(field(j, "g", "capacity")), base_of(j));
    throw SchemaError("unknown capacity type '" + type + "'");
  }

  static DistortionFn distortion(const json& g) {
    const std::string type = text(field(g, "type", "g"), "g.type");
    if (type == "identity") return {[](double p) { return p; }, "identity"};
    if (type == "power") {
      const double a = number(field(g, "exponent", "g"), "g.exponent");
      if (!(a > 0.0)) throw DomainError("power distortion needs a positive exponent");
      return {[a](double p) { return std::pow(p, a); }, "power"};
    }
    if (type == "phi_ball") return DistortionCurve(phi(field(g, "phi", "g")), number(field(g, "delta", "g"), "g.delta")).as_fn();
    throw SchemaError("unknown distortion type '" + type + "'");
  }

  AmbiguitySet ambiguity(const json& j) const {
    const std::string type = text(field(j, "type", "ambiguity"), "ambiguity.type");
    if (type == "phi_ball") {
      return AmbiguitySet::phi_ball(phi(field(j, "phi", "ambiguity")), number(field(j, "delta", "ambiguity"), "delta"),
                                    base_of(j));
    }
    if (type == "band") {
      return AmbiguitySet::likelihood_band(variable(field(j, "Y1", "ambiguity"), "Y1"),
                                           variable(field(j, "Y2", "ambiguity"), "Y2"), base_of(j));
    }
    throw SchemaError("unknown ambiguity type '" + type + "'");
  }

 private:
  ProbabilityMeasure measure_from(const json& w) const { return ProbabilityMeasure(space(), numbers(w, "measure")); }

  json doc_;
  SpacePtr space_;
  std::map<std::string, ProbabilityMeasure> measures_;
};

oracle::GridSpec grid_of(const Scenario& s, const Flags& f) {
  oracle::GridSpec g;
  bool seeded = false;
  if (s.doc().contains("grid")) {
    const json& j = s.doc().at("grid");
    if (j.contains("x_resolution")) g.x_resolution = number(j.at("x_resolution"), "grid.x_resolution");
    if (j.contains("y_resolution")) g.y_resolution = number(j.at("y_resolution"), "grid.y_resolution");
    if (j.contains("samples")) g.sample_count = j.at("samples").get<std::size_t>();
    if (j.contains("simplex_steps")) g.simplex_steps = j.at("simplex_steps").get<std::size_t>();
    if (j.contains("seed")) {
      g.seed = j.at("seed").get<std::uint64_t>();
      seeded = true;
    }
  }
  if (f.grid_x) g.x_resolution = *f.grid_x;
  if (f.grid_y) g.y_resolution = *f.grid_y;
  if (f.samples) g.sample_count = *f.samples;
  if (f.seed) {
    g.seed = *f.seed;
    seeded = true;
  }
  if (f.oracle && !seeded) {
    throw SchemaError("--oracle needs an explicit seed (grid.seed or --seed)");
  }
  return g;
}

json certificate_json(const SharingResult& r, const SpacePtr& space) {
  json out;
  out["value"] = ext(r.value);
  out["approximate"] = r.approximate;
  out["error_bound"] = r.error_bound;
  out["has_allocation"] = r.has_allocation;
  if (r.cross_check_value) out["cross_check_value"] = ext(*r.cross_check_value);
  if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
  if (!r.has_allocation) return out;
  out["x_star"] = r.x_star;
  out["y_star"] = r.y_star;
  json cells = json::array();
  for (Mask m : r.partition) {
    json c = json::array();
    for_each_bit(m, [&](std::size_t k) { c.push_back(space->label(k)); });
    cells.push_back(c);
  }
  out["partition"] = cells;
  json allocs = json::array();
  for (const RandomVariable& a : r.allocations) allocs.push_back(a.values());
  out["allocations"] = allocs;
  json cert = json::array();
  for (const CertificateEntry& e : r.certificate) {
    cert.push_back({{"tail_capacity", e.tail_capacity}, {"lambda_at_y", e.lambda_at_y}, {"holds", e.holds}});
  }
  out["certificate"] = cert;
  return out;
}

std::string allocation_csv(const SharingResult& r, const SpacePtr& space, const RandomVariable& X,
                           const std::vector<std::string>& labels) {
  std::ostringstream o;
  o << "outcome,X";
  for (const std::string& l : labels) o << ',' << l;
  o << '\n';
  for (std::size_t k = 0; k < X.size(); ++k) {
    o << space->label(k) << ',' << shortest(X[k]);
    for (const RandomVariable& a : r.allocations) o << ',' << shortest(a[k]);
    o << '\n';
  }
  return o.str();
}

enum class Bound { OracleAbove, OracleBelow, Unordered };

/// Comparison of the exact value with a brute-force comparator.
json oracle_report(const ExtReal& main, const ExtReal& brute, Bound bound, const char* name) {
  json out;
  out["name"] = name;
  out["value"] = ext(brute);
  if (main.is_finite() && brute.is_finite()) {
    out["delta"] = brute.value() - main.value();
  } else {
    out["delta"] = main == brute ? json(0.0) : json(nullptr);
  }
  if (bound == Bound::Unordered) {
    out["expected_side"] = nullptr;
    out["bound_holds"] = nullptr;
    return out;
  }
  out["expected_side"] = bound == Bound::OracleAbove ? "oracle >= value" : "oracle <= value";
  constexpr double kSlack = 1e-9;
  const bool ok = bound == Bound::OracleAbove ? !(brute + ExtReal(kSlack) < main) : !(main + ExtReal(kSlack) < brute);
  out["bound_holds"] = ok;
  return out;
}

struct Document {
  json body;
  std::optional<std::string> csv;
};

Document cmd_eval(const Scenario& s, const Flags& f) {
  const Capacity w = s.capacity(field(s.doc(), "capacity", "scenario"));
  const LambdaFn L = Scenario::lambda(field(s.doc(), "lambda", "scenario"));
  const RandomVariable X = s.X();
  Document d;
  d.body["value"] = ext(lambda_var(w, L, X));
  d.body["plus_value"] = ext(lambda_var_plus(w, L, X));
  d.body["capacity"] = w.kind_name();
  if (f.oracle) {
    const ExtReal v = lambda_var(w, L, X);
    d.body["oracle"] = oracle_report(v, oracle::brute_lambda_var(w, L, X, grid_of(s, f)), Bound::OracleAbove, "brute_lambda_var");
  }
  return d;
}

Document cmd_robust(const Scenario& s, const Flags& f) {
  const AmbiguitySet S = s.ambiguity(field(s.doc(), "ambiguity", "scenario"));
  const LambdaFn L = Scenario::lambda(field(s.doc(), "lambda", "scenario"));
  const RandomVariable X = s.X();
  const RobustReport r = robust_lambda_var_report(S, L, X);
  Document d;
  d.body["value"] = ext(r.value);
  d.body["transformed_value"] = r.transformed_value ? ext(*r.transformed_value) : json(nullptr);
  d.body["lambda_touches_one"] = r.lambda_touches_one;
  if (f.oracle) {
    const oracle::GridSpec g = grid_of(s, f);
    json rep = oracle_report(r.value, oracle::brute_sup_over_ball(S, L, X, g), Bound::OracleBelow, "brute_sup_over_ball");
    rep["seed"] = g.seed;
    rep["samples"] = g.sample_count;
    d.body["oracle"] = rep;
  }
  return d;
}

std::vector<std::string> agent_labels(const json& agents) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    out.push_back(agents[i].contains("label") ? text(agents[i].at("label"), "agent label") : "agent" + std::to_string(i));
  }
  return out;
}

const json& agents_of(const Scenario& s) {
  const json& a = field(s.doc(), "agents", "scenario");
  if (!a.is_array() || a.empty()) throw SchemaError("agents must be a non-empty array");
  return a;
}

std::vector<Agent> plain_agents(const Scenario& s, const json& a) {
  const std::vector<std::string> labels = agent_labels(a);
  std::vector<Agent> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back({labels[i], Scenario::lambda(field(a[i], "lambda", "agent")), s.capacity(field(a[i], "capacity", "agent"))});
  }
  return out;
}

Document cmd_share(const Scenario& s, const Flags& f) {
  const json& a = agents_of(s);
  const RandomVariable X = s.X();
  const oracle::GridSpec g = grid_of(s, f);
  SharingOptions opts;
  opts.grid_resolution = g.y_resolution;
  const bool robust = a[0].contains("ambiguity");
  SharingResult r;
  Document d;
  if (robust) {
    const std::vector<std::string> labels = agent_labels(a);
    std::vector<RobustAgent> agents;
    for (std::size_t i = 0; i < a.size(); ++i) {
      agents.push_back({labels[i], Scenario::lambda(field(a[i], "lambda", "agent")), s.ambiguity(field(a[i], "ambiguity", "agent"))});
    }
    r = robust_sharing(agents, X, opts);
  } else {
    const std::vector<Agent> agents = plain_agents(s, a);
    r = inf_convolution(agents, X, opts);
    if (f.oracle) {
      d.body["oracle"] =
          oracle_report(r.value, oracle::brute_inf_convolution(agents, X, g), Bound::OracleAbove, "brute_inf_convolution");
    }
  }
  d.body.update(certificate_json(r, s.space()));
  d.body["route"] = robust ? "robust_sharing" : "inf_convolution";
  if (f.format == "csv") {
    if (!r.has_allocation) throw ContractError("no allocation to print: value is " + r.value.to_string());
    d.csv = allocation_csv(r, s.space(), X, agent_labels(a));
  }
  return d;
}

Document cmd_como_share(const Scenario& s, const Flags& f) {
  const json& a = agents_of(s);
  const std::vector<Agent> agents = plain_agents(s, a);
  const RandomVariable X = s.X();
  const SharingResult r = comonotone_inf_convolution(agents, X);
  Document d;
  d.body["value"] = ext(r.value);
  d.body["sufficient_condition_met"] = r.sufficient_condition_met;
  if (!r.diagnostic.empty()) d.body["diagnostic"] = r.diagnostic;
  if (r.has_allocation) {
    json allocs = json::array();
    for (const RandomVariable& v : r.allocations) allocs.push_back(v.values());
    d.body["allocations"] = allocs;
  }
  if (f.oracle) {
    d.body["oracle"] =
        oracle_report(r.value, oracle::brute_comonotone(agents, X, grid_of(s, f)),
                      r.sufficient_condition_met ? Bound::OracleAbove : Bound::Unordered, "brute_comonotone");
  }
  if (f.format == "csv") {
    if (!r.has_allocation) throw ContractError("no allocation to print: value is " + r.value.to_string());
    d.csv = allocation_csv(r, s.space(), X, agent_labels(a));
  }
  return d;
}

Document cmd_curve(const Scenario& s, const Flags& f) {
  if (f.oracle) throw SchemaError("curve has no brute-force comparator");
  const json& c = field(s.doc(), "curve", "scenario");
  const DistortionCurve curve(Scenario::phi(field(c, "phi", "curve")), number(field(c, "delta", "curve"), "curve.delta"));
  const double res = c.contains("resolution") ? number(c.at("resolution"), "curve.resolution") : 1e-2;
  if (!(res > 0.0 && res <= 1.0)) throw DomainError("curve resolution must lie in (0, 1]");
  const long steps = std::lround(1.0 / res);
  if (steps < 1 || steps > 10'000'000) throw DomainError("curve resolution out of range");
  Document d;
  std::ostringstream csv;
  csv << "x,g\n";
  json rows = json::array();
  for (long k = 0; k <= steps; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(steps);
    const double g = curve(x);
    csv << shortest(x) << ',' << shortest(g) << '\n';
    rows.push_back({{"x", x}, {"g", g}});
  }
  d.body["phi"] = curve.phi().name();
  d.body["delta"] = curve.delta();
  d.body["threshold"] = curve.threshold();
  d.body["points"] = rows;
  if (f.format == "csv") d.csv = csv.str();
  return d;
}

/// Every key in "expect" must match the output exactly.
void check_expectations(const Scenario& s, const json& body) {
  if (!s.doc().contains("expect")) return;
  const json& e = s.doc().at("expect");
  if (!e.is_object()) throw SchemaError("expect must be an object");
  for (const auto& [key, want] : e.items()) {
    if (!body.contains(key)) throw ContractError("expected field '" + key + "' missing from output");
    if (body.at(key) != want) {
      throw ContractError("expectation mismatch for '" + key + "': got " + body.at(key).dump() + ", want " + want.dump());
    }
  }
}

void write_atomically(const std::string& path, const std::string& data) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw SchemaError("cannot open output path " + path);
    o << data;
    if (!o.flush()) throw SchemaError("cannot write output path " + path);
  }
  std::filesystem::rename(tmp, target);
}

RunResult failure(int code, const std::string& reason, const std::string& message) {
  RunResult r;
  r.exit_code = code;
  r.err = json{{"error", {{"reason", reason}, {"message", message}}}}.dump() + "\n";
  return r;
}

int exit_code_for(const Error& e) {
  const std::string reason = e.reason();
  if (reason == "contract") return kContract;
  if (reason == "numeric") return kNumeric;
  return kSchema;
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
  Flags f;
  CLI::App app{"Lambda value-at-risk under capacities: evaluation, robust bounds and risk sharing", "lvar"};
  app.add_option("command", f.command, "eval | robust | share | como_share | curve (default: scenario's command)")
      ->check(CLI::IsMember({"eval", "robust", "share", "como_share", "curve"}));
  app.add_option("--scenario", f.scenario, "Scenario JSON file")->required();
  app.add_option("--output", f.output, "Write the document to this path atomically instead of stdout");
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--oracle", f.oracle, "Also run the brute-force comparator");
  app.add_option("--grid-x", f.grid_x, "Oracle x-grid resolution")->check(CLI::PositiveNumber);
  app.add_option("--grid-y", f.grid_y, "Oracle and fallback y-grid resolution")->check(CLI::PositiveNumber);
  app.add_option("--samples", f.samples, "Sampled members for the robust oracle");
  app.add_option("--seed", f.seed, "Seed for the robust oracle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    RunResult r;
    r.out = app.help();
    return r;
  } catch (const CLI::ParseError& e) {
    return failure(kSchema, "usage", e.what());
  }

  try {
    std::ifstream in(f.scenario, std::ios::binary);
    if (!in) throw SchemaError("cannot read scenario " + f.scenario);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    const Scenario s(std::move(doc));
    const std::optional<std::string> declared = s.command();
    if (f.command.empty()) {
      if (!declared) throw SchemaError("no command given on the command line or in the scenario");
      f.command = *declared;
    } else if (declared && *declared != f.command) {
      throw SchemaError("command '" + f.command + "' does not match scenario command '" + *declared + "'");
    }

    Document d;
    if (f.command == "eval") {
      d = cmd_eval(s, f);
    } else if (f.command == "robust") {
      d = cmd_robust(s, f);
    } else if (f.command == "share") {
      d = cmd_share(s, f);
    } else if (f.command == "como_share") {
      d = cmd_como_share(s, f);
    } else if (f.command == "curve") {
      d = cmd_curve(s, f);
    } else {
      throw SchemaError("unknown command '" + f.command + "'");
    }
    if (f.format == "csv" && !d.csv) throw SchemaError("csv output is available for curve, share and como_share");
    json full = {{"command", f.command}, {"version", kSchemaVersion}};
    full.update(d.body);
    check_expectations(s, full);

    RunResult r;
    const std::string rendered = d.csv ? *d.csv : full.dump(2) + "\n";
    if (f.output.empty()) {
      r.out = rendered;
    } else {
      write_atomically(f.output, rendered);
    }
    return r;
  } catch (const Error& e) {
    return failure(exit_code_for(e), e.reason(), e.what());
  } catch (const json::exception& e) {
    return failure(kSchema, "schema", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return failure(kSchema, "io", e.what());
  }
}

}  // namespace lvar::cli
