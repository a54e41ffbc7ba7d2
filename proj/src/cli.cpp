//------------------------------------------------------------------------------
//
//   Copyright 2026 The anplane Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "anplane/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "anplane/critic_processes.hpp"
#include "anplane/curve_sweep.hpp"
#include "anplane/data_model.hpp"
#include "anplane/divergences.hpp"
#include "anplane/frontier.hpp"
#include "anplane/mqm.hpp"
#include "anplane/report.hpp"
#include "anplane/selfcheck.hpp"
#include "json.hpp"

namespace anplane {

namespace {

using json = nlohmann::json;

constexpr int kExitUsage    = 1;
constexpr int kExitData     = 2;
constexpr int kExitSelfFail = 3;

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string input;
  std::string out;
  std::string betas = "1e-4:1e4:log50";
  std::string ref_stats;
  std::string systems_filter;
  bool dominance = false;

  std::string instance;
  std::string divergence = "tv";
  std::size_t restarts   = 8;
  bool oracle            = false;
  std::size_t resolution = 100;

  std::string kind;
  std::size_t n_critics = 1000;
  double epsilon        = 0.5;
  std::string kernel;
  std::string link = "identity";

  std::string annotations;
  std::string schema = "ende";
  std::string weights;
  std::string roster;

  std::vector<std::string> curves;
  std::vector<std::string> system_csvs;
  std::vector<std::string> categories;
  std::string accuracy_label    = "accuracy";
  std::string naturalness_label = "mean NLL per token";

  std::optional<std::uint64_t> seed;
};

std::uint64_t resolve_seed(Options const &o)
{
  if (o.seed)
  {
    return *o.seed;
  }
  if (char const *env = std::getenv("AN_SEED"))
  {
    std::string const s = env;
    std::size_t used    = 0;
    unsigned long long v = 0;
    try
    {
      v = std::stoull(s, &used);
    }
    catch (std::exception const &)
    {
      used = 0;
    }
    if (used == 0 || used != s.size())
    {
      throw UsageError("AN_SEED must be a non-negative integer, got '" + s + "'");
    }
    return v;
  }
  return 0;
}

std::vector<std::string> split_commas(std::string const &s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
  {
    if (!tok.empty())
    {
      out.push_back(tok);
    }
  }
  return out;
}

std::vector<double> betas_of(Options const &o)
{
  try
  {
    return parse_beta_grid(o.betas);
  }
  catch (InvalidArgument const &e)
  {
    throw UsageError(e.what());
  }
}

// CSV or JSON results go to --out when given, else to stdout; the human
// summary then goes to whichever stream the data does not use.
void emit(Options const &o, std::string const &content, std::ostream &out)
{
  if (o.out.empty())
  {
    out << content;
  }
  else
  {
    report::write_file(o.out, content);
  }
}

std::ostream &info_stream(Options const &o, std::ostream &out, std::ostream &err)
{
  return o.out.empty() ? err : out;
}

json parse_json_file(std::string const &path)
{
  try
  {
    return json::parse(read_text_file(path));
  }
  catch (json::parse_error const &e)
  {
    throw DataError("'" + path + "': " + e.what());
  }
}

std::vector<double> numbers(json const &j, char const *key)
{
  if (!j.contains(key) || !j[key].is_array())
  {
    throw DataError(std::string("missing array '") + key + "'");
  }
  std::vector<double> v;
  for (auto const &e : j[key])
  {
    if (!e.is_number())
    {
      throw DataError(std::string("'") + key + "' must contain numbers");
    }
    v.push_back(e.get<double>());
  }
  return v;
}

Kernel kernel_from(json const &j, std::string const &override_preset)
{
  if (!override_preset.empty())
  {
    return Kernel::parse(override_preset);
  }
  if (!j.contains("kernel"))
  {
    return Kernel::indicator();
  }
  auto const &k = j["kernel"];
  if (k.is_string())
  {
    return Kernel::parse(k.get<std::string>());
  }
  if (!k.is_array())
  {
    throw DataError("'kernel' must be a preset string or a square table");
  }
  auto const n = static_cast<Eigen::Index>(k.size());
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    auto const &row = k[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
    {
      throw DataError("kernel table must be square");
    }
    for (Eigen::Index jx = 0; jx < n; ++jx)
    {
      t(i, jx) = row[static_cast<std::size_t>(jx)].get<double>();
    }
  }
  return Kernel::tabulated(std::move(t));
}

std::string dv_json(DivergenceValue const &v)
{
  json j;
  j["family"] = family_name(v.family);
  j["value"]  = v.value;
  if (v.root)
  {
    j["root"] = *v.root;
  }
  if (v.signed_value)
  {
    j["signed_value"] = *v.signed_value;
  }
  if (v.std_error)
  {
    j["std_error"] = *v.std_error;
  }
  j["comparable_across_systems"] = v.comparable_across_systems;
  return j.dump() + "\n";
}

std::vector<ScoredSample> load_scored(std::string const &path)
{
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t lineno = 0;
  std::vector<ScoredSample> out;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    std::string const where = "line " + std::to_string(lineno);
    json j;
    try
    {
      j = json::parse(line);
    }
    catch (json::parse_error const &)
    {
      throw DataError(where + ": invalid JSON");
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string() ||
        !j.contains("ref_logprob") || !j["ref_logprob"].is_number())
    {
      throw DataError(where + ": needs string 'text' and numeric 'ref_logprob'");
    }
    ScoredSample s;
    s.text        = j["text"].get<std::string>();
    s.ref_logprob = j["ref_logprob"].get<double>();
    if (j.contains("own_logprob"))
    {
      if (!j["own_logprob"].is_number())
      {
        throw DataError(where + ": 'own_logprob' must be a number");
      }
      s.own_logprob = j["own_logprob"].get<double>();
    }
    out.push_back(std::move(s));
  }
  return out;
}

FiniteDistribution dist_from(json const &j, char const *key)
{
  std::vector<double> probs = numbers(j, key);
  std::vector<std::string> labels;
  if (j.contains("labels") && j["labels"].is_array())
  {
    for (auto const &l : j["labels"])
    {
      labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    }
  }
  else
  {
    for (std::size_t i = 0; i < probs.size(); ++i)
    {
      labels.push_back(std::to_string(i));
    }
  }
  try
  {
    return FiniteDistribution(std::move(labels), std::move(probs), kIngestTolerance);
  }
  catch (std::invalid_argument const &e)
  {
    throw DataError(std::string("'") + key + "': " + e.what());
  }
}

int run_curve(Options const &o, std::ostream &out, std::ostream &err)
{
  auto const betas = betas_of(o);
  auto const file  = load_segment_file(o.input);
  auto const res   = sweep_curve(file.segments, betas);
  emit(o, report::curve_csv(res), out);
  info_stream(o, out, err) << "curve: " << res.points.size() << " betas over " << res.n_segments
                           << " segments\n";
  return 0;
}

int run_systems(Options const &o, std::ostream &out, std::ostream &err)
{
  auto const file = load_segment_file(o.input);
  auto const ref  = load_lpp_stats(o.ref_stats);
  std::optional<std::vector<std::string>> only;
  if (!o.systems_filter.empty())
  {
    only = split_commas(o.systems_filter);
  }
  auto const pts = system_points(file.segments, ref, only);
  if (pts.empty())
  {
    throw DataError("no candidate carries a system id");
  }
  emit(o, report::systems_csv(pts), out);
  auto &info = info_stream(o, out, err);
  for (auto const &p : pts)
  {
    if (p.n_excluded > 0)
    {
      info << "system " << p.system_id << ": " << p.n_excluded
           << " segments without a candidate excluded\n";
    }
  }
  if (o.dominance)
  {
    auto const sweep = sweep_curve(file.segments, betas_of(o));
    auto const rep   = dominance_check(sweep, pts);
    for (auto const &e : rep.entries)
    {
      info << "dominance " << e.system_id << ": "
           << (e.violation ? "VIOLATION" : "ok") << " margin "
           << report::format_number(e.certificate_margin) << " at beta "
           << report::format_number(e.worst_beta) << "\n";
    }
  }
  return 0;
}

int run_frontier(Options const &o, std::ostream &out, std::ostream &err)
{
  if (o.divergence != "tv" && o.divergence != "kl" && o.divergence != "d2")
  {
    throw UsageError("--divergence must be tv, kl or d2");
  }
  if (o.oracle && o.resolution < 1)
  {
    throw UsageError("--resolution must be >= 1");
  }
  std::vector<double> betas;
  if (!o.oracle)
  {
    betas = betas_of(o);
  }
  auto const bundle = load_joint_instance(o.instance);
  auto const div    = divergence_for(o.divergence, bundle);
  FrontierResult fr;
  if (o.oracle)
  {
    fr = brute_force_frontier(bundle.joint, bundle.delta, bundle.r_y, div, o.resolution);
  }
  else
  {
    ScalarizationOptions opt;
    opt.restarts = o.restarts;
    opt.seed     = resolve_seed(o);
    fr = scalarization_frontier(bundle.joint, bundle.delta, bundle.r_y, div, betas, opt);
  }
  emit(o, report::frontier_csv(fr), out);
  auto &info     = info_stream(o, out, err);
  double const t = o.oracle ? 3.0 / static_cast<double>(o.resolution) : 1e-6;
  auto const rep = verify_an_properties(fr, t);
  info << "frontier: " << fr.points.size() << " points, monotone " << (rep.monotone ? "yes" : "no")
       << ", concave " << (rep.concave ? "yes" : "no") << " (tol " << report::format_number(t)
       << ")\n";
  std::size_t unconverged = 0;
  for (auto const &s : fr.sweep)
  {
    unconverged += s.converged ? 0 : 1;
  }
  if (unconverged > 0)
  {
    info << "frontier: " << unconverged << " betas hit the iteration limit\n";
  }
  return 0;
}

int run_divergence(Options const &o, std::ostream &out, std::ostream &)
{
  std::uint64_t const seed = resolve_seed(o);
  std::string const &k     = o.kind;
  if (k == "tv" || k == "kl" || k == "d2")
  {
    auto const j = parse_json_file(o.input);
    auto const p = dist_from(j, "p");
    auto const q = dist_from(j, "q");
    if (k == "tv")
    {
      emit(o, dv_json(total_variation(p, q)), out);
    }
    else if (k == "kl")
    {
      emit(o, dv_json(kl_divergence(p, q)), out);
    }
    else
    {
      std::vector<double> pts;
      if (j.contains("points"))
      {
        pts = numbers(j, "points");
      }
      else
      {
        for (std::size_t i = 0; i < p.size(); ++i)
        {
          pts.push_back(static_cast<double>(i));
        }
      }
      auto const c = kernel_from(j, o.kernel).gram(pts);
      emit(o, dv_json(d2_exact(p, q, c)), out);
    }
    return 0;
  }
  if (k == "d2-ustat" || k == "mmd" || k == "d1" || k == "risk")
  {
    auto const j   = parse_json_file(o.input);
    auto const sq  = numbers(j, "samples_q");
    auto const sp  = numbers(j, "samples_p");
    Kernel const kern = kernel_from(j, o.kernel);
    if (k == "d2-ustat")
    {
      emit(o, dv_json(d2_ustat(sq, sp, kern)), out);
      return 0;
    }
    if (k == "mmd")
    {
      emit(o, dv_json(mmd_squared(sq, sp, kern)), out);
      return 0;
    }
    CriticProcess proc;
    proc.kernel = kern;
    proc.link   = parse_link(o.link);
    if (j.contains("mean") && j["mean"].is_number())
    {
      double const m = j["mean"].get<double>();
      proc.mean      = [m](double) { return m; };
    }
    auto const draw = gp_critic_draw(proc);
    if (k == "d1")
    {
      emit(o, dv_json(d1_monte_carlo(draw, sq, sp, o.n_critics, seed)), out);
      return 0;
    }
    auto const rep = classification_risk_check(o.epsilon, draw, sp, sq, o.n_critics, seed);
    json r;
    r["epsilon"]     = rep.epsilon;
    r["risk"]        = rep.risk;
    r["risk_se"]     = rep.risk_se;
    r["d1"]          = rep.d1;
    r["d1_se"]       = rep.d1_se;
    r["d_inf"]       = rep.d_inf;
    r["chain_holds"] = rep.chain_holds();
    emit(o, r.dump() + "\n", out);
    return 0;
  }
  if (k == "lpp")
  {
    if (o.ref_stats.empty())
    {
      throw UsageError("--kind lpp needs --ref-stats");
    }
    emit(o, dv_json(lpp_distance(load_lpp_stats(o.input), load_lpp_stats(o.ref_stats))), out);
    return 0;
  }
  if (k == "xent" || k == "kl-norm" || k == "zip")
  {
    auto const s = load_scored(o.input);
    DivergenceValue v = k == "xent"      ? cross_entropy_score(s)
                        : k == "kl-norm" ? kl_normalized_score(s)
                                         : zip_normalized_score(s);
    emit(o, dv_json(v), out);
    return 0;
  }
  throw UsageError("unknown --kind '" + k + "'");
}

int run_mqm(Options const &o, std::ostream &out, std::ostream &err)
{
  mqm::ErrorTaxonomy tax;
  try
  {
    tax = mqm::ErrorTaxonomy::from_spec(o.schema);
  }
  catch (InvalidArgument const &e)
  {
    throw UsageError(e.what());
  }
  auto const weights =
      o.weights.empty() ? mqm::SeverityWeights::defaults() : mqm::SeverityWeights::load(o.weights);
  auto const anns   = mqm::load_mqm_tsv(o.annotations);
  auto const roster = split_commas(o.roster);
  auto const adeq   = mqm::score_dimension(anns, tax, weights, mqm::Dimension::kAccuracy, roster);
  auto const flu    = mqm::score_dimension(anns, tax, weights, mqm::Dimension::kFluency, roster);

  std::string csv = "system,adequacy,fluency,n_pairs,n_adequacy_errors,n_fluency_errors\n";
  for (std::size_t i = 0; i < adeq.systems.size(); ++i)
  {
    auto const &a = adeq.systems[i];
    auto const &f = flu.systems[i];
    csv += a.system_id + "," + report::format_number(a.score) + "," +
           report::format_number(f.score) + "," + std::to_string(a.n_pairs) + "," +
           std::to_string(a.n_errors) + "," + std::to_string(f.n_errors) + "\n";
  }
  emit(o, csv, out);
  auto &info = info_stream(o, out, err);
  info << "schema: " << tax.schema_id() << "\n" << weights.describe();
  auto const parts = mqm::partition_counts(anns, tax);
  info << "annotations: " << anns.size() << " (accuracy " << parts.accuracy << ", fluency "
       << parts.fluency << ", ignored " << parts.ignored << ")\n";
  if (!adeq.unknown.empty())
  {
    err << "warning: " << adeq.unknown.size() << " unknown categories routed to other:\n";
    for (auto const &[cat, n] : adeq.unknown)
    {
      err << "  " << cat << ": " << n << "\n";
    }
  }
  return 0;
}

int run_plot(Options const &o, std::ostream &, std::ostream &)
{
  report::PlotSpec spec;
  for (auto const &c : o.curves)
  {
    spec.curves.emplace_back(c);
  }
  for (auto const &s : o.system_csvs)
  {
    spec.systems.emplace_back(s);
  }
  if (spec.curves.empty() && spec.systems.empty())
  {
    throw UsageError("plot needs at least one --curve or --systems input");
  }
  for (auto const &c : o.categories)
  {
    auto const eq = c.find('=');
    if (eq == std::string::npos || eq == 0)
    {
      throw UsageError("--category expects SYSTEM=CLASS, got '" + c + "'");
    }
    try
    {
      spec.categories[c.substr(0, eq)] = report::parse_marker_class(c.substr(eq + 1));
    }
    catch (InvalidArgument const &e)
    {
      throw UsageError(std::string("--category: ") + e.what());
    }
  }
  spec.accuracy_label    = o.accuracy_label;
  spec.naturalness_label = o.naturalness_label;
  spec.output            = o.out;
  report::emit_plane_svg(spec);
  return 0;
}

int run_selfcheck_cmd(Options const &o, std::ostream &out, std::ostream &)
{
  auto const results = run_selfcheck(resolve_seed(o));
  bool ok            = true;
  for (auto const &r : results)
  {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty())
    {
      out << "  " << r.detail;
    }
    out << "\n";
    ok = ok && r.passed;
  }
  out << (ok ? "selfcheck passed\n" : "selfcheck FAILED\n");
  return ok ? 0 : kExitSelfFail;
}

}  // namespace

int cli_dispatch(int argc, char const *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Accuracy-naturalness plane tools", "an"};
  app.require_subcommand(1);
  app.fallthrough(false);
  Options o;

  auto add_seed = [&o](CLI::App *sub) {
    sub->add_option("--seed", o.seed, "Random seed (falls back to AN_SEED, then 0)");
  };

  auto *curve = app.add_subcommand("curve", "Oracle accuracy-naturalness curve from candidate pools");
  curve->add_option("--input", o.input, "Segment file (JSONL)")->required();
  curve->add_option("--betas", o.betas, "Beta grid, LO:HI:logN or a list")->capture_default_str();
  curve->add_option("--out", o.out, "Output CSV (default stdout)");

  auto *systems = app.add_subcommand("systems", "Place systems on the plane");
  systems->add_option("--input", o.input, "Segment file (JSONL)")->required();
  systems->add_option("--ref-stats", o.ref_stats, "Reference LPP statistics")->required();
  systems->add_option("--systems", o.systems_filter, "Comma-separated subset of system ids");
  systems->add_flag("--dominance", o.dominance, "Also check the systems against the oracle curve");
  systems->add_option("--betas", o.betas, "Beta grid for --dominance")->capture_default_str();
  systems->add_option("--out", o.out, "Output CSV (default stdout)");

  auto *frontier = app.add_subcommand("frontier", "Exact frontier of a small synthetic instance");
  frontier->add_option("--instance", o.instance, "Instance file (JSON)")->required();
  frontier->add_option("--divergence", o.divergence, "tv, kl or d2")
      ->check(CLI::IsMember({"tv", "kl", "d2"}))
      ->capture_default_str();
  frontier->add_option("--betas", o.betas, "Beta grid")->capture_default_str();
  frontier->add_option("--restarts", o.restarts, "Random restarts per beta")->capture_default_str();
  frontier->add_flag("--oracle", o.oracle, "Brute-force grid search instead of scalarization");
  frontier->add_option("--resolution", o.resolution, "Grid subdivisions per row")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  frontier->add_option("--out", o.out, "Output CSV (default stdout)");
  add_seed(frontier);

  auto *divergence = app.add_subcommand("divergence", "Distances between output distributions");
  divergence->add_option("--kind", o.kind, "tv|kl|d2|d2-ustat|mmd|d1|risk|lpp|xent|kl-norm|zip")
      ->required()
      ->check(CLI::IsMember(
          {"tv", "kl", "d2", "d2-ustat", "mmd", "d1", "risk", "lpp", "xent", "kl-norm", "zip"}));
  divergence->add_option("--input", o.input, "Input file")->required();
  divergence->add_option("--ref-stats", o.ref_stats, "Reference LPP statistics (lpp)");
  divergence->add_option("--kernel", o.kernel, "Kernel preset overriding the input file");
  divergence->add_option("--link", o.link, "identity, log or probit")
      ->check(CLI::IsMember({"identity", "log", "probit"}))
      ->capture_default_str();
  divergence->add_option("--n-critics", o.n_critics, "Sampled critics (d1, risk)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  divergence->add_option("--epsilon", o.epsilon, "Class prior (risk)")->capture_default_str();
  divergence->add_option("--out", o.out, "Output file (default stdout)");
  add_seed(divergence);

  auto *mqm_cmd = app.add_subcommand("mqm", "Adequacy and fluency scores from MQM annotations");
  mqm_cmd->add_option("--annotations", o.annotations, "MQM TSV file")->required();
  mqm_cmd->add_option("--schema", o.schema, "ende, enes or custom:FILE")->capture_default_str();
  mqm_cmd->add_option("--weights", o.weights, "Severity weights JSON (default built-in table)");
  mqm_cmd->add_option("--roster", o.roster, "Comma-separated systems to report even if unannotated");
  mqm_cmd->add_option("--out", o.out, "Output CSV (default stdout)");

  auto *plot = app.add_subcommand("plot", "Render curves and systems as SVG");
  plot->add_option("--curve", o.curves, "Curve CSV (repeatable)");
  plot->add_option("--systems", o.system_csvs, "Systems CSV (repeatable)");
  plot->add_option("--category", o.categories, "SYSTEM=llm|mt|online|human|other (repeatable)");
  plot->add_option("--accuracy-label", o.accuracy_label, "Accuracy axis title")->capture_default_str();
  plot->add_option("--naturalness-label", o.naturalness_label, "Naturalness axis title")
      ->capture_default_str();
  plot->add_option("--out", o.out, "Output SVG")->required();

  auto *selfcheck = app.add_subcommand("selfcheck", "Run the built-in property checks");
  add_seed(selfcheck);

  if (argc > 1 && argv[1][0] != '-')
  {
    bool known = false;
    for (auto const *sub : app.get_subcommands([](CLI::App *) { return true; }))
    {
      known = known || sub->get_name() == argv[1];
    }
    if (!known)
    {
      err << "error: unknown subcommand '" << argv[1] << "'\n" << app.help();
      return kExitUsage;
    }
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e, out, err);
  }
  catch (CLI::CallForAllHelp const &e)
  {
    return app.exit(e, out, err);
  }
  catch (CLI::ParseError const &e)
  {
    err << "error: " << e.what() << "\n";
    if (app.get_subcommands().empty())
    {
      err << app.help();
    }
    else
    {
      err << "run with --help for usage\n";
    }
    return kExitUsage;
  }

  try
  {
    if (curve->parsed())
    {
      return run_curve(o, out, err);
    }
    if (systems->parsed())
    {
      return run_systems(o, out, err);
    }
    if (frontier->parsed())
    {
      return run_frontier(o, out, err);
    }
    if (divergence->parsed())
    {
      return run_divergence(o, out, err);
    }
    if (mqm_cmd->parsed())
    {
      return run_mqm(o, out, err);
    }
    if (plot->parsed())
    {
      return run_plot(o, out, err);
    }
    if (selfcheck->parsed())
    {
      return run_selfcheck_cmd(o, out, err);
    }
  }
  catch (UsageError const &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

int cli_dispatch(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  std::vector<char const *> argv;
  argv.push_back("an");
  for (auto const &a : args)
  {
    argv.push_back(a.c_str());
  }
  return cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace anplane
