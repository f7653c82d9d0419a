/*
 * Copyright 2026 The bosonwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "bosonwalk/control.hpp"
#include "bosonwalk/controllability.hpp"
#include "bosonwalk/sampling.hpp"
#include "output.hpp"

namespace bosonwalk::cli {
namespace {

/// Reader over the top-level document with the keys load_config handled
/// already marked as read.
ObjectReader root_reader(const ExperimentConfig& cfg) {
  ObjectReader r(cfg.document, "config");
  for (const char* key : {"command", "seed", "out", "format"}) r.raw(key);
  return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json header_json(const ExperimentConfig& cfg) {
  return Json{{"config_hash", cfg.hash}, {"seed", cfg.seed}, {"command", cfg.command}};
}

const LatticeModel& controllable(const ModelSpec& spec, const std::string& what) {
  if (spec.family != "spinor" && spec.family != "microscope") {
    throw UsageError(what + " needs a spinor or microscope model, got '" + spec.family + "'");
  }
  return *spec.lattice;
}

GrapeConfig parse_grape_config(ObjectReader r) {
  GrapeConfig c;
  c.max_iterations = r.get("max_iterations", c.max_iterations);
  c.initial_step = r.get("initial_step", c.initial_step);
  c.backtracking = r.get("backtracking", c.backtracking);
  c.armijo = r.get("armijo", c.armijo);
  c.max_backtracks = r.get("max_backtracks", c.max_backtracks);
  c.memory = r.get("memory", c.memory);
  if (const auto g = r.optional<std::string>("gradient")) {
    try {
      c.gradient = parse_gradient_method(*g);
    } catch (const Error& e) {
      throw UsageError(r.path() + ".gradient: " + e.what());
    }
  }
  c.target_infidelity = r.get("target_infidelity", c.target_infidelity);
  c.gradient_tolerance = r.get("gradient_tolerance", c.gradient_tolerance);
  c.convergence_threshold = r.get("convergence_threshold", c.convergence_threshold);
  c.stall_iterations = r.get("stall_iterations", c.stall_iterations);
  c.initial_levels = r.get("initial_levels", c.initial_levels);
  c.perturbation = r.get("perturbation", c.perturbation);
  if (const auto s = r.optional<Index>("steps")) c.steps = *s;
  if (const auto dt = r.optional<double>("dt")) c.dt = *dt;
  r.finish();
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(r.path() + ": " + e.what());
  }
  return c;
}

GrapeConfig grape_config_from(ObjectReader& root) {
  if (!root.has("grape")) return GrapeConfig{};
  return parse_grape_config(root.child("grape"));
}

ControlWaveform read_waveform(const Json& j, const LatticeModel& model, const std::string& path) {
  const std::vector<std::string> channels = control_channels(model);
  if (j.is_string()) {
    ControlWaveform wf = parse_waveform_csv(read_file(j.get<std::string>()));
    if (wf.channels() != channels) throw UsageError(path + ": waveform CSV channels do not match the model");
    return wf;
  }
  return parse_waveform_json(j, channels, path);
}

}  // namespace

int cmd_fig1(const ExperimentConfig& cfg, Io& io) {
  ObjectReader r = root_reader(cfg);
  UniformRing ring;
  ring.sites = r.get<Index>("sites", 500);
  ring.hopping = r.get<double>("hopping", 1.0);
  const double time = r.get<double>("time", 80.0 / ring.hopping);
  const std::vector<double> epsilons = r.get<std::vector<double>>("epsilons", {1e-2, 1e-3, 1e-4});
  const std::string norm_name = r.get<std::string>("norm", "max");
  r.finish();
  if (!(time >= 0.0) || !std::isfinite(time)) throw UsageError("config.time must be finite and >= 0");
  if (norm_name != "max" && norm_name != "frobenius") throw UsageError("config.norm must be max or frobenius");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw UsageError("config.epsilons must be positive");
  }
  try {
    ring.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }

  const Index m = ring.sites;
  const ComplexVector g = ring_propagator_offsets(ring, time);
  std::vector<Index> offsets;
  std::vector<double> probs;
  for (Index delta = m / 2 - m + 1; delta <= m / 2; ++delta) {
    // Lambda_{l, l'} with l - l' = delta is g at column offset -delta.
    offsets.push_back(delta);
    probs.push_back(std::norm(g[((-delta) % m + m) % m]));
  }

  const UnitaryMatrix lambda = ring_propagator(ring, time);
  const MatrixNorm norm = norm_name == "max" ? MatrixNorm::kMax : MatrixNorm::kFrobenius;
  std::vector<BandSpec> bands;
  for (double e : epsilons) bands.push_back(band_truncate(lambda.matrix(), e, norm).spec);

  if (cfg.format == OutputFormat::kJson) {
    Json j = header_json(cfg);
    j["sites"] = m;
    j["hopping"] = ring.hopping;
    j["time"] = time;
    j["profile"] = Json{{"offset", offsets}, {"probability", probs}};
    Json b = Json::array();
    for (const auto& s : bands) {
      b.push_back(Json{{"epsilon", s.epsilon}, {"lower", s.lower}, {"upper", s.upper},
                       {"band", s.band}, {"cyclic", s.cyclic}});
    }
    j["bands"] = b;
    emit(cfg.out, dump(j), io.out);
    return kExitOk;
  }

  CsvWriter profile(cfg, {"offset", "probability"});
  for (std::size_t i = 0; i < offsets.size(); ++i) profile.cell(offsets[i]).cell(probs[i]).end_row();
  CsvWriter band_csv(cfg, {"epsilon", "lower", "upper", "band", "cyclic"});
  for (const auto& s : bands) band_csv.cell(s.epsilon).cell(s.lower).cell(s.upper).cell(s.band).cell(s.cyclic).end_row();
  emit(cfg.out, profile.str(), io.out);
  if (const auto path = sibling(cfg.out, ".bands.csv")) {
    emit(path, band_csv.str(), io.out);
  } else {
    io.out << band_csv.str();
  }
  return kExitOk;
}

int cmd_sample(const ExperimentConfig& cfg, Io& io) {
  ObjectReader r = root_reader(cfg);
  const ModelSpec spec = parse_model(r.child("model"));
  const FockState n_in = [&] {
    const std::string s = r.required<std::string>("input");
    try {
      return FockState::parse(s);
    } catch (const Error& e) {
      throw UsageError(std::string("config.input: ") + e.what());
    }
  }();
  const auto k = r.get<std::size_t>("samples", 0);
  const bool with_distribution = r.get<bool>("distribution", true);
  const std::optional<double> band_epsilon = r.optional<double>("band_epsilon");

  ComplexMatrix lambda;
  if (spec.matrix) {
    lambda = spec.matrix->matrix();
  } else if (spec.family == "ring") {
    const double t = r.required<double>("time");
    if (!(t >= 0.0)) throw UsageError("config.time must be >= 0");
    lambda = ring_propagator(std::get<UniformRing>(*spec.lattice), t).matrix();
  } else {
    const Json* w = r.raw("waveform");
    if (!w) throw UsageError("config: " + spec.family + " models need a 'waveform'");
    lambda = propagate(*spec.lattice, read_waveform(*w, *spec.lattice, "config.waveform")).matrix();
  }
  r.finish();
  if (n_in.modes() != lambda.rows()) {
    throw UsageError("config.input has " + std::to_string(n_in.modes()) + " modes but the model has " +
                     std::to_string(lambda.rows()));
  }

  std::string extra;
  std::optional<FockDistribution> dist;
  Json band_json;
  if (band_epsilon) {
    const BandTruncation t = band_truncate(lambda, *band_epsilon);
    RenormalizedDistribution rd = renormalized_distribution(t.truncated, n_in);
    extra = "band_epsilon=" + format_number(*band_epsilon) + " band=" + std::to_string(t.spec.band) +
            " raw_mass=" + format_number(rd.raw_mass);
    band_json = Json{{"epsilon", *band_epsilon}, {"lower", t.spec.lower}, {"upper", t.spec.upper},
                     {"band", t.spec.band}, {"cyclic", t.spec.cyclic}, {"raw_mass", rd.raw_mass}};
    dist.emplace(std::move(rd.distribution));
  } else {
    dist.emplace(exact_distribution(UnitaryMatrix(lambda, kReconstructionTolerance), n_in));
  }

  Rng rng(cfg.seed);
  const std::vector<std::size_t> draws = sample_indices(*dist, k, rng);

  if (cfg.format == OutputFormat::kJson) {
    Json j = header_json(cfg);
    j["modes"] = dist->modes();
    j["particles"] = dist->particles();
    j["input"] = n_in.to_string();
    if (!band_json.is_null()) j["band"] = band_json;
    if (with_distribution) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < dist->size(); ++i) {
        rows.push_back(Json{{"state", dist->basis()[i].to_string()}, {"probability", dist->probabilities()[i]}});
      }
      j["distribution"] = rows;
    }
    Json samples = Json::array();
    for (std::size_t i : draws) samples.push_back(dist->basis()[i].to_string());
    j["samples"] = samples;
    emit(cfg.out, dump(j), io.out);
    return kExitOk;
  }

  CsvWriter csv(cfg, {"kind", "index", "state", "probability"}, extra);
  if (with_distribution) {
    for (std::size_t i = 0; i < dist->size(); ++i) {
      csv.cell(std::string("exact")).cell(static_cast<long long>(i)).cell(dist->basis()[i].to_string());
      csv.cell(dist->probabilities()[i]).end_row();
    }
  }
  for (std::size_t s = 0; s < draws.size(); ++s) {
    const std::size_t i = draws[s];
    csv.cell(std::string("sample")).cell(static_cast<long long>(s)).cell(dist->basis()[i].to_string());
    csv.cell(dist->probabilities()[i]).end_row();
  }
  emit(cfg.out, csv.str(), io.out);
  return kExitOk;
}

int cmd_grape(const ExperimentConfig& cfg, Io& io) {
  ObjectReader r = root_reader(cfg);
  const ModelSpec spec = parse_model(r.child("model"));
  const LatticeModel& model = controllable(spec, "grape");
  const Index d = spec.dim();

  std::uint64_t target_seed = cfg.seed;
  std::optional<UnitaryMatrix> explicit_target;
  if (r.has("target")) {
    ObjectReader t = r.child("target");
    target_seed = t.get<std::uint64_t>("haar_seed", cfg.seed);
    if (const Json* e = t.raw("entries")) {
      try {
        explicit_target.emplace(parse_complex_matrix(*e, "config.target.entries"));
      } catch (const UsageError&) {
        throw;
      } catch (const Error& err) {
        throw UsageError(std::string("config.target.entries: ") + err.what());
      }
    }
    t.finish();
  }
  GrapeConfig gc = grape_config_from(r);
  gc.seed = derive_seed(cfg.seed, 0x67726170ull, 0);
  std::optional<ControlWaveform> initial;
  if (const Json* w = r.raw("initial_waveform")) initial = read_waveform(*w, model, "config.initial_waveform");
  r.finish();

  const UnitaryMatrix target = explicit_target ? *explicit_target : haar_unitary(d, RngSeed{target_seed});
  if (target.dim() != d) throw UsageError("config.target has the wrong dimension");

  const GrapeResult result = initial ? grape_optimize(model, target, gc, *initial)
                                     : grape_optimize(model, target, gc);

  Json j = header_json(cfg);
  j["family"] = spec.family;
  j["dim"] = d;
  if (!explicit_target) j["target_seed"] = target_seed;
  j["gradient"] = std::string(to_string(gc.gradient));
  j["target_infidelity"] = gc.target_infidelity;
  j["result"] = grape_result_json(result);
  const std::string wf_csv = waveform_csv(cfg, result.waveform);

  if (cfg.format == OutputFormat::kJson) {
    emit(cfg.out, dump(j), io.out);
    if (const auto path = sibling(cfg.out, ".waveform.csv")) emit(path, wf_csv, io.out);
  } else {
    emit(cfg.out, wf_csv, io.out);
    if (const auto path = sibling(cfg.out, ".result.json")) emit(path, dump(j), io.out);
  }

  if (!result.converged()) {
    io.err << "warning: grape stopped (" << to_string(result.reason) << ") at infidelity "
           << format_number(result.infidelity) << " above target " << format_number(gc.target_infidelity)
           << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_scan(const ExperimentConfig& cfg, Io& io) {
  ObjectReader r = root_reader(cfg);
  ControlFamily family;
  try {
    family = parse_control_family(r.required<std::string>("family"));
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("config.family: ") + e.what());
  }
  const std::vector<Index> dims = r.required<std::vector<Index>>("dims");
  const int targets = r.get<int>("targets_per_dim", 1);
  ScanOptions options;
  options.seed = cfg.seed;
  options.time_budget_seconds = r.get<double>("time_budget_seconds", options.time_budget_seconds);
  options.threads = r.get<unsigned>("threads", options.threads);
  GrapeConfig gc = grape_config_from(r);
  r.finish();
  if (dims.empty()) throw UsageError("config.dims must be nonempty");
  if (targets < 1) throw UsageError("config.targets_per_dim must be >= 1");
  for (Index d : dims) {
    try {
      model_for_dimension(family, d);
    } catch (const Error& e) {
      throw UsageError(std::string("config.dims: ") + e.what());
    }
  }

  const ScanTable table = infidelity_scan(family, dims, targets, gc, options);

  if (cfg.format == OutputFormat::kJson) {
    Json j = header_json(cfg);
    j["family"] = std::string(to_string(family));
    j["partial"] = table.partial;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      rows.push_back(Json{{"dim", row.dim}, {"targets", targets}, {"completed", row.completed},
                          {"mean", row.mean}, {"median", row.median}, {"min", row.min},
                          {"max", row.max}, {"stddev", row.stddev}});
    }
    j["rows"] = rows;
    Json entries = Json::array();
    for (const auto& e : table.entries) {
      entries.push_back(Json{{"dim", e.dim}, {"target", e.target}, {"target_seed", e.target_seed},
                             {"completed", e.completed}, {"infidelity", e.infidelity},
                             {"iterations", e.iterations}, {"stop_reason", std::string(to_string(e.reason))}});
    }
    j["entries"] = entries;
    emit(cfg.out, dump(j), io.out);
  } else {
    CsvWriter csv(cfg, {"dim", "targets", "completed", "mean", "median", "min", "max", "stddev"},
                  "family=" + std::string(to_string(family)));
    for (const auto& row : table.rows) {
      csv.cell(row.dim).cell(targets).cell(row.completed).cell(row.mean).cell(row.median);
      csv.cell(row.min).cell(row.max).cell(row.stddev).end_row();
    }
    emit(cfg.out, csv.str(), io.out);
  }
  if (table.partial) {
    io.err << "warning: scan time budget exhausted; results are partial\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_closure(const ExperimentConfig& cfg, Io& io) {
  ObjectReader r = root_reader(cfg);
  const ModelSpec spec = parse_model(r.child("model"));
  const LatticeModel& model = controllable(spec, "closure");
  ControlGrid grid = canonical_grid(model);
  if (const Json* g = r.raw("grid")) {
    try {
      grid = g->get<ControlGrid>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError("config.grid must be an array of control vectors");
    }
  }
  const Index max_dim = r.get<Index>("max_dim", kClosureDimLimit);
  const Index sites = std::holds_alternative<SpinorLatticeModel>(model)
                          ? std::get<SpinorLatticeModel>(model).sites
                          : std::get<GasMicroscopeModel>(model).sites;
  const Index identity_sites = r.get<Index>("identities", sites);
  r.finish();

  GeneratorSet gens;
  try {
    gens = sample_generators(model, grid);
  } catch (const Error& e) {
    throw UsageError(std::string("config.grid: ") + e.what());
  }
  const ClosureResult closure = lie_closure_dimension(gens, max_dim);
  std::optional<IdentityReport> report;
  if (identity_sites >= 2 && identity_sites <= 6) report = verify_appendix_identities(identity_sites);

  if (cfg.format == OutputFormat::kJson) {
    Json j = header_json(cfg);
    j["family"] = spec.family;
    j["dim"] = spec.dim();
    j["generators"] = gens.labels();
    j["round_dimensions"] = closure.round_dimensions;
    j["dimension"] = closure.dimension;
    j["saturated"] = closure.saturated;
    j["contains_identity"] = closure.contains_identity;
    j["hit_max_dim"] = closure.hit_max_dim;
    if (report) {
      Json checks = Json::array();
      for (const auto& c : report->checks) {
        checks.push_back(Json{{"name", c.name}, {"claimed", c.claimed}, {"residual", c.residual},
                              {"constant", {c.constant.real(), c.constant.imag()}}, {"passed", c.passed}});
      }
      j["identities"] = Json{{"sites", report->sites}, {"tolerance", report->tolerance},
                             {"all_passed", report->all_passed()}, {"checks", checks}};
    }
    emit(cfg.out, dump(j), io.out);
  } else {
    CsvWriter csv(cfg, {"round", "dimension"},
                  "dimension=" + std::to_string(closure.dimension) +
                      " saturated=" + (closure.saturated ? "true" : "false"));
    for (std::size_t i = 0; i < closure.round_dimensions.size(); ++i) {
      csv.cell(static_cast<long long>(i)).cell(closure.round_dimensions[i]).end_row();
    }
    emit(cfg.out, csv.str(), io.out);
    if (report) {
      CsvWriter ids(cfg, {"name", "claimed", "residual", "constant_re", "constant_im", "passed"});
      for (const auto& c : report->checks) {
        ids.cell(c.name).cell(c.claimed).cell(c.residual).cell(c.constant.real());
        ids.cell(c.constant.imag()).cell(c.passed).end_row();
      }
      if (const auto path = sibling(cfg.out, ".identities.csv")) {
        emit(path, ids.str(), io.out);
      } else {
        io.out << ids.str();
      }
    }
  }
  if (closure.hit_max_dim) {
    io.err << "warning: closure stopped at max_dim = " << max_dim << "; dimension is a lower bound\n";
    return kExitBudget;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using Command = int (*)(const ExperimentConfig&, Io&);
  struct Entry {
    const char* name;
    const char* help;
    Command run;
    OutputFormat format;
  };
  static const Entry commands[] = {
      {"fig1", "ring walk profile and band report", cmd_fig1, OutputFormat::kCsv},
      {"sample", "output distribution and samples", cmd_sample, OutputFormat::kCsv},
      {"grape", "optimize a control waveform", cmd_grape, OutputFormat::kJson},
      {"scan", "infidelity versus dimension", cmd_scan, OutputFormat::kCsv},
      {"closure", "Lie-algebra closure and identity checks", cmd_closure, OutputFormat::kJson},
  };

  CLI::App app{"bosonwalk: boson sampling on controlled lattices"};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "override config seed");
    sub->add_option("--out", out_path, "output path ('-' for stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    subs[c.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& c : commands) {
    CLI::App* sub = subs[c.name];
    if (!sub->parsed()) continue;
    Overrides o;
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--out")) o.out = out_path;
    if (sub->count("--format")) o.format = format;
    Io io{out, err};
    try {
      const ExperimentConfig cfg = load_config(c.name, read_file(config_path), o, c.format);
      return c.run(cfg, io);
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace bosonwalk::cli
