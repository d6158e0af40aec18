// silgan: template-driven stimulus generation for software-in-the-loop
// testing. Subcommands cover the full pipeline: synthetic data, template
// extraction, model training, translation/expansion/scenario generation,
// coverage-driven latent search, cycle-SSIM evaluation and SVG plotting.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 search timeout.
// The environment variable SILGAN_SEED overrides every --seed flag so CI can
// pin determinism externally. Each subcommand writes a JSON run manifest of
// its resolved arguments; re-running with those values reproduces all
// numeric artifacts bit-exactly (wall-clock columns excluded).

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "silgan/coverage_dsl.hpp"
#include "silgan/generation.hpp"
#include "silgan/latent_search.hpp"
#include "silgan/model_core.hpp"
#include "silgan/sild_io.hpp"
#include "silgan/svg_plot.hpp"
#include "silgan/synth_data.hpp"
#include "silgan/template_extract.hpp"
#include "silgan/training.hpp"

namespace {

using nlohmann::json;
using namespace silgan;

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("SILGAN_SEED");
  if (env == nullptr || *env == '\0') return flag_seed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw config_error(std::string("SILGAN_SEED is not an unsigned integer: '") +
                       env + "'");
  return static_cast<std::uint64_t>(v);
}

std::string manifest_path(const std::string& explicit_path, const std::string& out) {
  return explicit_path.empty() ? out + ".run.json" : explicit_path;
}

void write_manifest(const std::string& path, const std::string& subcommand,
                    const json& args) {
  json j;
  j["subcommand"] = subcommand;
  j["args"] = args;
  io::write_file(path, j.dump(2) + "\n");
}

/// SILT and JSON template files are both accepted wherever templates go in.
std::vector<Template> load_templates_any(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return io::load_templates_json(path);
  return io::load_templates(path);
}

Template pick_template(const std::string& path, std::size_t index) {
  std::vector<Template> all = load_templates_any(path);
  if (index >= all.size())
    throw param_error("template index " + std::to_string(index) +
                      " out of range; file holds " + std::to_string(all.size()));
  return all[index];
}

plot::Series channel_series(const Maneuver& m, std::size_t c, const std::string& label,
                            bool dashed = false) {
  std::span<const float> ch = m.channel(c);
  plot::Series s;
  s.label = label;
  s.values.assign(ch.begin(), ch.end());
  s.dashed = dashed;
  return s;
}

void plot_maneuver(const std::string& path, const Maneuver& m, const Template* overlay,
                   const std::string& title) {
  std::vector<plot::Series> series;
  for (std::size_t c = 0; c < m.channels; ++c)
    series.push_back(channel_series(m, c, m.signal_names[c]));
  if (overlay != nullptr) {
    plot::Series t;
    t.label = "template (" + kSignalNames[overlay->signal_index] + ")";
    t.values = overlay->values;
    t.color = "#333333";
    t.dashed = true;
    series.push_back(t);
  }
  plot::write_svg(path, series, title);
}

sim::SimConfig sim_config_from_json(const std::string& path) {
  sim::SimConfig cfg = sim::SimConfig::defaults();
  json j = json::parse(io::read_file(path));
  if (j.contains("n_gears")) cfg.n_gears = j["n_gears"].get<std::uint32_t>();
  if (j.contains("idle_frac")) cfg.idle_frac = j["idle_frac"].get<double>();
  if (j.contains("accel_limit")) cfg.accel_limit = j["accel_limit"].get<double>();
  if (j.contains("decel_limit")) cfg.decel_limit = j["decel_limit"].get<double>();
  if (j.contains("engine_gain")) cfg.engine_gain = j["engine_gain"].get<double>();
  if (j.contains("engine_noise")) cfg.engine_noise = j["engine_noise"].get<double>();
  if (j.contains("min_segment_s")) cfg.min_segment_s = j["min_segment_s"].get<std::uint32_t>();
  if (j.contains("max_segment_s")) cfg.max_segment_s = j["max_segment_s"].get<std::uint32_t>();
  if (j.contains("segment_mix")) {
    const json& m = j["segment_mix"];
    if (m.contains("stop")) cfg.segment_mix.stop = m["stop"].get<double>();
    if (m.contains("accelerate")) cfg.segment_mix.accelerate = m["accelerate"].get<double>();
    if (m.contains("cruise")) cfg.segment_mix.cruise = m["cruise"].get<double>();
    if (m.contains("decelerate")) cfg.segment_mix.decelerate = m["decelerate"].get<double>();
  }
  if (j.contains("shift_up_speeds"))
    cfg.shift_up_speeds = j["shift_up_speeds"].get<std::vector<double>>();
  if (j.contains("shift_down_speeds"))
    cfg.shift_down_speeds = j["shift_down_speeds"].get<std::vector<double>>();
  return cfg;
}

// -- subcommand option bags ---------------------------------------------------

struct SynthOpts {
  std::uint32_t count = 8;
  std::uint32_t length = 512;
  std::uint64_t seed = 0;
  std::string out, config, manifest;
};

struct ExtractOpts {
  std::string in, out, manifest;
  templates::ExtractParams params;
};

struct ModelOpts {
  std::string preset = "full";
  std::int64_t channels = -1, n = -1, m = -1, depth = -1, base_width = -1;
  std::int64_t kernel = -1, style_dim = -1, expansion_dim = -1, stack_rows = -1;

  model::ModelConfig resolve() const {
    model::ModelConfig cfg;
    if (preset == "full") cfg = model::ModelConfig::defaults();
    else if (preset == "desk") cfg = model::ModelConfig::desk();
    else if (preset == "tiny") cfg = model::ModelConfig::tiny();
    else throw config_error("unknown model preset '" + preset + "'");
    if (channels >= 0) cfg.channels = channels;
    if (n >= 0) cfg.n = n;
    if (m >= 0) cfg.m = m;
    if (depth >= 0) cfg.depth = depth;
    if (base_width >= 0) cfg.base_width = base_width;
    if (kernel >= 0) cfg.kernel = kernel;
    if (style_dim >= 0) cfg.style_dim = style_dim;
    if (expansion_dim >= 0) cfg.expansion_dim = expansion_dim;
    if (stack_rows >= 0) cfg.stack_rows = stack_rows;
    return cfg;
  }

  json to_json(const model::ModelConfig& cfg) const {
    return json{{"channels", cfg.channels},
                {"n", cfg.n},
                {"m", cfg.m},
                {"depth", cfg.depth},
                {"base-width", cfg.base_width},
                {"kernel", cfg.kernel},
                {"style-dim", cfg.style_dim},
                {"expansion-dim", cfg.expansion_dim},
                {"stack-rows", cfg.stack_rows}};
  }
};

struct TrainOpts {
  std::string data, long_data, out, metrics, manifest;
  ModelOpts model;
  train::TrainConfig cfg;
  templates::ExtractParams extract;
};

struct TranslateOpts {
  std::string checkpoint, template_path, out, plot, manifest;
  std::size_t index = 0;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
};

struct ExpandOpts {
  std::string checkpoint, in, out, plot, manifest;
  std::size_t index = 0;
  std::string p = "center";
  std::uint64_t seed = 0;
};

struct ComposeOpts {
  std::string checkpoint, scenario, out, plot, trace, manifest;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
};

struct AutomateOpts {
  std::string checkpoint, scenario, predicate, out, maneuver_out, manifest;
  search::SearchParams params;
};

struct EvalOpts {
  std::string checkpoint, templates, out, manifest;
  std::size_t samples = 4;
  std::uint64_t seed = 0;
};

struct PlotOpts {
  std::string in, template_path, out;
  std::size_t index = 0;
  std::size_t template_index = 0;
};

// -- subcommand bodies --------------------------------------------------------

int cmd_synth(const SynthOpts& o) {
  sim::SimConfig cfg =
      o.config.empty() ? sim::SimConfig::defaults() : sim_config_from_json(o.config);
  const std::uint64_t seed = resolve_seed(o.seed);
  sim::build_dataset(cfg, o.count, o.length, seed, o.out);
  write_manifest(manifest_path(o.manifest, o.out), "synth-data",
                 json{{"count", o.count},
                      {"length", o.length},
                      {"seed", seed},
                      {"out", o.out},
                      {"config", o.config}});
  return 0;
}

int cmd_extract(const ExtractOpts& o) {
  const std::vector<Maneuver> maneuvers = io::load_dataset(o.in);
  std::vector<Template> out;
  for (const Maneuver& m : maneuvers)
    for (std::size_t c = 0; c < m.channels; ++c)
      out.push_back(templates::extract_template(m.channel(c), c, o.params));
  io::save_templates(out, o.out);
  write_manifest(manifest_path(o.manifest, o.out), "extract-templates",
                 json{{"in", o.in},
                      {"out", o.out},
                      {"smooth-window", o.params.smooth_window},
                      {"slope-eps", o.params.flat_slope_eps},
                      {"min-flat-len", o.params.min_flat_len}});
  return 0;
}

int cmd_train(TrainOpts o) {
  const model::ModelConfig mc = o.model.resolve();
  model::validate_model_config(mc);
  o.cfg.seed = resolve_seed(o.cfg.seed);
  o.cfg.metrics_path = o.metrics;
  o.cfg.checkpoint_path = o.out;

  const std::vector<Maneuver> shorts = io::load_dataset(o.data);
  const std::vector<Maneuver> longs = io::load_dataset(o.long_data);
  const std::vector<templates::PairedSample> paired =
      templates::build_paired_dataset(shorts, o.extract);

  model::Model m = model::make_model(mc, o.cfg.seed);
  const train::TrainResult r = train::train(m, paired, longs, o.cfg);
  std::cout << "steps " << r.steps << "  gen_adv " << r.step0_gen_adv << " -> "
            << r.final_gen_adv << "  composite " << r.final_composite << "\n";

  json args = o.model.to_json(mc);
  args["data"] = o.data;
  args["long"] = o.long_data;
  args["out"] = o.out;
  args["metrics"] = o.metrics;
  args["epochs"] = o.cfg.epochs;
  args["batch"] = o.cfg.batch_size;
  args["lr-gen"] = o.cfg.lr_gen;
  args["lr-dis"] = o.cfg.lr_dis;
  args["beta1"] = o.cfg.beta1;
  args["beta2"] = o.cfg.beta2;
  args["seed"] = o.cfg.seed;
  args["smooth-window"] = o.extract.smooth_window;
  args["slope-eps"] = o.extract.flat_slope_eps;
  args["min-flat-len"] = o.extract.min_flat_len;
  write_manifest(manifest_path(o.manifest, o.out), "train", args);
  return 0;
}

int cmd_translate(const TranslateOpts& o) {
  model::Model m = model::load_checkpoint(o.checkpoint);
  const Template t = pick_template(o.template_path, o.index);
  const std::uint64_t seed = resolve_seed(o.seed);
  const std::vector<Maneuver> out = gen::translate(m, t, o.samples, seed);
  io::save_dataset(out, o.out);
  if (!o.plot.empty()) plot_maneuver(o.plot, out.front(), &t, "translation");
  write_manifest(manifest_path(o.manifest, o.out), "translate",
                 json{{"checkpoint", o.checkpoint},
                      {"template", o.template_path},
                      {"index", o.index},
                      {"samples", o.samples},
                      {"seed", seed},
                      {"out", o.out},
                      {"plot", o.plot}});
  return 0;
}

int cmd_expand(const ExpandOpts& o) {
  model::Model m = model::load_checkpoint(o.checkpoint);
  const std::vector<Maneuver> data = io::load_dataset(o.in);
  if (o.index >= data.size())
    throw param_error("maneuver index " + std::to_string(o.index) +
                      " out of range; file holds " + std::to_string(data.size()));
  std::int64_t p = gen::kCenterCrop;
  if (o.p != "center") {
    char* end = nullptr;
    p = std::strtoll(o.p.c_str(), &end, 10);
    if (end == o.p.c_str() || *end != '\0')
      throw param_error("--p must be an integer or 'center', got '" + o.p + "'");
  }
  const std::uint64_t seed = resolve_seed(o.seed);
  const Maneuver out = gen::expand_maneuver(m, data[o.index], p, seed);
  io::save_dataset({out}, o.out);
  if (!o.plot.empty()) plot_maneuver(o.plot, out, nullptr, "expansion");
  write_manifest(manifest_path(o.manifest, o.out), "expand",
                 json{{"checkpoint", o.checkpoint},
                      {"in", o.in},
                      {"index", o.index},
                      {"p", o.p},
                      {"seed", seed},
                      {"out", o.out},
                      {"plot", o.plot}});
  return 0;
}

int cmd_compose(const ComposeOpts& o) {
  model::Model m = model::load_checkpoint(o.checkpoint);
  const Scenario s{load_templates_any(o.scenario)};
  const std::uint64_t seed = resolve_seed(o.seed);
  std::vector<gen::ScenarioTrace> traces;
  const std::vector<Maneuver> out =
      gen::generate_from_scenario(m, s, o.samples, seed, &traces);
  io::save_dataset(out, o.out);
  if (!o.plot.empty())
    plot_maneuver(o.plot, out.front(), &s.templates.front(), "scenario sample");
  if (!o.trace.empty()) {
    json rows = json::array();
    for (const gen::ScenarioTrace& tr : traces)
      rows.push_back(json{{"alpha", tr.alpha.alpha}, {"c2", tr.c2}});
    io::write_file(o.trace, rows.dump(2) + "\n");
  }
  write_manifest(manifest_path(o.manifest, o.out), "compose",
                 json{{"checkpoint", o.checkpoint},
                      {"scenario", o.scenario},
                      {"samples", o.samples},
                      {"seed", seed},
                      {"out", o.out},
                      {"plot", o.plot},
                      {"trace", o.trace}});
  return 0;
}

int cmd_automate(AutomateOpts o) {
  model::Model m = model::load_checkpoint(o.checkpoint);
  const Scenario s{load_templates_any(o.scenario)};
  const dsl::SearchFn fn = dsl::compile_indicators(dsl::parse(io::read_file(o.predicate)));
  o.params.seed = resolve_seed(o.params.seed);

  const std::vector<search::SearchResult> results =
      search::automate_multi(m, s, fn, o.params);

  json branches = json::array();
  bool any_timeout = false, any_error = false;
  for (std::size_t b = 0; b < results.size(); ++b) {
    const search::SearchResult& r = results[b];
    std::string mpath;
    if (r.maneuver.has_value() && !o.maneuver_out.empty()) {
      mpath = o.maneuver_out + ".branch" + std::to_string(b) + ".sild";
      io::save_dataset({*r.maneuver}, mpath);
    }
    json jb = json::parse(search::report_json(r, o.params, mpath));
    jb["branch"] = b;
    jb["predicate"] = fn.predicate(b).source;
    branches.push_back(jb);
    if (!r.error.empty()) any_error = true;
    else if (r.status == search::SearchResult::Status::Timeout) any_timeout = true;
  }
  json report;
  report["predicate_file"] = o.predicate;
  report["branches"] = branches;
  io::write_file(o.out, report.dump(2) + "\n");

  write_manifest(manifest_path(o.manifest, o.out), "automate",
                 json{{"checkpoint", o.checkpoint},
                      {"scenario", o.scenario},
                      {"predicate", o.predicate},
                      {"n-sim", o.params.n_sim},
                      {"n-gd", o.params.n_gd},
                      {"eta", o.params.eta},
                      {"seed", o.params.seed},
                      {"out", o.out},
                      {"maneuver-out", o.maneuver_out}});
  if (any_error) return 2;
  return any_timeout ? 3 : 0;
}

int cmd_eval(const EvalOpts& o) {
  model::Model m = model::load_checkpoint(o.checkpoint);
  const std::vector<Template> ts = load_templates_any(o.templates);
  const std::uint64_t seed = resolve_seed(o.seed);
  const double ssim = train::evaluate_cycle_ssim(m, ts, o.samples, seed);
  std::cout << std::setprecision(17) << ssim << "\n";
  json args{{"checkpoint", o.checkpoint},
            {"templates", o.templates},
            {"samples", o.samples},
            {"seed", seed},
            {"out", o.out}};
  if (!o.out.empty()) {
    json j{{"cycle_ssim", ssim},
           {"templates", ts.size()},
           {"samples_per_template", o.samples},
           {"seed", seed}};
    io::write_file(o.out, j.dump(2) + "\n");
    write_manifest(manifest_path(o.manifest, o.out), "eval", args);
  } else if (!o.manifest.empty()) {
    write_manifest(o.manifest, "eval", args);
  }
  return 0;
}

int cmd_plot(const PlotOpts& o) {
  const std::vector<Maneuver> data = io::load_dataset(o.in);
  if (o.index >= data.size())
    throw param_error("maneuver index " + std::to_string(o.index) +
                      " out of range; file holds " + std::to_string(data.size()));
  std::optional<Template> overlay;
  if (!o.template_path.empty())
    overlay = pick_template(o.template_path, o.template_index);
  plot_maneuver(o.out, data[o.index], overlay.has_value() ? &*overlay : nullptr,
                "maneuver " + std::to_string(o.index));
  return 0;
}

// -- wiring -------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"template-driven stimulus generation for software-in-the-loop testing"};
  app.require_subcommand(1);
  int rc = 0;

  SynthOpts synth;
  CLI::App* c = app.add_subcommand("synth-data", "simulate a driveline dataset");
  c->add_option("--count", synth.count, "number of maneuvers");
  c->add_option("--length", synth.length, "samples per maneuver");
  c->add_option("--seed", synth.seed, "master seed");
  c->add_option("--out", synth.out, "output .sild path")->required();
  c->add_option("--config", synth.config, "simulator config JSON")
      ->check(CLI::ExistingFile);
  c->add_option("--manifest", synth.manifest, "run manifest path");
  c->callback([&] { rc = cmd_synth(synth); });

  ExtractOpts extract;
  c = app.add_subcommand("extract-templates", "extract piecewise-linear templates");
  c->add_option("--in", extract.in, "input .sild dataset")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--out", extract.out, "output .silt path")->required();
  c->add_option("--smooth-window", extract.params.smooth_window, "odd mean window");
  c->add_option("--slope-eps", extract.params.flat_slope_eps, "flat slope bound");
  c->add_option("--min-flat-len", extract.params.min_flat_len, "min flat run");
  c->add_option("--manifest", extract.manifest, "run manifest path");
  c->callback([&] { rc = cmd_extract(extract); });

  TrainOpts tr;
  c = app.add_subcommand("train", "train the translation + expansion stages");
  c->add_option("--data", tr.data, "length-N .sild dataset")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--long", tr.long_data, "length-M .sild dataset")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--out", tr.out, "checkpoint path")->required();
  c->add_option("--metrics", tr.metrics, "per-step CSV log path");
  c->add_option("--preset", tr.model.preset, "model preset: full|desk|tiny");
  c->add_option("--channels", tr.model.channels, "signal count L");
  c->add_option("--n", tr.model.n, "template length N");
  c->add_option("--m", tr.model.m, "expanded length M");
  c->add_option("--depth", tr.model.depth, "stride-2 stages");
  c->add_option("--base-width", tr.model.base_width, "first conv width");
  c->add_option("--kernel", tr.model.kernel, "conv kernel (odd)");
  c->add_option("--style-dim", tr.model.style_dim, "style code size");
  c->add_option("--expansion-dim", tr.model.expansion_dim, "expansion code size");
  c->add_option("--stack-rows", tr.model.stack_rows, "rows for 2-D folding");
  c->add_option("--epochs", tr.cfg.epochs, "training epochs");
  c->add_option("--batch", tr.cfg.batch_size, "batch size");
  c->add_option("--lr-gen", tr.cfg.lr_gen, "generator-group learning rate");
  c->add_option("--lr-dis", tr.cfg.lr_dis, "discriminator learning rate");
  c->add_option("--beta1", tr.cfg.beta1, "Adam beta1");
  c->add_option("--beta2", tr.cfg.beta2, "Adam beta2");
  c->add_option("--seed", tr.cfg.seed, "master seed");
  c->add_option("--smooth-window", tr.extract.smooth_window, "odd mean window");
  c->add_option("--slope-eps", tr.extract.flat_slope_eps, "flat slope bound");
  c->add_option("--min-flat-len", tr.extract.min_flat_len, "min flat run");
  c->add_option("--manifest", tr.manifest, "run manifest path");
  c->callback([&] { rc = cmd_train(tr); });

  TranslateOpts trl;
  c = app.add_subcommand("translate", "generate maneuvers from one template");
  c->add_option("--checkpoint", trl.checkpoint, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--template", trl.template_path, "template .silt or .json")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--index", trl.index, "template index within the file");
  c->add_option("--samples", trl.samples, "style draws");
  c->add_option("--seed", trl.seed, "master seed");
  c->add_option("--out", trl.out, "output .sild path")->required();
  c->add_option("--plot", trl.plot, "overlay SVG path");
  c->add_option("--manifest", trl.manifest, "run manifest path");
  c->callback([&] { rc = cmd_translate(trl); });

  ExpandOpts exp;
  c = app.add_subcommand("expand", "extend a maneuver with generated flanks");
  c->add_option("--checkpoint", exp.checkpoint, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--in", exp.in, "input .sild with length-N maneuvers")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--index", exp.index, "maneuver index within the file");
  c->add_option("--p", exp.p, "crop offset in [0, M-N] or 'center'");
  c->add_option("--seed", exp.seed, "expansion-code seed");
  c->add_option("--out", exp.out, "output .sild path")->required();
  c->add_option("--plot", exp.plot, "SVG path");
  c->add_option("--manifest", exp.manifest, "run manifest path");
  c->callback([&] { rc = cmd_expand(exp); });

  ComposeOpts comp;
  c = app.add_subcommand("compose", "sample maneuvers from a multi-template scenario");
  c->add_option("--checkpoint", comp.checkpoint, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--scenario", comp.scenario, "scenario templates (.silt/.json)")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--samples", comp.samples, "scenario draws");
  c->add_option("--seed", comp.seed, "master seed");
  c->add_option("--out", comp.out, "output .sild path")->required();
  c->add_option("--plot", comp.plot, "SVG path");
  c->add_option("--trace", comp.trace, "per-sample draw record JSON");
  c->add_option("--manifest", comp.manifest, "run manifest path");
  c->callback([&] { rc = cmd_compose(comp); });

  AutomateOpts aut;
  c = app.add_subcommand("automate", "search latent space for branch-covering stimuli");
  c->add_option("--checkpoint", aut.checkpoint, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--scenario", aut.scenario, "scenario templates (.silt/.json)")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--predicate", aut.predicate, "branch predicates, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--n-sim", aut.params.n_sim, "sampling budget");
  c->add_option("--n-gd", aut.params.n_gd, "gradient-descent budget");
  c->add_option("--eta", aut.params.eta, "descent step size");
  c->add_option("--seed", aut.params.seed, "master seed");
  c->add_option("--out", aut.out, "report JSON path")->required();
  c->add_option("--maneuver-out", aut.maneuver_out, "base path for found maneuvers");
  c->add_option("--manifest", aut.manifest, "run manifest path");
  c->callback([&] { rc = cmd_automate(aut); });

  EvalOpts ev;
  c = app.add_subcommand("eval", "mean cycle-reconstruction SSIM of a checkpoint");
  c->add_option("--checkpoint", ev.checkpoint, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--templates", ev.templates, "held-out templates (.silt/.json)")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--samples", ev.samples, "style draws per template");
  c->add_option("--seed", ev.seed, "master seed");
  c->add_option("--out", ev.out, "score JSON path");
  c->add_option("--manifest", ev.manifest, "run manifest path");
  c->callback([&] { rc = cmd_eval(ev); });

  PlotOpts pl;
  c = app.add_subcommand("plot", "render a maneuver (plus optional template) as SVG");
  c->add_option("--in", pl.in, "input .sild dataset")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--index", pl.index, "maneuver index within the file");
  c->add_option("--template", pl.template_path, "overlay template (.silt/.json)")
      ->check(CLI::ExistingFile);
  c->add_option("--template-index", pl.template_index, "template index");
  c->add_option("--out", pl.out, "SVG path")->required();
  c->callback([&] { rc = cmd_plot(pl); });

  try {
    app.parse(argc, argv);
    return rc;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run '" << app.get_name() << " --help' for usage\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const param_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const shape_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
