#include "xfer/cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <optional>

#include "CLI11.hpp"
#include "xfer/cli/fixtures.hpp"
#include "xfer/datamodel/io.hpp"
#include "xfer/datamodel/split.hpp"
#include "xfer/datamodel/synthetic.hpp"
#include "xfer/eval/probe.hpp"
#include "xfer/eval/trace.hpp"
#include "xfer/metrics/report.hpp"
#include "xfer/nn/checkpoint.hpp"
#include "xfer/nn/train.hpp"
#include "xfer/numkit/byteio.hpp"

namespace xfer::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using datamodel::Domain;
using datamodel::FeatureSet;

namespace {

constexpr const char* kManifest = "manifest.json";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string platform_note() {
  std::string s;
#if defined(__linux__)
  s = "linux";
#elif defined(__APPLE__)
  s = "macos";
#else
  s = "unknown-os";
#endif
#if defined(__x86_64__)
  s += " x86_64";
#elif defined(__aarch64__)
  s += " aarch64";
#endif
#if defined(__clang__)
  s += " clang " __clang_version__;
#elif defined(__GNUC__)
  s += " gcc " __VERSION__;
#endif
  return s;
}

bool on(const std::string& flag) { return flag == "on"; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  numkit::write_file(path, text);
}

void emit_json(const json& j, const std::string& out_path, std::ostream& out) {
  const auto text = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

void save_features(const FeatureSet& set, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (path.extension() == ".csv") {
    datamodel::save_csv(set, path);
  } else {
    datamodel::save_fvec(set, path);
  }
}

json to_json(const datamodel::SyntheticConfig& c) {
  return {{"c_pre", c.c_pre},
          {"c_eval", c.c_eval},
          {"dim", c.dim},
          {"samples_per_class", c.samples_per_class},
          {"gap", c.gap},
          {"within_sigma", c.within_sigma},
          {"center_sigma", c.center_sigma},
          {"seed", c.seed}};
}

Domain domain_from_flag(const std::string& s) { return s == "pre" ? Domain::Pre : Domain::Eval; }

FeatureSet restrict_domain(const FeatureSet& set, const std::string& domain) {
  if (domain == "all") return set;
  return set.select_domain(domain_from_flag(domain));
}

json read_json(const fs::path& path) {
  const auto text = numkit::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, path.string() + ": " + e.what());
  }
}

// Options shared by probe, stagewise and trace.
struct ProbeFlags {
  eval::ProbeConfig cfg;
  double split = 0.5;
  std::uint64_t split_seed = 0;

  void add(CLI::App* app) {
    app->add_option("--sweep", cfg.sweep, "Probe learning rates, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--lr-scale", cfg.lr_scale, "Factor applied to every sweep value")->capture_default_str();
    app->add_option("--probe-epochs", cfg.epochs, "Probe training epochs")->capture_default_str();
    app->add_option("--probe-batch", cfg.batch_size, "Probe minibatch size")->capture_default_str();
    app->add_option("--probe-momentum", cfg.momentum, "Probe Nesterov momentum")->capture_default_str();
    app->add_option("--probe-seed", cfg.seed, "Probe shuffle seed")->capture_default_str();
    app->add_option("--split", split, "Train fraction of the probe split (per class)")->capture_default_str();
    app->add_option("--split-seed", split_seed, "Seed of the probe split")->capture_default_str();
  }
};

json probe_json(const eval::ProbeConfig& cfg, const eval::ProbeResult& r) {
  return {{"config", eval::to_json(cfg)}, {"result", eval::to_json(r)}};
}

FeatureSet load_with_checkpoint(const std::string& data_path, const std::string& ckpt_path, std::size_t stage) {
  auto data = datamodel::load_feature_set(data_path);
  if (ckpt_path.empty()) return data;
  const auto ckpt = nn::load_checkpoint(ckpt_path);
  return eval::extract_features(ckpt, data, stage == 0 ? ckpt.arch.stages() : stage);
}

std::vector<std::string> run_artifacts(const fs::path& run_dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name != kManifest) files.push_back(name);
  }
  std::sort(files.begin(), files.end());
  return files;
}

void refresh_artifacts(json& manifest, const fs::path& run_dir) {
  manifest["artifacts"] = run_artifacts(run_dir);
  manifest["updated"] = utc_now();
}

// ---- subcommands -----------------------------------------------------------

struct GenCmd {
  datamodel::SyntheticConfig cfg;
  std::string out_path;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gen", "Generate a synthetic pre-D / eval-D feature set");
    c->add_option("--c-pre", cfg.c_pre, "Pre-D class count")->capture_default_str();
    c->add_option("--c-eval", cfg.c_eval, "Eval-D class count")->capture_default_str();
    c->add_option("--dim", cfg.dim, "Feature dimension")->capture_default_str();
    c->add_option("--per-class", cfg.samples_per_class, "Samples per class")->capture_default_str();
    c->add_option("--gap", cfg.gap, "Domain shift of eval-D centers")->capture_default_str();
    c->add_option("--within-sigma", cfg.within_sigma, "Within-class noise scale")->capture_default_str();
    c->add_option("--center-sigma", cfg.center_sigma, "Class-center spread")->capture_default_str();
    c->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
    c->add_option("--out", out_path, "Output file (.fvec or .csv)")->required();
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    const auto set = datamodel::generate_synthetic(cfg);
    save_features(set, out_path);
    write_text(out_path + ".json", json{{"synthetic", to_json(cfg)}}.dump(2) + "\n");
    *out << "wrote " << out_path << ": N=" << set.num_samples() << " d=" << set.dim()
         << " C=" << set.num_classes() << "\n";
  }
};

struct TrainCmd {
  std::string data_path, out_dir, resume, projector = "off", loss = "softmax";
  std::vector<std::size_t> widths{64, 16};
  std::size_t hidden = 0, proj_out = 0;
  double beta = 30.0;
  bool head_bias = false;
  nn::TrainConfig cfg = desk_config();

  static nn::TrainConfig desk_config() {
    nn::TrainConfig c;
    c.base_lr = 0.1;
    c.warmup_start_lr = 0.025;
    return c;
  }

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("train", "Pretrain an encoder on the pre-D rows of a feature set");
    c->add_option("--data", data_path, "Feature set (.fvec or .csv)")->required();
    c->add_option("--out", out_dir, "Run directory")->required();
    c->add_option("--widths", widths, "Encoder stage widths, comma separated")->delimiter(',')->capture_default_str();
    c->add_option("--projector", projector, "MLP projector (SL-MLP)")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    c->add_option("--proj-hidden", hidden, "Projector hidden width (0: 4x encoder output)")->capture_default_str();
    c->add_option("--proj-out", proj_out, "Projector output width (0: encoder output / 4)")->capture_default_str();
    c->add_option("--loss", loss, "Classification loss")
        ->check(CLI::IsMember({"softmax", "cosine"}))
        ->capture_default_str();
    c->add_option("--beta", beta, "Cosine-softmax scale")->capture_default_str();
    c->add_flag("--head-bias", head_bias, "Give the classifier a bias");
    c->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    c->add_option("--batch", cfg.batch_size, "Minibatch size (>= 2)")->capture_default_str();
    c->add_option("--lr", cfg.base_lr, "Peak learning rate")->capture_default_str();
    c->add_option("--warmup", cfg.warmup_epochs, "Linear warmup epochs")->capture_default_str();
    c->add_option("--warmup-start-lr", cfg.warmup_start_lr, "Learning rate at epoch 0")->capture_default_str();
    c->add_option("--momentum", cfg.momentum, "Nesterov momentum")->capture_default_str();
    c->add_option("--wd", cfg.weight_decay, "Weight decay (weights only)")->capture_default_str();
    c->add_option("--seed", cfg.seed, "Initialization and shuffle seed")->capture_default_str();
    c->add_option("--ckpt-every", cfg.checkpoint_every, "Checkpoint interval in epochs")->capture_default_str();
    c->add_option("--resume", resume, "Continue from this checkpoint (same arch and config)");
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    const auto data = datamodel::load_feature_set(data_path);
    const auto pre = data.select_domain(Domain::Pre);
    nn::ArchSpec arch;
    arch.input_dim = pre.dim();
    arch.encoder_widths = widths;
    arch.use_projector = on(projector);
    arch.projector_hidden = hidden;
    arch.projector_out = proj_out;
    arch.num_classes = pre.num_classes();
    arch.loss = nn::loss_from_name(loss);
    arch.beta = beta;
    arch.classifier_bias = head_bias;
    nn::TrainOptions opts;
    if (!resume.empty()) opts.resume_from = resume;

    const auto result = nn::train(arch, cfg, pre, out_dir, opts);

    json synthetic = nullptr;
    std::optional<std::uint64_t> data_seed;
    if (fs::exists(data_path + ".json")) {
      synthetic = read_json(data_path + ".json").value("synthetic", json(nullptr));
      if (synthetic.is_object()) data_seed = synthetic.at("seed").get<std::uint64_t>();
    }
    json manifest = {
        {"tool", "xfer"},
        {"version", std::string(kToolVersion)},
        {"platform", platform_note()},
        {"created", utc_now()},
        {"data", {{"path", fs::absolute(data_path).string()}, {"fnv1a64", hex64(fnv1a64(numkit::read_file(data_path)))}}},
        {"config",
         {{"arch", nn::to_json(arch)}, {"train", nn::to_json(cfg)}, {"synthetic", synthetic}, {"probe", nullptr}, {"metrics", nullptr}}},
        {"seeds",
         {{"train", cfg.seed},
          {"init_stream", "fork(1) of train seed"},
          {"shuffle_stream", "fork(2) of train seed"},
          {"synthetic", data_seed ? json(*data_seed) : json(nullptr)}}},
        {"traces", json::array()},
    };
    const fs::path manifest_path = fs::path(out_dir) / kManifest;
    if (!resume.empty() && fs::exists(manifest_path)) manifest["traces"] = read_json(manifest_path).value("traces", json::array());
    refresh_artifacts(manifest, out_dir);
    write_text(manifest_path, manifest.dump(2) + "\n");
    *out << "trained " << cfg.epochs << " epochs: loss " << metrics::format_real(result.final_loss) << ", top1 "
         << metrics::format_real(result.final_top1) << ", " << result.checkpoints.size() << " checkpoints in " << out_dir
         << "\n";
  }
};

struct ExtractCmd {
  std::string ckpt, data_path, out_path, domain = "all";
  std::size_t stage = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("extract", "Write encoder-stage features of a feature set");
    c->add_option("--ckpt", ckpt, "Checkpoint")->required();
    c->add_option("--data", data_path, "Input feature set")->required();
    c->add_option("--stage", stage, "Encoder stage, 1-based (0: last)")->capture_default_str();
    c->add_option("--domain", domain, "Rows to keep")->check(CLI::IsMember({"all", "pre", "eval"}))->capture_default_str();
    c->add_option("--out", out_path, "Output file (.fvec or .csv)")->required();
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    const auto set = restrict_domain(load_with_checkpoint(data_path, ckpt, stage), domain);
    save_features(set, out_path);
    *out << "wrote " << out_path << ": N=" << set.num_samples() << " d=" << set.dim() << "\n";
  }
};

struct MetricsCmd {
  std::string ckpt, data_path, out_path, centered = "off";
  std::size_t stage = 0, k = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("metrics", "Discriminative ratio, mixtureness and redundancy of a feature set");
    c->add_option("--data", data_path, "Feature set")->required();
    c->add_option("--ckpt", ckpt, "Checkpoint; without it the stored features are used directly");
    c->add_option("--stage", stage, "Encoder stage with --ckpt, 1-based (0: last)")->capture_default_str();
    c->add_option("--k", k, "Mixtureness neighbours (0: max(1, round(0.1 C)))")->capture_default_str();
    c->add_option("--centered", centered, "Mean-center channels before redundancy")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    c->add_option("--out", out_path, "Output JSON (stdout when omitted)");
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    const auto set = load_with_checkpoint(data_path, ckpt, stage);
    metrics::MetricsOptions opts;
    opts.k = k;
    opts.centered = on(centered);
    const auto report = metrics::compute_report(set, opts);
    auto j = metrics::to_json(report);
    j["centered"] = opts.centered;
    emit_json(j, out_path, *out);
    if (report.first_error)
      throw Error(*report.first_error, "metrics failed: " + report.flags.front() + " (others reported)");
  }
};

struct ProbeCmd {
  std::string ckpt, data_path, out_path, domain = "eval";
  std::size_t stage = 0;
  ProbeFlags probe;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("probe", "Linear probe with a learning-rate sweep");
    c->add_option("--data", data_path, "Feature set")->required();
    c->add_option("--ckpt", ckpt, "Checkpoint; without it the stored features are probed");
    c->add_option("--stage", stage, "Encoder stage with --ckpt, 1-based (0: last)")->capture_default_str();
    c->add_option("--domain", domain, "Rows to probe (a single-domain set is used whole)")
        ->check(CLI::IsMember({"all", "pre", "eval"}))
        ->capture_default_str();
    probe.add(c);
    c->add_option("--out", out_path, "Output JSON (stdout when omitted)");
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    auto set = load_with_checkpoint(data_path, ckpt, stage);
    if (domain != "all" && set.num_classes_in(Domain::Pre) > 0 && set.num_classes_in(Domain::Eval) > 0)
      set = set.select_domain(domain_from_flag(domain));
    const auto [tr, te] = datamodel::split(set, datamodel::SplitSpec::fraction(probe.split, probe.split_seed));
    const auto r = eval::linear_probe(tr, te, probe.cfg);
    emit_json(probe_json(probe.cfg, r), out_path, *out);
    if (!out_path.empty())
      *out << "best top1 " << metrics::format_real(r.best_top1) << " at lr " << metrics::format_real(r.chosen_lr)
           << "\n";
  }
};

struct StagewiseCmd {
  std::string ckpt, data_path, out_path;
  ProbeFlags probe;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("stagewise", "Linear probe of every encoder stage on eval-D rows");
    c->add_option("--ckpt", ckpt, "Checkpoint")->required();
    c->add_option("--data", data_path, "Feature set")->required();
    probe.add(c);
    c->add_option("--out", out_path, "Output JSON (stdout when omitted)");
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    auto set = datamodel::load_feature_set(data_path);
    if (set.num_classes_in(Domain::Pre) > 0 && set.num_classes_in(Domain::Eval) > 0) set = set.select_domain(Domain::Eval);
    const auto [tr, te] = datamodel::split(set, datamodel::SplitSpec::fraction(probe.split, probe.split_seed));
    const auto stages = eval::stage_wise_eval(nn::load_checkpoint(ckpt), tr, te, probe.cfg);
    json rows = json::array();
    for (std::size_t s = 0; s < stages.size(); ++s) {
      auto j = eval::to_json(stages[s]);
      j["stage"] = s + 1;
      rows.push_back(j);
    }
    emit_json({{"config", eval::to_json(probe.cfg)}, {"stages", rows}}, out_path, *out);
  }
};

struct TraceCmd {
  std::string run_dir, data_path, out_path, centered = "off";
  std::size_t k = 0;
  bool no_probe = false;
  ProbeFlags probe;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("trace", "Metric and probe trajectory over the checkpoints of a run");
    c->add_option("--run", run_dir, "Run directory")->required();
    c->add_option("--data", data_path, "Feature set with both domains (default: the run's training data)");
    c->add_option("--k", k, "Mixtureness neighbours (0: max(1, round(0.1 C)))")->capture_default_str();
    c->add_option("--centered", centered, "Mean-center channels before redundancy")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    c->add_flag("--no-probe", no_probe, "Skip the eval-D probe (probe_top1 is nan)");
    probe.add(c);
    c->add_option("--out", out_path, "Output .csv or .json (CSV on stdout when omitted)");
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    const fs::path manifest_path = fs::path(run_dir) / kManifest;
    std::optional<json> manifest;
    if (fs::exists(manifest_path)) manifest = read_json(manifest_path);
    std::string data = data_path;
    if (data.empty()) {
      if (!manifest) throw Error(ErrorCode::InvalidConfig, "no --data and no manifest in " + run_dir);
      data = manifest->at("data").at("path").get<std::string>();
    }
    eval::TraceOptions opts;
    opts.k = k;
    opts.centered = on(centered);
    opts.probe = probe.cfg;
    opts.eval_split = datamodel::SplitSpec::fraction(probe.split, probe.split_seed);
    opts.run_probe = !no_probe;
    const auto result = eval::trace(run_dir, datamodel::load_feature_set(data), opts);

    const bool as_json = fs::path(out_path).extension() == ".json";
    const auto text = as_json ? eval::trace_json(result.rows).dump(2) + "\n" : eval::trace_csv(result.rows);
    if (out_path.empty()) {
      *out << text;
    } else {
      write_text(out_path, text);
    }

    if (manifest) {
      const json entry = {{"out", out_path.empty() ? json(nullptr) : json(fs::absolute(out_path).string())},
                          {"data", fs::absolute(data).string()},
                          {"probe", no_probe ? json(nullptr) : eval::to_json(probe.cfg)},
                          {"probe_split", {{"train_fraction", probe.split}, {"seed", probe.split_seed}}},
                          {"metrics", {{"k", k}, {"centered", opts.centered}}}};
      auto& traces = (*manifest)["traces"];
      if (!traces.is_array()) traces = json::array();
      auto same = std::find_if(traces.begin(), traces.end(), [&](const json& t) { return t.value("out", json()) == entry["out"]; });
      if (same != traces.end()) {
        *same = entry;
      } else {
        traces.push_back(entry);
      }
      (*manifest)["config"]["probe"] = entry["probe"];
      (*manifest)["config"]["metrics"] = entry["metrics"];
      refresh_artifacts(*manifest, run_dir);
      write_text(manifest_path, manifest->dump(2) + "\n");
    }
  }
};

struct ReportCmd {
  std::vector<std::string> traces, labels;
  std::string out_path;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("report", "Merge trace CSVs with the bundled paper reference values");
    c->add_option("traces", traces, "Trace CSV files");
    c->add_option("--label", labels, "Series label per trace, in order (default: file stem)");
    c->add_option("--out", out_path, "Output JSON (stdout when omitted)");
    c->callback([this] { run(); });
  }

  std::ostream* out = nullptr;
  void run() {
    if (!labels.empty() && labels.size() != traces.size())
      throw Error(ErrorCode::InvalidConfig, "--label count must match the trace count");
    std::vector<std::pair<std::string, fs::path>> series;
    for (std::size_t i = 0; i < traces.size(); ++i)
      series.emplace_back(labels.empty() ? fs::path(traces[i]).stem().string() : labels[i], traces[i]);
    emit_json(build_report(series), out_path, *out);
  }
};

}  // namespace

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::Usage: return 1;
    case ErrorCategory::Data: return 2;
    case ErrorCategory::Numeric: return 3;
  }
  return 2;
}

json build_report(const std::vector<std::pair<std::string, fs::path>>& traces) {
  const auto fixture = paper_fixture_json();
  const auto hash = fnv1a64(fixture);
  if (hash != kPaperFixtureHash)
    throw Error(ErrorCode::InvariantViolation, "bundled paper fixture does not match its hash");

  json measured = json::array();
  json summary = json::array();
  for (const auto& [label, path] : traces) {
    const auto rows = eval::parse_trace_csv(numkit::read_file(path));
    auto series = eval::trace_json(rows);
    for (auto& r : series) r["source"] = "measured";
    measured.push_back({{"label", label}, {"path", path.string()}, {"rows", series}});
    if (rows.empty()) continue;
    const auto& last = rows.back();
    std::size_t peak = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].probe_top1 > rows[peak].probe_top1) peak = i;
    summary.push_back({{"source", "measured"},
                       {"label", label},
                       {"final_epoch", last.epoch},
                       {"phi_pre", metrics::json_real(last.phi_pre)},
                       {"mixtureness", metrics::json_real(last.mixtureness)},
                       {"redundancy", metrics::json_real(last.redundancy)},
                       {"probe_top1", metrics::json_real(last.probe_top1)},
                       {"peak_probe_epoch", rows[peak].epoch},
                       {"peak_probe_top1", metrics::json_real(rows[peak].probe_top1)}});
  }

  json report = {{"tool", "xfer"},
                 {"version", std::string(kToolVersion)},
                 {"paper", json::parse(fixture)},
                 {"paper_fnv1a64", hex64(hash)},
                 {"measured", measured},
                 {"summary", summary}};
  if (traces.empty()) report["warning"] = "no traces given; the report holds the paper fixtures only";
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transferability toolkit: synthetic data, SL / SL-MLP pretraining, metrics and probes", "xfer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GenCmd gen;
  TrainCmd train;
  ExtractCmd extract;
  MetricsCmd metrics_cmd;
  ProbeCmd probe;
  StagewiseCmd stagewise;
  TraceCmd trace;
  ReportCmd report;
  gen.out = train.out = extract.out = metrics_cmd.out = probe.out = stagewise.out = trace.out = report.out = &out;
  gen.add(app);
  train.add(app);
  extract.add(app);
  metrics_cmd.add(app);
  probe.add(app);
  stagewise.add(app);
  trace.add(app);
  report.add(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace xfer::cli
