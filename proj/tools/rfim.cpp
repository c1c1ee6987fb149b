// rfim: synthesis, detection, classification and PSD front end.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfim/autodetect/detector.hpp"
#include "rfim/autodetect/serialization.hpp"
#include "rfim/iqcore/iq_file.hpp"
#include "rfim/iqcore/spectral.hpp"
#include "rfim/lstmclass/serialization.hpp"
#include "rfim/wavegen/dataset.hpp"

#ifndef RFIM_VERSION
#define RFIM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace rfim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDetected = 10;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

const std::string kToolVersion = std::string("rfim ") + RFIM_VERSION;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON file of option values; flags take precedence");
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", c.out, "Output directory")->required();
}

// Config keys are option long names with '-' written as '_'. Values fill
// options that were not given on the command line.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw UsageError("config not found: " + path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = nullptr;
    for (auto* o : cmd->get_options()) {
      if (o->check_lname(name)) opt = o;
    }
    if (!opt || name == "config") throw UsageError("config key not accepted by this command: " + key);
    if (opt->count() > 0) continue;
    std::vector<std::string> items;
    const auto text = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      for (const auto& v : value) items.push_back(text(v));
    } else {
      items.push_back(text(value));
    }
    opt->add_result(items);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key " + key + ": " + e.what());
    }
  }
}

fs::path prepare_out(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw UsageError("cannot create output directory: " + out);
  return fs::path(out);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path.string());
  os << text;
  if (!os) throw UsageError("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json envelope(const char* command, const Common& c, json params) {
  json j;
  j["command"] = command;
  j["seed"] = c.seed;
  j["params"] = std::move(params);
  return j;
}

void write_config(const fs::path& dir, const json& config) {
  write_json(dir / "config.json", json{{"tool_version", kToolVersion}, {"config", config}});
}

json load_json(const std::string& path, const char* what) {
  if (path.empty() || !fs::exists(path)) throw UsageError(std::string(what) + " not found: " + path);
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

double parse_sir(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid SIR value: " + s);
  }
}

std::vector<double> parse_sirs(const std::vector<std::string>& list) {
  if (list.empty()) throw UsageError("empty SIR list");
  std::vector<double> out;
  for (const auto& s : list) out.push_back(parse_sir(s));
  return out;
}

std::string sir_tag(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

wave::WaveformKind parse_kind_or_throw(const std::string& name) {
  const auto k = wave::parse_kind(name);
  if (!k) throw UsageError("unknown waveform kind: " + name);
  return *k;
}

struct SignalOptions {
  std::string intended = "dvbs2_like";
  std::vector<std::string> classes{"lte_like", "umts_like", "gsm_like"};
  std::size_t num_samples = 512;
  double sample_rate_hz = 50e6;
  double tone_offset_hz = 2e6;
  double snr_db = 20.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--intended", intended, "Intended-signal kind")->capture_default_str();
    cmd->add_option("--classes", classes, "Interferer kinds")->delimiter(',')->capture_default_str();
    cmd->add_option("--num-samples", num_samples, "Samples per segment")->capture_default_str();
    cmd->add_option("--sample-rate", sample_rate_hz, "Sample rate in Hz")->capture_default_str();
    cmd->add_option("--tone-offset", tone_offset_hz, "Tone interferer offset in Hz")->capture_default_str();
    cmd->add_option("--snr", snr_db, "SNR in dB")->capture_default_str();
  }

  wave::WaveformSpec spec(const std::string& kind) const {
    wave::WaveformSpec s;
    s.kind = parse_kind_or_throw(kind);
    s.num_samples = num_samples;
    s.sample_rate_hz = sample_rate_hz;
    s.tone_offset_hz = tone_offset_hz;
    try {
      wave::validate(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return s;
  }

  std::vector<wave::WaveformSpec> class_specs() const {
    if (classes.empty()) throw UsageError("no interferer classes given");
    std::vector<wave::WaveformSpec> out;
    for (const auto& c : classes) out.push_back(spec(c));
    return out;
  }

  json to_json() const {
    return json{{"intended", intended},     {"classes", classes},       {"num_samples", num_samples},
                {"sample_rate", sample_rate_hz}, {"tone_offset", tone_offset_hz}, {"snr", snr_db}};
  }
};

// A manifest (.json) or a single capture cut into back-to-back segments.
std::vector<IqSegment> load_segments(const std::string& path, std::size_t segment_length) {
  if (path.empty() || !fs::exists(path)) throw UsageError("input not found: " + path);
  if (fs::path(path).extension() == ".json") return wave::read_dataset(path).segments();
  const auto capture = read_iq_file(path);
  if (segment_length == 0 || capture.size() < segment_length) {
    throw DataError("capture of " + std::to_string(capture.size()) + " samples is shorter than one segment");
  }
  return segment(capture, segment_length, segment_length);
}

void require_length(std::span<const IqSegment> segs, std::size_t expected) {
  for (const auto& s : segs) {
    if (s.size() != expected) {
      throw DataError("segment length " + std::to_string(s.size()) + " does not match model input length " +
                      std::to_string(expected));
    }
  }
}

detect::SparseAutoencoder load_autoencoder(const std::string& path) {
  const auto j = load_json(path, "model");
  try {
    return detect::autoencoder_from_json(j);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

classify::LstmModel load_lstm(const std::string& path) {
  const auto j = load_json(path, "model");
  try {
    return classify::lstm_from_json(j);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

json with_provenance(json artifact, const json& config) {
  artifact["tool_version"] = kToolVersion;
  artifact["config"] = config;
  return artifact;
}

// ---------------------------------------------------------------- synth

struct SynthCmd {
  Common common;
  SignalOptions signal;
  std::vector<std::string> sirs{"0", "10", "20", "30"};
  std::size_t segments_per_point = 10;
  std::size_t clean = 0;
  std::string waveform;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate surrogate waveforms and labelled datasets");
    add_common(cmd, common);
    signal.add(cmd);
    cmd->add_option("--sir", sirs, "SIR points in dB (inf for none)")->delimiter(',')->capture_default_str();
    cmd->add_option("--segments-per-point", segments_per_point, "Segments per class and SIR")->capture_default_str();
    cmd->add_option("--clean", clean, "Emit this many interference-free segments instead");
    cmd->add_option("--waveform", waveform, "Emit one waveform of this kind instead");
    cmd->callback([this, cmd] { run(cmd); });
  }

  json config() const {
    auto p = signal.to_json();
    p["sir"] = sirs;
    p["segments_per_point"] = segments_per_point;
    p["clean"] = clean;
    p["waveform"] = waveform;
    return envelope("synth", common, p);
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto dir = prepare_out(common.out);
    const auto cfg = config();
    if (!waveform.empty()) {
      auto s = signal.spec(waveform);
      s.seed = common.seed;
      write_iq_file(dir / "waveform.cf32", wave::generate(s));
    } else if (clean > 0) {
      wave::write_dataset(dir, wave::build_clean_dataset(signal.spec(signal.intended), clean, common.seed, signal.snr_db));
    } else {
      const auto classes = signal.class_specs();
      const auto sir_list = parse_sirs(sirs);
      if (segments_per_point == 0) throw UsageError("segments-per-point must be positive");
      wave::write_dataset(dir, wave::build_dataset(classes, signal.spec(signal.intended), sir_list, segments_per_point,
                                                   common.seed, signal.snr_db));
    }
    write_config(dir, cfg);
  }
};

// ---------------------------------------------------------------- detect

struct DetectTrainCmd {
  Common common;
  std::string input;
  std::size_t segment_length = 512;
  detect::AutoencoderTrainConfig train;

  void attach(CLI::App* parent) {
    auto* cmd = parent->add_subcommand("train", "Fit the autoencoder on clean IQ");
    add_common(cmd, common);
    cmd->add_option("--input", input, "Clean manifest or capture")->required();
    cmd->add_option("--segment-length", segment_length, "Segment length for raw captures")->capture_default_str();
    cmd->add_option("--hidden", train.hyper.hidden_size, "Hidden units")->capture_default_str();
    cmd->add_option("--lambda", train.hyper.l2_weight, "L2 weight")->capture_default_str();
    cmd->add_option("--rho", train.hyper.sparsity_proportion, "Sparsity proportion")->capture_default_str();
    cmd->add_option("--beta", train.hyper.sparsity_weight, "Sparsity weight")->capture_default_str();
    cmd->add_option("--max-iters", train.scg.max_iters, "SCG iteration budget")->capture_default_str();
    cmd->add_option("--grad-tol", train.scg.grad_tol, "SCG gradient tolerance")->capture_default_str();
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto dir = prepare_out(common.out);
    train.seed = common.seed;
    const auto cfg = envelope("detect train", common,
                              json{{"input", input},
                                   {"segment_length", segment_length},
                                   {"hidden", train.hyper.hidden_size},
                                   {"lambda", train.hyper.l2_weight},
                                   {"rho", train.hyper.sparsity_proportion},
                                   {"beta", train.hyper.sparsity_weight},
                                   {"max_iters", train.scg.max_iters},
                                   {"grad_tol", train.scg.grad_tol}});
    const auto segs = load_segments(input, segment_length);
    if (!segs.empty()) require_length(segs, segs.front().size());
    const auto result = detect::train_autoencoder(segs, train);
    auto model = detect::to_json(result.model);
    model["training"] = {{"iterations", result.iterations},
                         {"converged", result.converged},
                         {"loss_history", result.loss_history}};
    write_json(dir / "model.json", with_provenance(model, cfg));
    write_config(dir, cfg);
  }
};

struct DetectCalibrateCmd {
  Common common;
  std::string model;
  std::string input;
  std::size_t segment_length = 512;
  detect::DetectorThresholds thresholds;

  void attach(CLI::App* parent) {
    auto* cmd = parent->add_subcommand("calibrate", "Baseline MSE moments on clean IQ");
    add_common(cmd, common);
    cmd->add_option("--model", model, "Autoencoder model.json")->required();
    cmd->add_option("--input", input, "Clean manifest or capture")->required();
    cmd->add_option("--segment-length", segment_length, "Segment length for raw captures")->capture_default_str();
    cmd->add_option("--tau-variance", thresholds.variance, "Variance threshold")->capture_default_str();
    cmd->add_option("--tau-skewness", thresholds.skewness, "Skewness threshold")->capture_default_str();
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto ae = load_autoencoder(model);
    const auto dir = prepare_out(common.out);
    const auto cfg = envelope("detect calibrate", common,
                              json{{"model", model},
                                   {"input", input},
                                   {"segment_length", segment_length},
                                   {"tau_variance", thresholds.variance},
                                   {"tau_skewness", thresholds.skewness}});
    const auto segs = load_segments(input, segment_length);
    require_length(segs, static_cast<std::size_t>(ae.input_dim() / 2));
    const auto cal = detect::calibrate(ae, segs, thresholds);
    write_json(dir / "calibration.json", with_provenance(detect::to_json(cal), cfg));
    write_config(dir, cfg);
  }
};

struct DetectRunCmd {
  Common common;
  std::string model;
  std::string calibration;
  std::string input;
  std::size_t segment_length = 512;
  bool detected = false;

  void attach(CLI::App* parent) {
    auto* cmd = parent->add_subcommand("run", "Decide whether IQ input carries interference");
    add_common(cmd, common);
    cmd->add_option("--model", model, "Autoencoder model.json")->required();
    cmd->add_option("--calibration", calibration, "calibration.json")->required();
    cmd->add_option("--input", input, "Manifest or capture to test")->required();
    cmd->add_option("--segment-length", segment_length, "Segment length for raw captures")->capture_default_str();
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto ae = load_autoencoder(model);
    detect::DetectorCalibration cal;
    try {
      cal = detect::calibration_from_json(load_json(calibration, "calibration"));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    const auto dir = prepare_out(common.out);
    const auto cfg = envelope("detect run", common,
                              json{{"model", model},
                                   {"calibration", calibration},
                                   {"input", input},
                                   {"segment_length", segment_length}});
    const auto segs = load_segments(input, segment_length);
    require_length(segs, static_cast<std::size_t>(ae.input_dim() / 2));
    const auto decision = detect::detect(ae, cal, segs);
    write_json(dir / "decision.json", with_provenance(detect::detection_report(cal, decision), cfg));
    write_config(dir, cfg);
    detected = decision.interference_detected;
  }
};

// ---------------------------------------------------------------- classify

void write_confusions(const fs::path& dir, const classify::ClassificationReport& r) {
  std::ostringstream all;
  classify::write_confusion_csv(all, r.labels, r.overall);
  write_text(dir / "confusion.csv", all.str());
  for (const auto& p : r.per_sir) {
    std::ostringstream os;
    classify::write_confusion_csv(os, r.labels, p.metrics);
    write_text(dir / ("confusion_sir_" + sir_tag(p.sir_db) + ".csv"), os.str());
  }
}

struct ClassifyTrainCmd {
  Common common;
  std::string input;
  classify::ClassifierTrainConfig train;
  std::string schedule = train.schedule == classify::LrSchedule::cosine ? "cosine" : "constant";
  bool quiet = false;

  void attach(CLI::App* parent) {
    auto* cmd = parent->add_subcommand("train", "Train the LSTM interference classifier");
    add_common(cmd, common);
    cmd->add_option("--input", input, "Labelled training manifest")->required();
    cmd->add_option("--hidden", train.hidden_size, "Hidden units")->capture_default_str();
    cmd->add_option("--epochs", train.epochs, "Epochs")->capture_default_str();
    cmd->add_option("--batch-size", train.batch_size, "Mini-batch size")->capture_default_str();
    cmd->add_option("--learning-rate", train.adam.learning_rate, "Adam step size")->capture_default_str();
    cmd->add_option("--beta1", train.adam.beta1, "Adam beta1")->capture_default_str();
    cmd->add_option("--beta2", train.adam.beta2, "Adam beta2")->capture_default_str();
    cmd->add_option("--epsilon", train.adam.epsilon, "Adam epsilon")->capture_default_str();
    cmd->add_option("--validation-fraction", train.validation_fraction, "Held-out fraction")->capture_default_str();
    cmd->add_option("--forget-bias", train.forget_bias, "Initial forget-gate bias")->capture_default_str();
    cmd->add_option("--clip-norm", train.clip_norm, "Global gradient-norm clip, 0 disables")->capture_default_str();
    cmd->add_option("--lr-schedule", schedule, "Learning-rate schedule")
        ->check(CLI::IsMember({"constant", "cosine"}))
        ->capture_default_str();
    cmd->add_option("--labels", train.labels, "Class labels in output order")->delimiter(',')->capture_default_str();
    cmd->add_flag("--quiet", quiet, "No per-epoch progress on stderr");
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto dir = prepare_out(common.out);
    train.seed = common.seed;
    train.schedule = schedule == "cosine" ? classify::LrSchedule::cosine : classify::LrSchedule::constant;
    const auto cfg = envelope("classify train", common,
                              json{{"input", input},
                                   {"hidden", train.hidden_size},
                                   {"epochs", train.epochs},
                                   {"batch_size", train.batch_size},
                                   {"learning_rate", train.adam.learning_rate},
                                   {"beta1", train.adam.beta1},
                                   {"beta2", train.adam.beta2},
                                   {"epsilon", train.adam.epsilon},
                                   {"validation_fraction", train.validation_fraction},
                                   {"forget_bias", train.forget_bias},
                                   {"clip_norm", train.clip_norm},
                                   {"lr_schedule", schedule},
                                   {"labels", train.labels}});
    if (input.empty() || !fs::exists(input)) throw UsageError("input not found: " + input);
    const auto ds = wave::read_dataset(input);
    const auto result = classify::train_classifier(ds, train, [this](const classify::EpochRecord& e) {
      if (!quiet) std::fprintf(stderr, "epoch %zu  loss %.5f  held-out accuracy %.4f\n", e.epoch, e.train_loss, e.heldout_accuracy);
    });
    auto model = classify::to_json(result.model);
    model["history"] = classify::to_json(std::span<const classify::EpochRecord>(result.history));
    write_json(dir / "model.json", with_provenance(model, cfg));
    std::ostringstream csv;
    classify::write_history_csv(csv, result.history);
    write_text(dir / "loss_history.csv", csv.str());
    write_config(dir, cfg);
  }
};

struct ClassifyEvalCmd {
  Common common;
  std::string model;
  std::string input;

  void attach(CLI::App* parent) {
    auto* cmd = parent->add_subcommand("eval", "Evaluate a classifier on a labelled manifest");
    add_common(cmd, common);
    cmd->add_option("--model", model, "Classifier model.json")->required();
    cmd->add_option("--input", input, "Labelled manifest")->required();
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto lstm = load_lstm(model);
    const auto dir = prepare_out(common.out);
    const auto cfg = envelope("classify eval", common, json{{"model", model}, {"input", input}});
    if (input.empty() || !fs::exists(input)) throw UsageError("input not found: " + input);
    const auto ds = wave::read_dataset(input);
    require_length(ds.segments(), classify::kSequenceLength);
    const auto report = classify::evaluate(lstm, ds);
    write_json(dir / "report.json", with_provenance(classify::to_json(report), cfg));
    write_confusions(dir, report);
    write_config(dir, cfg);
  }
};

struct ClassifySweepCmd {
  Common common;
  std::string model;
  SignalOptions signal;
  std::vector<std::string> sirs{"0", "5", "10", "15", "20", "25", "30"};
  std::size_t segments_per_point = 150;

  void attach(CLI::App* parent) {
    auto* cmd = parent->add_subcommand("sweep", "Accuracy and RMSE against SIR");
    add_common(cmd, common);
    cmd->add_option("--model", model, "Classifier model.json")->required();
    signal.add(cmd);
    cmd->add_option("--sir", sirs, "SIR points in dB")->delimiter(',')->capture_default_str();
    cmd->add_option("--segments-per-point", segments_per_point, "Segments per class and SIR")->capture_default_str();
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    const auto lstm = load_lstm(model);
    const auto dir = prepare_out(common.out);
    auto params = signal.to_json();
    params["model"] = model;
    params["sir"] = sirs;
    params["segments_per_point"] = segments_per_point;
    const auto cfg = envelope("classify sweep", common, params);
    if (signal.num_samples != classify::kSequenceLength) {
      throw DataError("classifier expects " + std::to_string(classify::kSequenceLength) + "-sample segments");
    }
    if (segments_per_point == 0) throw UsageError("segments-per-point must be positive");
    const auto classes = signal.class_specs();
    const auto sir_list = parse_sirs(sirs);
    const auto report = classify::sir_sweep(lstm, classes, signal.spec(signal.intended), sir_list, segments_per_point,
                                            common.seed, signal.snr_db);
    std::ostringstream csv;
    classify::write_sweep_csv(csv, report);
    write_text(dir / "sweep.csv", csv.str());
    write_json(dir / "report.json", with_provenance(classify::to_json(report), cfg));
    write_confusions(dir, report);
    write_config(dir, cfg);
  }
};

// ---------------------------------------------------------------- psd

struct PsdCmd {
  Common common;
  std::string input;
  std::size_t nfft = 512;
  double overlap = 0.5;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("psd", "Welch PSD of a capture as CSV");
    add_common(cmd, common);
    cmd->add_option("--input", input, "cf32 capture")->required();
    cmd->add_option("--nfft", nfft, "FFT length")->capture_default_str();
    cmd->add_option("--overlap", overlap, "Segment overlap fraction")->capture_default_str();
    cmd->callback([this, cmd] { run(cmd); });
  }

  void run(CLI::App* cmd) {
    apply_config(cmd, common.config);
    if (input.empty() || !fs::exists(input)) throw UsageError("input not found: " + input);
    const auto capture = read_iq_file(input);
    const auto dir = prepare_out(common.out);
    const auto cfg = envelope("psd", common, json{{"input", input}, {"nfft", nfft}, {"overlap", overlap}});
    PsdEstimate psd;
    try {
      psd = welch_psd(capture, nfft, overlap);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::ostringstream csv;
    write_psd_csv(csv, psd);
    write_text(dir / "psd.csv", csv.str());
    write_config(dir, cfg);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RF interference synthesis, detection and classification"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  SynthCmd synth;
  synth.attach(app);
  auto* detect_cmd = app.add_subcommand("detect", "Autoencoder interference detection");
  detect_cmd->require_subcommand(1);
  DetectTrainCmd detect_train;
  DetectCalibrateCmd detect_calibrate;
  DetectRunCmd detect_run;
  detect_train.attach(detect_cmd);
  detect_calibrate.attach(detect_cmd);
  detect_run.attach(detect_cmd);
  auto* classify_cmd = app.add_subcommand("classify", "LSTM interference classification");
  classify_cmd->require_subcommand(1);
  ClassifyTrainCmd classify_train;
  ClassifyEvalCmd classify_eval;
  ClassifySweepCmd classify_sweep;
  classify_train.attach(classify_cmd);
  classify_eval.attach(classify_cmd);
  classify_sweep.attach(classify_cmd);
  PsdCmd psd;
  psd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IqFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const classify::LabelMismatch& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const detect::DegenerateDistribution& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return detect_run.detected ? kExitDetected : kExitOk;
}
