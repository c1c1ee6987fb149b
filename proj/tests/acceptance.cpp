// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rfim/autodetect/detector.hpp"
#include "rfim/iqcore/random.hpp"
#include "rfim/iqcore/spectral.hpp"
#include "rfim/lstmclass/classifier.hpp"
#include "rfim/wavegen/mixer.hpp"
#include "test_support.hpp"

using namespace rfim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void note(Outcome& o, bool ok, const std::string& what) {
    if (!ok) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

wave::WaveformSpec spec_of(wave::WaveformKind k, std::size_t n = 512) {
  wave::WaveformSpec s;
  s.kind = k;
  s.num_samples = n;
  return s;
}

std::vector<wave::WaveformSpec> interferer_classes() {
  return {spec_of(wave::WaveformKind::lte_like), spec_of(wave::WaveformKind::umts_like),
          spec_of(wave::WaveformKind::gsm_like)};
}

double max_rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double den = std::max({std::abs(a[i]), std::abs(b[i]), 1e-6});
    worst = std::max(worst, std::abs(a[i] - b[i]) / den);
  }
  return worst;
}

// ------------------------------------------------------------------ 1

Outcome gradient_correctness() {
  Outcome o;
  Report r;
  double ae_worst = 0.0, lstm_worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed + 500);
    const auto d = static_cast<std::size_t>(4 + rng.below(29));
    const auto h = static_cast<std::size_t>(1 + rng.below(8));
    RowMatrix x(static_cast<Eigen::Index>(3 + rng.below(6)), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(0.1, 0.9);

    // Each term alone, then all together.
    const detect::AutoencoderHyper variants[] = {
        {h, 0.0, 0.15, 0.0}, {h, 0.05, 0.15, 0.0}, {h, 0.0, 0.15, 0.7}, {h, 0.02, 0.15, 0.4}};
    for (const auto& hyper : variants) {
      auto m = detect::SparseAutoencoder::initialized(d, hyper, seed);
      for (Eigen::Index i = 0; i < m.b_enc.size(); ++i) m.b_enc[i] = rng.uniform(-0.5, 0.5);
      const Eigen::VectorXd theta = m.flatten();
      const auto f = [&](const Eigen::VectorXd& t) {
        auto w = m;
        w.assign(t);
        return detect::ae_loss_and_grad(w, x).loss;
      };
      ae_worst = std::max(ae_worst, max_rel(detect::ae_loss_and_grad(m, x).gradient, test::central_difference(theta, f)));
    }

    auto lstm = classify::LstmModel::initialized(4, 4, classify::default_labels(), seed);
    Eigen::VectorXd theta = lstm.flatten();
    for (auto& v : theta) v = rng.uniform(-0.8, 0.8);
    lstm.assign(theta);
    std::vector<classify::FeatureMatrix> xs(2, classify::FeatureMatrix(4, 8));
    for (auto& fm : xs) {
      for (Eigen::Index i = 0; i < fm.size(); ++i) fm.data()[i] = rng.gaussian();
    }
    const std::vector<const classify::FeatureMatrix*> ptrs{&xs[0], &xs[1]};
    const std::vector<int> y{static_cast<int>(seed % 3), static_cast<int>((seed + 1) % 3)};
    const auto loss = [&](const Eigen::VectorXd& t) {
      auto w = lstm;
      w.assign(t);
      const auto p = classify::forward_batch(w, ptrs);
      return -(std::log(p(y[0], 0)) + std::log(p(y[1], 1))) / 2.0;
    };
    classify::ForwardCache cache;
    classify::forward_batch(lstm, ptrs, &cache);
    const auto g = classify::lstm_backward(lstm, cache, y).gradient;
    lstm_worst = std::max(lstm_worst, max_rel(g, test::central_difference(theta, loss)));
  }
  r.note(o, ae_worst < 1e-4, "autoencoder gradient");
  r.note(o, lstm_worst < 1e-4, "LSTM gradient");
  o.detail = "max rel err AE " + fmt("%.2e", ae_worst) + ", LSTM " + fmt("%.2e", lstm_worst) +
             " over 10 instances" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ------------------------------------------------------------------ 2

Outcome moment_oracle() {
  Outcome o;
  Report r;
  Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(9'999);
    std::vector<double> v(n);
    test::StreamingMoments oracle;
    for (auto& x : v) {
      x = std::exp(rng.gaussian()) * 1e-2;
      oracle.add(x);
    }
    const auto m = detect::moments(v);
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    worst = std::max({worst, rel(m.mean, oracle.mean), rel(m.variance, oracle.variance()),
                      rel(*m.kurtosis, oracle.kurtosis())});
    if (n > 2) worst = std::max(worst, rel(*m.skewness, oracle.skewness()));
  }
  std::vector<double> g(100'000);
  for (auto& x : g) x = rng.gaussian();
  const auto mg = detect::moments(g);
  r.note(o, worst < 1e-12, "oracle agreement");
  r.note(o, std::abs(*mg.skewness) < 0.1, "Gaussian skewness");
  r.note(o, std::abs(*mg.kurtosis - 3.0) < 0.15, "Gaussian kurtosis");
  o.detail = "max rel err " + fmt("%.2e", worst) + ", Gaussian skew " + fmt("%.4f", *mg.skewness) + " kurt " +
             fmt("%.4f", *mg.kurtosis) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ------------------------------------------------------------------ 3

Outcome detection_direction() {
  Outcome o;
  Report r;
  const auto intended = spec_of(wave::WaveformKind::dvbs2_like);
  auto tone = spec_of(wave::WaveformKind::tone);
  tone.tone_offset_hz = 2e6;  // inside the intended band
  const std::vector<wave::WaveformSpec> tone_class{tone};
  const std::vector<double> sir{10.0};

  std::vector<double> d_mean, d_var, d_skew;
  int clean_ok = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto train = wave::build_clean_dataset(intended, 200, derive_seed(s, 1)).segments();
    const auto cal_set = wave::build_clean_dataset(intended, 200, derive_seed(s, 2)).segments();
    const auto clean = wave::build_clean_dataset(intended, 200, derive_seed(s, 3)).segments();
    const auto mixed = wave::build_dataset(tone_class, intended, sir, 200, derive_seed(s, 4), 20.0).segments();
    detect::AutoencoderTrainConfig cfg;
    cfg.seed = s;
    const auto model = detect::train_autoencoder(train, cfg).model;
    const auto cal = detect::calibrate(model, cal_set);
    const auto on_clean = detect::detect(model, cal, clean);
    const auto on_mixed = detect::detect(model, cal, mixed);
    d_mean.push_back(on_mixed.relative_increase.mean);
    d_var.push_back(on_mixed.relative_increase.variance);
    d_skew.push_back(on_mixed.relative_increase.skewness);
    clean_ok += on_clean.interference_detected ? 0 : 1;
    std::printf("      seed %llu: baseline skew %+.3f | interfered dmean %+.3f dvar %+.3f dskew %+.3f | clean dvar %+.3f dskew %+.3f -> %s\n",
                static_cast<unsigned long long>(s), *cal.baseline.skewness, on_mixed.relative_increase.mean,
                on_mixed.relative_increase.variance, on_mixed.relative_increase.skewness,
                on_clean.relative_increase.variance, on_clean.relative_increase.skewness,
                on_clean.interference_detected ? "flagged" : "clear");
  }
  const double mv = median(d_var), ms = median(d_skew), mm = median(d_mean);
  r.note(o, mv >= 0.20, "median variance increase >= +20%");
  r.note(o, ms >= 0.50, "median skewness increase >= +50%");
  r.note(o, ms > mm, "skewness increase exceeds mean increase");
  r.note(o, clean_ok >= 4, "clean holdout clear in >= 4 of 5 seeds");
  o.detail = "median dvar " + fmt("%+.1f%%", 100 * mv) + ", dskew " + fmt("%+.1f%%", 100 * ms) + ", dmean " +
             fmt("%+.1f%%", 100 * mm) + ", clean clear " + std::to_string(clean_ok) + "/5" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ------------------------------------------------------------------ 4, 5, 6

struct ClassifierRun {
  classify::LstmModel model;
  double train_seconds = 0.0;
};

ClassifierRun train_reference_classifier() {
  const auto classes = interferer_classes();
  const auto intended = spec_of(wave::WaveformKind::dvbs2_like);
  const std::vector<double> sirs{0.0, 5.0, 10.0};
  const auto train = wave::build_dataset(classes, intended, sirs, 200, 4242);
  classify::ClassifierTrainConfig cfg;  // library defaults
  cfg.seed = 7;
  const auto t0 = std::chrono::steady_clock::now();
  auto result = classify::train_classifier(train, cfg, [](const classify::EpochRecord& e) {
    std::printf("      epoch %2zu loss %.4f held-out %.3f\n", e.epoch, e.train_loss, e.heldout_accuracy);
    std::fflush(stdout);
  });
  return {std::move(result.model),
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

Outcome low_sir_accuracy(const ClassifierRun& run) {
  Outcome o;
  const auto classes = interferer_classes();
  const std::vector<double> sir{0.0};
  const auto eval = wave::build_dataset(classes, spec_of(wave::WaveformKind::dvbs2_like), sir, 50, 9191);
  const auto report = classify::evaluate(run.model, eval);
  o.pass = report.overall.accuracy >= 0.90;
  o.detail = "accuracy at 0 dB " + fmt("%.3f", report.overall.accuracy) + " on " +
             std::to_string(report.overall.total) + " segments, training " + fmt("%.0f s", run.train_seconds);
  if (!o.pass) o.detail += "; failed: accuracy >= 0.90";
  return o;
}

std::vector<classify::ClassificationReport> sweeps(const classify::LstmModel& model) {
  const auto classes = interferer_classes();
  const std::vector<double> sirs{0.0, 10.0, 20.0, 30.0};
  std::vector<classify::ClassificationReport> out;
  for (std::uint64_t e = 0; e < 5; ++e) {
    out.push_back(classify::sir_sweep(model, classes, spec_of(wave::WaveformKind::dvbs2_like), sirs, 50,
                                      derive_seed(31337, e)));
  }
  return out;
}

Outcome sir_monotonicity(const std::vector<classify::ClassificationReport>& reports) {
  Outcome o;
  Report r;
  int acc_strict = 0, rmse_ok = 0;
  bool acc_slack = true;
  std::string per_seed;
  for (const auto& rep : reports) {
    const auto& lo = rep.per_sir.front().metrics;
    const auto& hi = rep.per_sir.back().metrics;
    acc_slack = acc_slack && lo.accuracy >= hi.accuracy - 0.02;
    acc_strict += lo.accuracy > hi.accuracy ? 1 : 0;
    rmse_ok += lo.rmse <= hi.rmse ? 1 : 0;
    per_seed += " [" + fmt("%.3f", lo.accuracy) + "/" + fmt("%.3f", hi.accuracy) + "]";
  }
  r.note(o, acc_slack, "accuracy(0) >= accuracy(30) - 0.02");
  r.note(o, acc_strict >= 4, "accuracy(0) > accuracy(30) in >= 4 of 5");
  r.note(o, rmse_ok >= 4, "rmse(0) <= rmse(30) in >= 4 of 5");
  o.detail = "acc(0)/acc(30) per seed" + per_seed + ", strict " + std::to_string(acc_strict) + "/5, rmse ordered " +
             std::to_string(rmse_ok) + "/5" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome confusion_identities(const classify::ClassificationReport& rep) {
  Outcome o;
  Report r;
  int checked = 0;
  for (const auto& p : rep.per_sir) {
    if (p.sir_db != 0.0 && p.sir_db != 20.0) continue;
    ++checked;
    const auto& m = p.metrics;
    std::size_t total = 0, trace = 0;
    for (std::size_t i = 0; i < m.confusion.size(); ++i) {
      std::size_t row = 0;
      for (auto v : m.confusion[i]) row += v;
      r.note(o, row == 50, "row sum equals truth count at " + fmt("%g dB", p.sir_db));
      total += row;
      trace += m.confusion[i][i];
    }
    r.note(o, total == 150 && total == m.total, "entries sum to evaluation size at " + fmt("%g dB", p.sir_db));
    r.note(o, static_cast<double>(trace) / static_cast<double>(total) == m.accuracy,
           "trace/total equals accuracy at " + fmt("%g dB", p.sir_db));
  }
  r.note(o, checked == 2, "both sweep points present");
  if (o.pass) o.detail = "sum, row sums and trace/total exact at 0 dB and 20 dB";
  return o;
}

// ------------------------------------------------------------------ 7

Outcome mixer_exactness() {
  Outcome o;
  Report r;
  double sir_err = 0.0, snr_err = 0.0;
  const wave::WaveformKind kinds[] = {wave::WaveformKind::lte_like, wave::WaveformKind::umts_like,
                                      wave::WaveformKind::gsm_like, wave::WaveformKind::tone};
  std::uint64_t seed = 1;
  for (auto kind : kinds) {
    for (double sir : {-5.0, 0.0, 10.0, 30.0}) {
      for (double snr : {0.0, 20.0}) {
        auto xs = spec_of(wave::WaveformKind::dvbs2_like, 100'000);
        xs.seed = seed++;
        auto is = spec_of(kind, 100'000);
        is.seed = seed++;
        is.tone_offset_hz = 3e6;
        const auto x = wave::generate(xs);
        const auto i = scaled(wave::generate(is), 2.5);
        const auto res = wave::mix(x, i, wave::MixSpec{snr, sir, 0.0}, seed++);
        const double px = measure_power(x).mean_power, pi = measure_power(i).mean_power;
        sir_err = std::max(sir_err, std::abs(10.0 * std::log10(px / (res.beta * pi)) - sir));
        const double g = std::sqrt(std::pow(10.0, snr / 10.0));
        std::vector<cdouble> w(x.size());
        for (std::size_t n = 0; n < w.size(); ++n) w[n] = res.received[n] - g * (x[n] + std::sqrt(res.beta) * i[n]);
        snr_err = std::max(snr_err, std::abs(10.0 * std::log10(g * g * px / mean_power(w)) - snr));
      }
    }
  }
  r.note(o, sir_err < 1e-9, "SIR within 1e-9 dB");
  r.note(o, snr_err <= 0.1, "SNR within 0.1 dB");
  o.detail = "max SIR err " + fmt("%.2e dB", sir_err) + ", max SNR err " + fmt("%.4f dB", snr_err) +
             " over 32 runs of 1e5 samples" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ------------------------------------------------------------------ 8

Outcome optimizer_suites() {
  Outcome o;
  Report r;
  Rng rng(8);
  Eigen::MatrixXd m(20, 20);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
  const Eigen::MatrixXd a = m * m.transpose() + Eigen::MatrixXd::Identity(20, 20);
  Eigen::VectorXd b(20);
  for (auto& v : b) v = rng.gaussian();
  const detect::Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = a * x - b;
    return 0.5 * x.dot(a * x) - b.dot(x);
  };
  detect::ScgOptions opt;
  opt.max_iters = 60;
  opt.grad_tol = 1e-6;
  const auto scg = detect::scg_minimize(f, Eigen::VectorXd::Zero(20), opt);
  r.note(o, scg.grad_inf_norm < 1e-6, "SCG gradient below 1e-6 within 60 iterations");

  Eigen::Matrix2d q;
  q << 4.0, 1.0, 1.0, 2.0;
  Eigen::VectorXd x(2);
  x << 2.0, -3.0;
  const double initial = 0.5 * x.dot(q * x);
  auto state = classify::AdamState::zeros(2);
  classify::AdamHyper hyper;
  hyper.learning_rate = 0.1;  // step scaled to the distance from the optimum (~3.6)
  for (int k = 0; k < 500; ++k) classify::adam_step(x, q * x, state, hyper);
  const double reduction = initial / (0.5 * x.dot(q * x));
  r.note(o, reduction >= 1e3, "Adam reduction >= 1e3");
  o.detail = "SCG |grad|inf " + fmt("%.2e", scg.grad_inf_norm) + " after " + std::to_string(scg.iterations) +
             " iterations, Adam reduction " + fmt("%.3g", reduction) + "x" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ------------------------------------------------------------------ 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cli(const std::string& args) {
  const std::string cmd = std::string(RFIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  Outcome o;
  Report r;
  const auto s = test::scratch_dir("acceptance_cli");
  const auto p = [&](const std::string& rel) { return (s / rel).string(); };
  struct Step {
    std::string name;
    std::string args;
  };
  const std::vector<Step> steps{
      {"synth", "synth --sir 0,10 --segments-per-point 6 --seed 3"},
      {"synth-clean", "synth --clean 60 --num-samples 64 --seed 4"},
      {"synth-tone", "synth --classes tone --sir 10 --segments-per-point 60 --num-samples 64 --seed 5"},
      {"psd", "psd --input " + p("synth-tone_a/seg_000000.cf32") + " --nfft 64"},
      {"detect-train", "detect train --input " + p("synth-clean_a/manifest.json") +
                           " --segment-length 64 --hidden 8 --max-iters 50 --seed 6"},
      {"detect-calibrate", "detect calibrate --model " + p("detect-train_a/model.json") + " --input " +
                               p("synth-clean_a/manifest.json")},
      {"detect-run", "detect run --model " + p("detect-train_a/model.json") + " --calibration " +
                         p("detect-calibrate_a/calibration.json") + " --input " + p("synth-tone_a/manifest.json")},
      {"classify-train", "classify train --input " + p("synth_a/manifest.json") +
                             " --hidden 6 --epochs 2 --batch-size 8 --quiet --seed 7"},
      {"classify-eval", "classify eval --model " + p("classify-train_a/model.json") + " --input " +
                            p("synth_a/manifest.json")},
      {"classify-sweep", "classify sweep --model " + p("classify-train_a/model.json") +
                             " --sir 0,20 --segments-per-point 3 --seed 8"},
  };
  std::string summary;
  for (const auto& step : steps) {
    const int a = cli(step.args + " --out " + p(step.name + "_a"));
    const int b = cli(step.args + " --out " + p(step.name + "_b"));
    bool same = a == b && (a == 0 || a == 10);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(s / (step.name + "_a"))) {
      ++files;
      same = same && slurp(e.path()) == slurp(s / (step.name + "_b") / e.path().filename());
    }
    same = same && files > 0;
    r.note(o, same, step.name + " rerun identical");
    summary += " " + step.name + (same ? "" : "(!)");
  }
  o.detail = "byte-identical reruns:" + summary + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ------------------------------------------------------------------ 10

Outcome dft_psd() {
  Outcome o;
  Report r;
  double worst = 0.0, parseval = 0.0;
  for (std::size_t n : {1u, 2u, 3u, 8u, 17u, 64u, 100u, 255u, 512u, 1024u}) {
    const auto x = test::random_samples(n, n);
    const auto fast = dft(x);
    worst = std::max(worst, test::max_rel_error(fast, test::naive_dft(x)));
    double et = 0.0, ef = 0.0;
    for (auto v : x) et += std::norm(v);
    for (auto v : fast) ef += std::norm(v);
    parseval = std::max(parseval, std::abs(ef / static_cast<double>(n) - et) / et);
  }
  r.note(o, worst < 1e-10, "DFT oracle");
  r.note(o, parseval < 1e-12, "Parseval");

  bool peaks = true;
  for (double offset : {-12.5e6, -3e6, 0.0, 1.953125e6, 7e6, 20e6}) {
    auto t = spec_of(wave::WaveformKind::tone, 8192);
    t.tone_offset_hz = offset;
    const auto psd = welch_psd(wave::generate(t), 512);
    const auto best = std::max_element(psd.power_db.begin(), psd.power_db.end()) - psd.power_db.begin();
    const double bin = 50e6 / 512;
    peaks = peaks && std::abs(psd.frequencies_hz[static_cast<std::size_t>(best)] - offset) <= bin / 2;
  }
  r.note(o, peaks, "tone PSD peak bin");
  o.detail = "DFT rel err " + fmt("%.2e", worst) + ", Parseval rel err " + fmt("%.2e", parseval) +
             ", tone peaks " + (peaks ? "at expected bins" : "misplaced") + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  const auto run = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  };

  run(1, "gradient correctness", gradient_correctness);
  run(2, "moment oracle equivalence", moment_oracle);
  run(3, "detection directional reproduction", detection_direction);

  ClassifierRun classifier;
  std::vector<classify::ClassificationReport> sweep_reports;
  run(4, "classification at low SIR", [&] {
    classifier = train_reference_classifier();
    return low_sir_accuracy(classifier);
  });
  run(5, "SIR monotonicity", [&] {
    sweep_reports = sweeps(classifier.model);
    return sir_monotonicity(sweep_reports);
  });
  run(6, "confusion-matrix identities", [&] { return confusion_identities(sweep_reports.front()); });
  run(7, "mixer exactness", mixer_exactness);
  run(8, "optimizer suites", optimizer_suites);
  run(9, "CLI determinism", cli_determinism);
  run(10, "DFT/PSD", dft_psd);

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
