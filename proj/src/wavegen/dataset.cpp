#include "rfim/wavegen/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rfim/iqcore/iq_file.hpp"
#include "rfim/iqcore/random.hpp"
#include "rfim/wavegen/mixer.hpp"

namespace rfim::wave {

std::vector<IqSegment> LabeledDataset::segments() const {
  std::vector<IqSegment> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.segment);
  return out;
}

LabeledDataset build_dataset(std::span<const WaveformSpec> classes, const WaveformSpec& intended,
                             std::span<const double> sir_list_db, std::size_t segments_per_point,
                             std::uint64_t seed, double snr_db) {
  if (classes.empty()) throw std::invalid_argument("build_dataset: no interference classes");
  if (sir_list_db.empty()) throw std::invalid_argument("build_dataset: empty SIR list");

  LabeledDataset out;
  out.items.reserve(classes.size() * sir_list_db.size() * segments_per_point);
  std::uint64_t counter = 0;
  for (const double sir : sir_list_db) {
    for (std::size_t round = 0; round < segments_per_point; ++round) {
      for (const auto& cls : classes) {
        const std::uint64_t seg_seed = derive_seed(seed, counter++);
        WaveformSpec x_spec = intended;
        x_spec.seed = derive_seed(seg_seed, 1);
        WaveformSpec i_spec = cls;
        i_spec.seed = derive_seed(seg_seed, 2);
        i_spec.num_samples = intended.num_samples;
        i_spec.sample_rate_hz = intended.sample_rate_hz;

        const auto mixed = mix(generate(x_spec), generate(i_spec), MixSpec{snr_db, sir, 0.0},
                               derive_seed(seg_seed, 3));
        out.items.push_back({mixed.received, std::string(class_label(cls.kind)), sir, seg_seed});
      }
    }
  }
  return out;
}

LabeledDataset build_clean_dataset(const WaveformSpec& intended, std::size_t count, std::uint64_t seed,
                                   double snr_db) {
  LabeledDataset out;
  out.items.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t seg_seed = derive_seed(seed, k);
    WaveformSpec x_spec = intended;
    x_spec.seed = derive_seed(seg_seed, 1);
    out.items.push_back({add_noise(generate(x_spec), snr_db, derive_seed(seg_seed, 3)),
                         std::string(kCleanLabel), kNoInterference, seg_seed});
  }
  return out;
}

void shuffle(LabeledDataset& dataset, std::uint64_t seed) {
  Rng rng(seed);
  rng.shuffle(dataset.items);
}

void write_dataset(const std::filesystem::path& dir, const LabeledDataset& dataset) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < dataset.items.size(); ++k) {
    const auto& it = dataset.items[k];
    char name[32];
    std::snprintf(name, sizeof name, "seg_%06zu.cf32", k);
    write_iq_file(dir / name, it.segment);
    nlohmann::ordered_json rec;
    rec["class"] = it.label;
    if (std::isfinite(it.sir_db)) {
      rec["sir_db"] = it.sir_db;
    } else {
      rec["sir_db"] = "inf";
    }
    rec["seed"] = it.seed;
    rec["file"] = name;
    records.push_back(std::move(rec));
  }
  std::ofstream os(dir / "manifest.json", std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  os << records.dump(1) << '\n';
}

LabeledDataset read_dataset(const std::filesystem::path& manifest) {
  std::ifstream is(manifest);
  if (!is) throw IqFileError("cannot open manifest " + manifest.string());
  nlohmann::json records;
  try {
    is >> records;
  } catch (const nlohmann::json::exception& e) {
    throw IqFileError("unparsable manifest " + manifest.string() + ": " + e.what());
  }
  if (!records.is_array()) throw IqFileError("manifest must be a JSON array: " + manifest.string());

  const auto base = manifest.parent_path();
  LabeledDataset out;
  out.items.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.is_object() || !rec.contains("class") || !rec.contains("sir_db") || !rec.contains("seed") ||
        !rec.contains("file")) {
      throw IqFileError("manifest record missing fields in " + manifest.string());
    }
    double sir = kNoInterference;
    if (rec["sir_db"].is_number()) {
      sir = rec["sir_db"].get<double>();
    } else if (rec["sir_db"] != "inf") {
      throw IqFileError("manifest record has invalid sir_db");
    }
    out.items.push_back({read_iq_file(base / rec["file"].get<std::string>()), rec["class"].get<std::string>(),
                         sir, rec["seed"].get<std::uint64_t>()});
  }
  return out;
}

}  // namespace rfim::wave
