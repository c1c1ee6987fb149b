#include "rfim/iqcore/iq_file.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

namespace rfim {
namespace {

constexpr std::size_t kRecordBytes = 8;

void put_f32le(std::vector<unsigned char>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xFFu));
}

float get_f32le(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return std::bit_cast<float>(bits);
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

void write_iq_file(const std::filesystem::path& path, const IqSegment& segment) {
  std::vector<unsigned char> bytes;
  bytes.reserve(segment.size() * kRecordBytes);
  for (const auto& s : segment.samples()) {
    put_f32le(bytes, static_cast<float>(s.real()));
    put_f32le(bytes, static_cast<float>(s.imag()));
  }
  std::ofstream raw(path, std::ios::binary | std::ios::trunc);
  if (!raw) throw IqFileError("cannot open " + path.string() + " for writing");
  raw.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!raw) throw IqFileError("write failed: " + path.string());

  nlohmann::ordered_json meta;
  meta["format"] = "cf32le";
  meta["sample_rate_hz"] = segment.sample_rate_hz();
  meta["num_samples"] = segment.size();
  std::ofstream side(sidecar_path(path), std::ios::trunc);
  if (!side) throw IqFileError("cannot open " + sidecar_path(path).string() + " for writing");
  side << meta.dump() << '\n';
}

IqSegment read_iq_file(const std::filesystem::path& path) {
  std::ifstream raw(path, std::ios::binary);
  if (!raw) throw IqFileError("malformed IQ file: cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(raw)),
                                         std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % kRecordBytes != 0) {
    throw IqFileError("malformed IQ file: " + path.string() + " has " + std::to_string(bytes.size()) +
                      " bytes");
  }
  const std::size_t n = bytes.size() / kRecordBytes;

  std::ifstream side(sidecar_path(path));
  if (!side) throw IqFileError("missing metadata: " + sidecar_path(path).string());
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception&) {
    throw IqFileError("missing metadata: unparsable " + sidecar_path(path).string());
  }
  if (!meta.is_object() || meta.value("format", "") != "cf32le" || !meta.contains("sample_rate_hz") ||
      !meta["sample_rate_hz"].is_number() || !meta.contains("num_samples") ||
      !meta["num_samples"].is_number_unsigned()) {
    throw IqFileError("missing metadata: invalid sidecar " + sidecar_path(path).string());
  }
  const double rate = meta["sample_rate_hz"].get<double>();
  if (!(rate > 0.0)) throw IqFileError("missing metadata: non-positive sample rate");
  if (meta["num_samples"].get<std::size_t>() != n) {
    throw IqFileError("malformed IQ file: sidecar declares " + meta["num_samples"].dump() +
                      " samples, raw file holds " + std::to_string(n));
  }

  std::vector<cdouble> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* rec = bytes.data() + i * kRecordBytes;
    samples[i] = {get_f32le(rec), get_f32le(rec + 4)};
  }
  try {
    return {std::move(samples), rate};
  } catch (const std::invalid_argument& e) {
    throw IqFileError(std::string("malformed IQ file: ") + e.what());
  }
}

}  // namespace rfim
