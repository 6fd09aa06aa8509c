#pragma once

// Checkpoint file layout (all integers little-endian):
//
//   "EDNC"                       magic, 4 bytes
//   u32 version                  = 1
//   u32 input_channels, u32 input_length
//   u32 M, M bytes               metadata, UTF-8 key=value lines
//   u32 N                        layer count
//   N x layer record:
//     u8  kind                   1 conv1d, 2 relu, 3 avgpool2, 4 flatten, 5 dense
//     u16 L, L bytes             layer name
//     u32 units, u32 kernel
//     u32 R, R x u32             weight shape (R = 0 for parameter-free layers)
//     u32 bias_len
//   u64 P                        number of float32 values that follow
//   P x f32                      weights then bias of every layer, in layer order
//
// Nothing may follow the payload.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "eegdn/engine/sequential.hpp"
#include "eegdn/error.hpp"
#include "eegdn/keyvalue.hpp"
#include "eegdn/zoo/builders.hpp"

namespace eegdn::zoo {

inline constexpr char kCheckpointMagic[4] = {'E', 'D', 'N', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelGraph model;
  KeyValues metadata;
};

namespace detail {

class ByteWriter {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  template <typename T>
  void le(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) buf_.push_back(static_cast<std::uint8_t>((u >> (8 * i)) & 0xFF));
  }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v)); }
  void str16(const std::string& s) {
    le(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void str32(const std::string& s) {
    le(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  const std::vector<std::uint8_t>& buffer() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}

  void need(std::size_t n, const std::string& field) const {
    if (buf_.size() - pos_ < n) {
      throw FormatError("checkpoint: truncated while reading " + field + " at byte offset " + std::to_string(pos_));
    }
  }
  template <typename T>
  T le(const std::string& field) {
    need(sizeof(T), field);
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<std::make_unsigned_t<T>>(buf_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  std::string str(std::size_t n, const std::string& field) {
    need(n, field);
    std::string s(reinterpret_cast<const char*>(buf_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  float f32(const std::string& field) { return std::bit_cast<float>(le<std::uint32_t>(field)); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& buf_;
  std::size_t pos_ = 0;
};

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Serializes `model` with `metadata`; the architecture tag and widths are added to the metadata.
inline std::vector<std::uint8_t> encode_checkpoint(const ModelGraph& model, const KeyValues& metadata) {
  KeyValues meta = metadata;
  meta.set("arch", model.arch);
  meta.set("width_scale", model.width_scale);
  std::string widths;
  for (std::size_t i = 0; i < model.widths.size(); ++i) widths += (i ? "," : "") + std::to_string(model.widths[i]);
  meta.set("widths", widths);

  const auto& net = model.net;
  detail::ByteWriter w;
  w.bytes(kCheckpointMagic, 4);
  w.le(kCheckpointVersion);
  w.le(static_cast<std::uint32_t>(net.input_shape().channels));
  w.le(static_cast<std::uint32_t>(net.input_shape().length));
  w.str32(meta.to_text());
  w.le(static_cast<std::uint32_t>(net.layers().size()));
  std::uint64_t payload = 0;
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const auto& l = net.layers()[i];
    const auto& p = net.params()[i];
    w.le(static_cast<std::uint8_t>(l.spec.kind));
    w.str16(l.name);
    w.le(static_cast<std::uint32_t>(l.spec.units));
    w.le(static_cast<std::uint32_t>(l.spec.kernel));
    w.le(static_cast<std::uint32_t>(p.weight_shape.size()));
    for (auto d : p.weight_shape) w.le(static_cast<std::uint32_t>(d));
    w.le(static_cast<std::uint32_t>(p.bias.size()));
    payload += p.count();
  }
  w.le(payload);
  for (const auto& p : net.params()) {
    for (double v : p.weights) w.f32(static_cast<float>(v));
    for (double v : p.bias) w.f32(static_cast<float>(v));
  }
  return w.buffer();
}

inline Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader r(bytes);
  if (r.str(4, "magic") != std::string(kCheckpointMagic, 4)) throw FormatError("checkpoint: bad magic (expected EDNC)");
  const auto version = r.le<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto in_ch = r.le<std::uint32_t>("input_channels");
  const auto in_len = r.le<std::uint32_t>("input_length");
  const auto meta_len = r.le<std::uint32_t>("metadata length");
  Checkpoint ck;
  try {
    ck.metadata = KeyValues::parse(r.str(meta_len, "metadata"));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint: metadata: ") + e.what());
  }
  const auto n_layers = r.le<std::uint32_t>("layer count");

  struct Row {
    engine::LayerSpec spec;
    std::string name;
    std::vector<std::size_t> weight_shape;
    std::size_t bias_len;
  };
  std::vector<Row> rows;
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    const std::string f = "layer[" + std::to_string(i) + "]";
    Row row;
    const auto kind = r.le<std::uint8_t>(f + ".kind");
    if (kind < 1 || kind > 5) throw FormatError("checkpoint: " + f + ".kind: unknown layer kind " + std::to_string(kind));
    row.spec.kind = static_cast<engine::LayerKind>(kind);
    const auto name_len = r.le<std::uint16_t>(f + ".name");
    row.name = r.str(name_len, f + ".name");
    row.spec.units = r.le<std::uint32_t>(f + ".units");
    row.spec.kernel = r.le<std::uint32_t>(f + ".kernel");
    const auto rank = r.le<std::uint32_t>(f + ".shape");
    if (rank > 3) throw FormatError("checkpoint: " + f + ".shape: rank " + std::to_string(rank) + " too large");
    for (std::uint32_t d = 0; d < rank; ++d) row.weight_shape.push_back(r.le<std::uint32_t>(f + ".shape"));
    row.bias_len = r.le<std::uint32_t>(f + ".bias_len");
    rows.push_back(std::move(row));
  }

  std::vector<engine::LayerSpec> specs;
  for (const auto& row : rows) specs.push_back(row.spec);
  engine::Sequential net;
  try {
    net = engine::Sequential({in_ch, in_len}, specs);
  } catch (const ShapeError& e) {
    throw FormatError(std::string("checkpoint: layer table does not compose: ") + e.what());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string f = "layer[" + std::to_string(i) + "]";
    const auto& p = net.params()[i];
    if (rows[i].weight_shape != p.weight_shape || rows[i].bias_len != p.bias.size()) {
      throw FormatError("checkpoint: " + f + ".shape: shape table does not match the layer chain");
    }
    if (rows[i].name != net.layers()[i].name) {
      throw FormatError("checkpoint: " + f + ".name: expected '" + net.layers()[i].name + "', got '" + rows[i].name + "'");
    }
  }

  const auto payload = r.le<std::uint64_t>("payload count");
  if (payload != net.parameter_count()) {
    throw FormatError("checkpoint: payload count " + std::to_string(payload) + " does not match shape table (" +
                      std::to_string(net.parameter_count()) + ")");
  }
  if (r.remaining() != payload * 4) {
    throw FormatError("checkpoint: payload: expected " + std::to_string(payload * 4) + " bytes, found " +
                      std::to_string(r.remaining()));
  }
  for (auto& p : net.params()) {
    for (double& v : p.weights) v = r.f32("payload");
    for (double& v : p.bias) v = r.f32("payload");
    for (double v : p.weights) {
      if (!std::isfinite(v)) throw FormatError("checkpoint: payload: non-finite parameter");
    }
    for (double v : p.bias) {
      if (!std::isfinite(v)) throw FormatError("checkpoint: payload: non-finite parameter");
    }
  }

  ck.model.arch = ck.metadata.get("arch").value_or("custom");
  ck.model.width_scale = ck.metadata.contains("width_scale") ? ck.metadata.require_double("width_scale") : 1.0;
  if (auto ws = ck.metadata.get("widths"); ws && !ws->empty()) {
    std::size_t start = 0;
    while (start <= ws->size()) {
      const auto comma = ws->find(',', start);
      const auto tok = ws->substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        ck.model.widths.push_back(std::stoul(tok));
      } catch (const std::exception&) {
        throw FormatError("checkpoint: metadata.widths: not an integer list");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  ck.model.net = std::move(net);
  return ck;
}

inline void save_checkpoint(const ModelGraph& model, const KeyValues& metadata, const std::filesystem::path& path) {
  detail::write_file(path, encode_checkpoint(model, metadata));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(detail::read_file(path));
}

}  // namespace eegdn::zoo
