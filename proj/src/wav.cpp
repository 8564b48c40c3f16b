#include "fsgcc/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace fsgcc {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wav file: " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw std::runtime_error("not a RIFF file: " + path);
  read_u32(in);  // file size
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw std::runtime_error("not a WAVE file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  WavData out;
  bool got_fmt = false;

  while (in.read(tag, 4)) {
    const uint32_t chunk_size = read_u32(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      got_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!got_fmt) throw std::runtime_error("wav data before fmt chunk: " + path);
      if (channels != 1) throw std::runtime_error("only mono wav supported: " + path);
      std::vector<char> raw(chunk_size);
      in.read(raw.data(), chunk_size);
      if (!in) throw std::runtime_error("short wav read: " + path);

      if (format == 1 && bits == 16) {
        const size_t count = chunk_size / 2;
        out.samples.resize(count);
        for (size_t i = 0; i < count; ++i) {
          int16_t s;
          std::memcpy(&s, raw.data() + 2 * i, 2);
          out.samples[i] = s / 32768.0;
        }
      } else if (format == 3 && bits == 32) {
        const size_t count = chunk_size / 4;
        out.samples.resize(count);
        for (size_t i = 0; i < count; ++i) {
          float s;
          std::memcpy(&s, raw.data() + 4 * i, 4);
          out.samples[i] = s;
        }
      } else {
        throw std::runtime_error("unsupported wav encoding (need PCM16 or float32): " + path);
      }
      out.fs = sample_rate;
      return out;
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("wav file has no data chunk: " + path);
}

void write_wav_float32(const std::string& path, const Eigen::VectorXd& samples, double fs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write wav file: " + path);

  const uint32_t data_bytes = static_cast<uint32_t>(samples.size()) * 4;
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 3);  // IEEE float
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(fs));
  write_u32(out, static_cast<uint32_t>(fs) * 4);
  write_u16(out, 4);
  write_u16(out, 32);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const float s = static_cast<float>(samples[i]);
    out.write(reinterpret_cast<const char*>(&s), 4);
  }
  if (!out) throw std::runtime_error("wav write failed: " + path);
}

}  // namespace fsgcc
