// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/file_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "text_util.hpp"
#include "vradar/errors.hpp"

namespace vradar {

namespace {

constexpr std::size_t kHeaderBytes = 64;
constexpr std::size_t kMaxSamples = std::size_t{1} << 31;  // sanity cap on a cube

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}
  std::uint16_t u16() { return static_cast<std::uint16_t>(u(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(u(4)); }
  std::uint64_t u64() { return u(8); }
  double f64() { return std::bit_cast<double>(u(8)); }

 private:
  std::uint64_t u(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_cube(const DataCube& cube, const std::string& path) {
  if (cube.samples.size() != cube.sample_count()) {
    throw DataError("write_cube: cube dimensions do not match its config");
  }
  if (cube.timestamp_s < 0) throw DataError("write_cube: negative timestamp");

  std::string header;
  header.reserve(kHeaderBytes);
  header.append(kCubeMagic, 4);
  put_u32(header, kCubeVersion);
  put_u64(header, static_cast<std::uint64_t>(std::llround(cube.timestamp_s * 1e9)));
  put_u16(header, cube.sensor_id);
  put_u16(header, static_cast<std::uint16_t>(cube.config.n_tx));
  put_u16(header, static_cast<std::uint16_t>(cube.config.n_rx));
  put_u16(header, 0);  // reserved
  put_u32(header, static_cast<std::uint32_t>(cube.config.n_chirps));
  put_u32(header, static_cast<std::uint32_t>(cube.config.n_samples));
  put_f64(header, cube.config.carrier_frequency_hz);
  put_f64(header, cube.config.bandwidth_hz);
  put_f64(header, cube.config.chirp_duration_s);
  put_f64(header, cube.config.sample_rate_hz);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::string payload;
  payload.reserve(cube.samples.size() * 8);
  if constexpr (std::endian::native == std::endian::little) {
    payload.assign(reinterpret_cast<const char*>(cube.samples.data()), cube.samples.size() * 8);
  } else {
    for (const auto& s : cube.samples) {
      put_u32(payload, std::bit_cast<std::uint32_t>(s.real()));
      put_u32(payload, std::bit_cast<std::uint32_t>(s.imag()));
    }
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed: " + path);
}

DataCube read_cube(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open file: " + path);
  const auto file_size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  if (file_size < kHeaderBytes) throw DataError("truncated_payload: header incomplete in " + path);

  std::vector<unsigned char> raw(file_size);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(file_size))) {
    throw IoError("read failed: " + path);
  }

  if (std::memcmp(raw.data(), kCubeMagic, 4) != 0) {
    throw DataError("bad_magic: not a cube file: " + path);
  }
  Reader rd(raw.data() + 4, file_size - 4);
  const std::uint32_t version = rd.u32();
  if (version != kCubeVersion) {
    throw DataError("bad_version: unsupported cube version " + std::to_string(version));
  }

  DataCube cube;
  cube.timestamp_s = static_cast<double>(rd.u64()) * 1e-9;
  cube.sensor_id = rd.u16();
  cube.config.n_tx = rd.u16();
  cube.config.n_rx = rd.u16();
  rd.u16();  // reserved
  cube.config.n_chirps = rd.u32();
  cube.config.n_samples = rd.u32();
  cube.config.carrier_frequency_hz = rd.f64();
  cube.config.bandwidth_hz = rd.f64();
  cube.config.chirp_duration_s = rd.f64();
  cube.config.sample_rate_hz = rd.f64();

  if (cube.config.n_tx == 0 || cube.config.n_rx == 0 || cube.config.n_chirps == 0 ||
      cube.config.n_samples == 0) {
    throw DataError("bad_dims: zero cube dimension in " + path);
  }
  const std::size_t count = cube.config.n_chirps * cube.config.n_rx * cube.config.n_samples;
  if (count > kMaxSamples || count / cube.config.n_rx / cube.config.n_samples != cube.config.n_chirps) {
    throw DataError("dim_overflow: implausible cube dimensions in " + path);
  }
  const std::size_t expected = kHeaderBytes + count * 8;
  if (file_size < expected) {
    std::ostringstream msg;
    msg << "truncated_payload: " << path << " has " << file_size << " bytes, expected "
        << expected;
    throw DataError(msg.str());
  }
  if (file_size > expected) {
    throw DataError("trailing_bytes: unexpected data after payload in " + path);
  }

  cube.samples.resize(count);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(cube.samples.data(), raw.data() + kHeaderBytes, count * 8);
  } else {
    Reader pr(raw.data() + kHeaderBytes, count * 8);
    for (auto& s : cube.samples) {
      const auto re = std::bit_cast<float>(pr.u32());
      const auto im = std::bit_cast<float>(pr.u32());
      s = {re, im};
    }
  }
  return cube;
}

void write_cloud(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db\n";
  out.precision(10);
  for (const auto& p : cloud.points) {
    out << cloud.frame << "," << cloud.timestamp_s << "," << cloud.sensor_id << "," << p.x << ","
        << p.y << "," << p.z << "," << p.v_r_mps << "," << p.power_db << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

PointCloud read_cloud(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw DataError("cloud csv: empty file: " + path);
  const std::string expected = "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db";
  if (detail::trim(lines[0]) != expected) {
    throw DataError("cloud csv: unknown column layout in " + path + " (want '" + expected + "')");
  }
  PointCloud cloud;
  bool first = true;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto t = detail::trim(lines[i]);
    if (t.empty()) continue;
    const auto cols = detail::split(t, ',');
    const std::string loc = path + ":" + std::to_string(i + 1);
    if (cols.size() != 8) throw DataError("cloud csv: malformed row at " + loc);
    const std::string what = "row at " + loc;
    const auto frame = detail::parse_int<DataError>(cols[0], what);
    const auto time_s = detail::parse_double<DataError>(cols[1], what);
    const auto sensor = detail::parse_int<DataError>(cols[2], what);
    if (first) {
      cloud.frame = static_cast<std::uint32_t>(frame);
      cloud.timestamp_s = time_s;
      cloud.sensor_id = static_cast<std::uint16_t>(sensor);
      first = false;
    }
    RadarPoint p;
    p.x = detail::parse_double<DataError>(cols[3], what);
    p.y = detail::parse_double<DataError>(cols[4], what);
    p.z = detail::parse_double<DataError>(cols[5], what);
    p.v_r_mps = detail::parse_double<DataError>(cols[6], what);
    p.power_db = detail::parse_double<DataError>(cols[7], what);
    p.range_m = std::hypot(p.x, p.y, p.z);
    p.azimuth_deg = std::atan2(p.y, p.x) * 180.0 / 3.14159265358979323846;
    cloud.points.push_back(p);
  }
  return cloud;
}

}  // namespace vradar
