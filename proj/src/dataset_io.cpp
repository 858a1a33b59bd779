#include "levysid/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "levysid/errors.hpp"

namespace levysid {

namespace {

constexpr std::array<char, 4> kMagic = {'L', 'S', 'I', 'D'};
constexpr std::uint8_t kBinaryVersion = 1;
constexpr std::string_view kCsvTag = "#levy-sid-pairs v1";

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }
}

template <typename T>
void put(std::string& buffer, T value) {
  value = to_little_endian(value);
  const char* p = reinterpret_cast<const char*>(&value);
  buffer.append(p, sizeof(T));
}

template <typename T>
T get(const std::string& buffer, std::size_t& offset) {
  if (offset + sizeof(T) > buffer.size()) {
    throw DataError("binary dataset truncated at byte " + std::to_string(offset));
  }
  T value;
  std::memcpy(&value, buffer.data() + offset, sizeof(T));
  offset += sizeof(T);
  return to_little_endian(value);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return contents;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("error writing '" + path + "'");
}

std::string encode_binary(const DatasetPair& data) {
  const std::size_t n = data.dimension();
  const std::size_t rows = data.size();
  std::string buffer;
  buffer.reserve(4 + 1 + 24 + rows * 2 * n * sizeof(double));
  buffer.append(kMagic.data(), kMagic.size());
  buffer.push_back(static_cast<char>(kBinaryVersion));
  put<std::uint64_t>(buffer, n);
  put<std::uint64_t>(buffer, rows);
  put<double>(buffer, data.h());
  for (std::size_t r = 0; r < rows; ++r) {
    for (double v : data.z_row(r)) put<double>(buffer, v);
    for (double v : data.x_row(r)) put<double>(buffer, v);
  }
  return buffer;
}

std::string encode_csv(const DatasetPair& data) {
  const std::size_t n = data.dimension();
  const std::size_t rows = data.size();
  std::string buffer;
  buffer.reserve(64 + rows * 2 * n * 24);
  buffer += std::string(kCsvTag) + " n=" + std::to_string(n) + " M=" + std::to_string(rows) +
            " h=" + format_double(data.h()) + "\n";
  std::array<char, 32> digits;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < 2 * n; ++c) {
      const double v = c < n ? data.z(r, c) : data.x(r, c - n);
      const auto res = std::to_chars(digits.data(), digits.data() + digits.size(), v);
      if (c > 0) buffer.push_back(',');
      buffer.append(digits.data(), res.ptr);
    }
    buffer.push_back('\n');
  }
  return buffer;
}

DatasetPair decode_binary(const std::string& buffer) {
  std::size_t offset = kMagic.size();
  const auto version = static_cast<std::uint8_t>(get<char>(buffer, offset));
  if (version != kBinaryVersion) {
    throw DataError("unsupported binary dataset version " + std::to_string(version));
  }
  const auto n = get<std::uint64_t>(buffer, offset);
  const auto rows = get<std::uint64_t>(buffer, offset);
  const double h = get<double>(buffer, offset);
  if (n == 0) throw DataError("binary dataset header: dimension must be at least 1");
  const std::size_t remaining = buffer.size() - offset;
  if (rows > remaining / (2 * n * sizeof(double)) || remaining != rows * 2 * n * sizeof(double)) {
    throw DataError("binary dataset body holds " + std::to_string(remaining) + " bytes, header promises " +
                    std::to_string(rows) + " rows of dimension " + std::to_string(n));
  }
  std::vector<double> z(rows * n), x(rows * n);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < n; ++i) z[r * n + i] = get<double>(buffer, offset);
    for (std::size_t i = 0; i < n; ++i) x[r * n + i] = get<double>(buffer, offset);
  }
  return DatasetPair(n, h, std::move(z), std::move(x));
}

struct CsvHeader {
  std::size_t n = 0;
  std::size_t rows = 0;
  double h = 0.0;
};

CsvHeader parse_csv_header(std::string_view line) {
  auto bad = [&](const std::string& why) -> DataError {
    return DataError("line 1: malformed dataset header (" + why + ")");
  };
  if (line.substr(0, kCsvTag.size()) != kCsvTag) throw bad("expected '" + std::string(kCsvTag) + "'");
  line.remove_prefix(kCsvTag.size());
  CsvHeader header;
  bool seen_n = false, seen_m = false, seen_h = false;
  while (!line.empty()) {
    if (line.front() == ' ') {
      line.remove_prefix(1);
      continue;
    }
    const auto end = std::min(line.find(' '), line.size());
    const std::string_view field = line.substr(0, end);
    line.remove_prefix(end);
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw bad("field without '='");
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    const char* first = value.data();
    const char* last = value.data() + value.size();
    std::from_chars_result res{};
    if (key == "n") {
      res = std::from_chars(first, last, header.n);
      seen_n = true;
    } else if (key == "M") {
      res = std::from_chars(first, last, header.rows);
      seen_m = true;
    } else if (key == "h") {
      res = std::from_chars(first, last, header.h);
      seen_h = true;
    } else {
      throw bad("unknown field '" + std::string(key) + "'");
    }
    if (res.ec != std::errc() || res.ptr != last) throw bad("bad value for " + std::string(key));
  }
  if (!seen_n || !seen_m || !seen_h) throw bad("n, M and h are required");
  if (header.n == 0) throw bad("n must be at least 1");
  if (!(header.h > 0.0) || !std::isfinite(header.h)) throw bad("h must be positive");
  return header;
}

DatasetPair decode_csv(const std::string& buffer) {
  std::size_t pos = buffer.find('\n');
  if (pos == std::string::npos) pos = buffer.size();
  std::string_view first_line(buffer.data(), pos);
  if (!first_line.empty() && first_line.back() == '\r') first_line.remove_suffix(1);
  const CsvHeader header = parse_csv_header(first_line);
  const std::size_t n = header.n;
  std::vector<double> z, x;
  z.reserve(header.rows * n);
  x.reserve(header.rows * n);

  std::size_t line_no = 1;
  std::size_t cursor = pos < buffer.size() ? pos + 1 : pos;
  std::size_t rows = 0;
  while (cursor < buffer.size()) {
    ++line_no;
    std::size_t end = buffer.find('\n', cursor);
    if (end == std::string::npos) end = buffer.size();
    std::string_view line(buffer.data() + cursor, end - cursor);
    cursor = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (rows == header.rows) {
      throw DataError("line " + std::to_string(line_no) + ": more rows than the header's M=" +
                      std::to_string(header.rows));
    }
    const char* p = line.data();
    const char* last = line.data() + line.size();
    for (std::size_t c = 0; c < 2 * n; ++c) {
      double v = 0.0;
      const auto res = std::from_chars(p, last, v);
      if (res.ec != std::errc()) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                        ": not a number");
      }
      if (!std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                        ": non-finite value");
      }
      (c < n ? z : x).push_back(v);
      p = res.ptr;
      if (c + 1 < 2 * n) {
        if (p == last || *p != ',') {
          throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(2 * n) +
                          " columns");
        }
        ++p;
      }
    }
    if (p != last) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(2 * n) + " columns");
    }
    ++rows;
  }
  if (rows != header.rows) {
    throw DataError("dataset has " + std::to_string(rows) + " rows, header declares M=" +
                    std::to_string(header.rows));
  }
  return DatasetPair(n, header.h, std::move(z), std::move(x));
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "csv") return DatasetFormat::kCsv;
  if (name == "bin") return DatasetFormat::kBinary;
  throw ConfigError("unknown dataset format '" + std::string(name) + "' (expected csv or bin)");
}

std::string format_double(double value) {
  std::array<char, 32> digits;
  const auto res = std::to_chars(digits.data(), digits.data() + digits.size(), value);
  return std::string(digits.data(), res.ptr);
}

void write_dataset(const DatasetPair& data, const std::string& path, DatasetFormat format) {
  write_file(path, format == DatasetFormat::kBinary ? encode_binary(data) : encode_csv(data));
}

DatasetPair read_dataset(const std::string& path) {
  const std::string buffer = read_file(path);
  if (buffer.size() >= kMagic.size() && std::equal(kMagic.begin(), kMagic.end(), buffer.begin())) {
    return decode_binary(buffer);
  }
  return decode_csv(buffer);
}

}  // namespace levysid
