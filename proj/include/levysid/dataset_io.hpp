#pragma once

#include <string>
#include <string_view>

#include "levysid/dataset.hpp"

namespace levysid {

enum class DatasetFormat { kCsv, kBinary };

DatasetFormat parse_dataset_format(std::string_view name);

/// CSV: a `#levy-sid-pairs v1 n=<n> M=<M> h=<h>` header, then one row of
/// z_1..z_n,x_1..x_n per pair in shortest round-trip decimal form.
/// Binary: "LSID", version byte 1, u64 n, u64 M, f64 h, then each row's z
/// and x values, all little-endian.
void write_dataset(const DatasetPair& data, const std::string& path, DatasetFormat format);

/// Detects the format from the leading bytes. Throws IoError when the file
/// cannot be read and DataError (with the line or byte offset) when it is
/// malformed.
DatasetPair read_dataset(const std::string& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace levysid
