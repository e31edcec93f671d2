#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gces/numeric.hpp"

namespace gces {

struct LabeledDataset {
  SparseMatrixCSR features;
  DenseVector labels;
  std::size_t n_features_declared = 0;
  /// True when the file used {0, 1} labels and they were rewritten to {-1, +1}.
  bool labels_remapped = false;
};

struct ParseOptions {
  /// Column count floor; the result has max(declared, largest index seen).
  std::size_t declared_features = 0;
  bool remap_binary_labels = true;
};

/// Parses LIBSVM text: "<label> <idx>:<val> ..." with 1-based, strictly
/// increasing indices. LF and CRLF are equivalent; blank lines and lines
/// starting with '#' are skipped. Throws ParseError with a 1-based line number.
LabeledDataset parse_libsvm(std::istream& in, const ParseOptions& options = {});
LabeledDataset parse_libsvm_string(std::string_view text, const ParseOptions& options = {});
LabeledDataset load_libsvm(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes one line per row with %.17g values, so parse(serialize(d)) is exact.
std::string serialize_libsvm(const LabeledDataset& d);

struct DatasetEntry {
  std::string name;
  std::string host;
  std::string path;
  std::size_t n_features = 0;
  bool bzip2 = false;
};

/// The pinned registry: a1a, rcv1.binary, triazine (alias "triazines").
const std::vector<DatasetEntry>& dataset_registry();
/// Throws RegistryError on an unknown name.
const DatasetEntry& lookup_dataset(std::string_view name);

/// $GCES_CACHE when set, otherwise $XDG_CACHE_HOME/gces or ~/.cache/gces.
std::filesystem::path default_cache_dir();

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Downloads the body of https://host/path. Throws FetchError.
using Downloader = std::string (*)(const std::string& host, const std::string& path);
std::string https_get(const std::string& host, const std::string& path);

struct FetchOptions {
  bool offline = false;
  /// Replaces the HTTPS client; tests use this to stay off the network.
  Downloader downloader = nullptr;
};

/// Returns cache_dir/<name>, downloading it when missing. The checksum in
/// cache_dir/<name>.sha256 is verified on every call; a mismatch triggers one
/// re-download, and a second mismatch throws IntegrityError. Writes happen
/// under an exclusive lock on cache_dir/<name>.lock.
std::filesystem::path fetch_dataset(std::string_view name, const std::filesystem::path& cache_dir,
                                    const FetchOptions& options = {});

}  // namespace gces
