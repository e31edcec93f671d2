#include "gces/libsvm.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <openssl/evp.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "gces/errors.hpp"

namespace gces {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view next_token(std::string_view& rest) {
  while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
  std::size_t n = 0;
  while (n < rest.size() && !is_space(rest[n])) ++n;
  std::string_view tok = rest.substr(0, n);
  rest.remove_prefix(n);
  return tok;
}

double parse_double(std::string_view tok, std::size_t line, const char* what) {
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double out = 0.0;
  const char* end = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(body.data(), end, out);
  if (body.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("cannot parse ") + what + " '" + std::string(tok) + "'");
  }
  return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t out = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  if (tok.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "cannot parse feature index '" + std::string(tok) + "'");
  }
  if (out == 0) throw ParseError(line, "feature indices are 1-based; got 0");
  return out;
}

}  // namespace

LabeledDataset parse_libsvm(std::istream& in, const ParseOptions& options) {
  std::vector<double> labels;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::size_t max_index = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::string_view rest = line;
    labels.push_back(parse_double(next_token(rest), line_no, "label"));
    std::size_t prev = 0;
    for (std::string_view tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tok) + "'");
      }
      const std::size_t idx = parse_index(tok.substr(0, colon), line_no);
      if (idx <= prev) {
        throw ParseError(line_no, "feature indices must be strictly increasing (" +
                                      std::to_string(prev) + " then " + std::to_string(idx) + ")");
      }
      prev = idx;
      cols.push_back(idx - 1);
      vals.push_back(parse_double(tok.substr(colon + 1), line_no, "feature value"));
      max_index = std::max(max_index, idx);
    }
    offsets.push_back(cols.size());
  }
  if (in.bad()) throw Error("parse_libsvm: read failure");

  LabeledDataset d;
  const std::size_t n_cols = std::max(options.declared_features, max_index);
  d.features = SparseMatrixCSR(labels.size(), n_cols, std::move(offsets), std::move(cols),
                               std::move(vals));
  d.labels = Eigen::Map<const DenseVector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  d.n_features_declared = options.declared_features;

  if (options.remap_binary_labels && !labels.empty()) {
    bool binary = true;
    bool has_zero = false;
    for (double y : labels) {
      binary = binary && (y == 0.0 || y == 1.0);
      has_zero = has_zero || y == 0.0;
    }
    if (binary && has_zero) {
      for (Eigen::Index i = 0; i < d.labels.size(); ++i) d.labels[i] = d.labels[i] == 0.0 ? -1.0 : 1.0;
      d.labels_remapped = true;
    }
  }
  return d;
}

LabeledDataset parse_libsvm_string(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, options);
}

LabeledDataset load_libsvm(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return parse_libsvm(in, options);
}

std::string serialize_libsvm(const LabeledDataset& d) {
  std::string out;
  char buf[64];
  for (std::size_t r = 0; r < d.features.rows(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", d.labels[static_cast<Eigen::Index>(r)]);
    out += buf;
    const auto idx = d.features.row_indices(r);
    const auto val = d.features.row_values(r);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      std::snprintf(buf, sizeof buf, " %zu:%.17g", idx[j] + 1, val[j]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

const std::vector<DatasetEntry>& dataset_registry() {
  static const std::vector<DatasetEntry> registry = {
      {"a1a", "www.csie.ntu.edu.tw", "/~cjlin/libsvmtools/datasets/binary/a1a", 123, false},
      {"rcv1.binary", "www.csie.ntu.edu.tw",
       "/~cjlin/libsvmtools/datasets/binary/rcv1_train.binary.bz2", 47236, true},
      {"triazine", "www.csie.ntu.edu.tw", "/~cjlin/libsvmtools/datasets/regression/triazines", 60,
       false},
  };
  return registry;
}

const DatasetEntry& lookup_dataset(std::string_view name) {
  if (name == "triazines") name = "triazine";
  for (const DatasetEntry& e : dataset_registry()) {
    if (e.name == name) return e;
  }
  throw RegistryError("unknown dataset '" + std::string(name) + "'");
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("GCES_CACHE"); env != nullptr && *env != '\0') return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
    return std::filesystem::path(xdg) / "gces";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::filesystem::path(home) / ".cache" / "gces";
  }
  return std::filesystem::temp_directory_path() / "gces-cache";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw Error("cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error("cannot lock " + path.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

std::string bunzip2(const std::filesystem::path& dir, std::string_view compressed) {
  const std::filesystem::path in = dir / ".download.bz2";
  const std::filesystem::path out = dir / ".download.out";
  write_file_atomic(in, compressed);
  const std::string cmd = "bzip2 -dc '" + in.string() + "' > '" + out.string() + "'";
  const int rc = std::system(cmd.c_str());
  std::filesystem::remove(in);
  if (rc != 0) {
    std::filesystem::remove(out);
    throw FetchError("bzip2 decompression failed");
  }
  std::string bytes = read_file(out);
  std::filesystem::remove(out);
  return bytes;
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string https_get(const std::string& host, const std::string& path) {
  httplib::SSLClient client(host);
  client.set_follow_location(true);
  client.set_connection_timeout(15);
  client.set_read_timeout(120);
  auto res = client.Get(path);
  if (!res) {
    throw FetchError("GET https://" + host + path + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw FetchError("GET https://" + host + path + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

std::filesystem::path fetch_dataset(std::string_view name, const std::filesystem::path& cache_dir,
                                    const FetchOptions& options) {
  const DatasetEntry& entry = lookup_dataset(name);
  std::filesystem::create_directories(cache_dir);
  const std::filesystem::path target = cache_dir / entry.name;
  const std::filesystem::path sum_path = cache_dir / (entry.name + ".sha256");
  FileLock lock(cache_dir / (entry.name + ".lock"));

  auto stored_sum = [&]() -> std::string {
    if (!std::filesystem::exists(sum_path)) return {};
    return std::string(trim(read_file(sum_path)));
  };

  bool corrupted = false;
  if (std::filesystem::exists(target)) {
    const std::string expected = stored_sum();
    const std::string actual = sha256_file(target);
    if (expected.empty()) {
      write_file_atomic(sum_path, actual + "\n");
      return target;
    }
    if (expected == actual) return target;
    corrupted = true;
  }
  if (options.offline) {
    if (corrupted) throw IntegrityError("checksum mismatch for cached " + target.string());
    throw FetchError("dataset '" + entry.name + "' is not cached and offline mode is set");
  }

  const Downloader download = options.downloader != nullptr ? options.downloader : &https_get;
  std::string bytes = download(entry.host, entry.path);
  if (entry.bzip2) bytes = bunzip2(cache_dir, bytes);
  const std::string actual = sha256_hex(bytes);
  const std::string expected = stored_sum();
  if (!expected.empty() && expected != actual) {
    throw IntegrityError("checksum mismatch for '" + entry.name + "' after re-download (expected " +
                         expected + ", got " + actual + ")");
  }
  write_file_atomic(target, bytes);
  if (expected.empty()) write_file_atomic(sum_path, actual + "\n");
  return target;
}

}  // namespace gces
