#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "gces/errors.hpp"
#include "gces/libsvm.hpp"

using namespace gces;
namespace fs = std::filesystem;

namespace {

std::atomic<int> download_count{0};
std::string served_body = "1 1:1\n";

std::string fake_download(const std::string& host, const std::string& path) {
  EXPECT_EQ(host, "www.csie.ntu.edu.tw");
  EXPECT_FALSE(path.empty());
  ++download_count;
  return served_body;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gces_libsvm_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void overwrite(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_libsvm_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Parse, SmallExample) {
  const auto d = parse_libsvm_string("+1 1:0.5 3:2\n-1 2:1\n");
  EXPECT_EQ(d.features.rows(), 2u);
  EXPECT_EQ(d.features.cols(), 3u);
  const DenseMatrix A = d.features.to_dense();
  EXPECT_EQ(A(0, 0), 0.5);
  EXPECT_EQ(A(0, 2), 2.0);
  EXPECT_EQ(A(1, 1), 1.0);
  EXPECT_EQ(A(1, 0), 0.0);
  EXPECT_EQ(d.labels[0], 1.0);
  EXPECT_EQ(d.labels[1], -1.0);
  EXPECT_FALSE(d.labels_remapped);
}

TEST(Parse, CrlfCommentsAndBlankLines) {
  const auto a = parse_libsvm_string("1 1:1 2:2\r\n\r\n# comment\r\n-1 2:3\r\n");
  const auto b = parse_libsvm_string("1 1:1 2:2\n-1 2:3\n");
  EXPECT_EQ(a.features.to_dense(), b.features.to_dense());
  EXPECT_EQ(a.labels, b.labels);
}

TEST(Parse, DeclaredFeaturesWidenMatrix) {
  ParseOptions opt;
  opt.declared_features = 10;
  const auto d = parse_libsvm_string("1 2:1\n", opt);
  EXPECT_EQ(d.features.cols(), 10u);
}

TEST(Parse, RowWithoutFeatures) {
  const auto d = parse_libsvm_string("1\n-1 1:2\n");
  EXPECT_EQ(d.features.rows(), 2u);
  EXPECT_EQ(d.features.to_dense()(0, 0), 0.0);
}

TEST(Parse, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("1 1:1\n1 0:1\n"), 2u);
  EXPECT_EQ(parse_error_line("1 2:1 1:1\n"), 1u);
  EXPECT_EQ(parse_error_line("1 2:1 2:1\n"), 1u);
  EXPECT_EQ(parse_error_line("1 1:1\n\nabc 1:1\n"), 3u);
  EXPECT_EQ(parse_error_line("1 1:x\n"), 1u);
  EXPECT_EQ(parse_error_line("1 1\n"), 1u);
  EXPECT_EQ(parse_libsvm_string("").features.rows(), 0u);
}

TEST(Parse, BinaryLabelRemap) {
  const auto d = parse_libsvm_string("0 1:1\n1 1:2\n");
  EXPECT_TRUE(d.labels_remapped);
  EXPECT_EQ(d.labels[0], -1.0);
  EXPECT_EQ(d.labels[1], 1.0);
  ParseOptions keep;
  keep.remap_binary_labels = false;
  const auto k = parse_libsvm_string("0 1:1\n1 1:2\n", keep);
  EXPECT_EQ(k.labels[0], 0.0);
  // Real-valued labels are never rewritten.
  const auto r = parse_libsvm_string("0.25 1:1\n3 1:2\n");
  EXPECT_FALSE(r.labels_remapped);
  EXPECT_EQ(r.labels[0], 0.25);
}

TEST(Serialize, RoundTripIsExact) {
  const auto d = parse_libsvm_string("1 1:0.1 4:3.3333333333333335\n-1 2:1e-300 3:-7\n");
  const auto e = parse_libsvm_string(serialize_libsvm(d));
  EXPECT_EQ(d.features.to_dense(), e.features.to_dense());
  EXPECT_EQ(d.labels, e.labels);
}

TEST(Registry, PinnedEntries) {
  EXPECT_EQ(lookup_dataset("a1a").n_features, 123u);
  EXPECT_EQ(lookup_dataset("rcv1.binary").n_features, 47236u);
  EXPECT_TRUE(lookup_dataset("rcv1.binary").bzip2);
  EXPECT_EQ(lookup_dataset("triazines").name, lookup_dataset("triazine").name);
  EXPECT_THROW(lookup_dataset("nope"), RegistryError);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CacheDir, EnvironmentOverride) {
  const char* old = std::getenv("GCES_CACHE");
  const std::string saved = old ? old : "";
  setenv("GCES_CACHE", "/tmp/gces-cache-test", 1);
  EXPECT_EQ(default_cache_dir(), fs::path("/tmp/gces-cache-test"));
  if (old) {
    setenv("GCES_CACHE", saved.c_str(), 1);
  } else {
    unsetenv("GCES_CACHE");
  }
}

TEST(Fetch, DownloadsOnceThenUsesCache) {
  const fs::path dir = fresh_dir("cached");
  served_body = "1 1:1\n";
  download_count = 0;
  FetchOptions opt;
  opt.downloader = &fake_download;
  const fs::path p = fetch_dataset("a1a", dir, opt);
  EXPECT_EQ(download_count, 1);
  EXPECT_TRUE(fs::exists(dir / "a1a.sha256"));
  fetch_dataset("a1a", dir, opt);
  EXPECT_EQ(download_count, 1);
  FetchOptions offline;
  offline.offline = true;
  EXPECT_EQ(fetch_dataset("a1a", dir, offline), p);
  const auto d = load_libsvm(p);
  EXPECT_EQ(d.features.rows(), 1u);
}

TEST(Fetch, CorruptedCacheIsReplaced) {
  const fs::path dir = fresh_dir("corrupt");
  served_body = "1 1:1\n";
  download_count = 0;
  FetchOptions opt;
  opt.downloader = &fake_download;
  const fs::path p = fetch_dataset("a1a", dir, opt);
  overwrite(p, "garbage");
  fetch_dataset("a1a", dir, opt);
  EXPECT_EQ(download_count, 2);
  std::ifstream in(p);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, served_body);
}

TEST(Fetch, SecondMismatchIsIntegrityError) {
  const fs::path dir = fresh_dir("integrity");
  served_body = "1 1:1\n";
  FetchOptions opt;
  opt.downloader = &fake_download;
  const fs::path p = fetch_dataset("a1a", dir, opt);
  overwrite(p, "garbage");
  served_body = "1 1:2\n";  // the server now sends different bytes
  EXPECT_THROW(fetch_dataset("a1a", dir, opt), IntegrityError);
  served_body = "1 1:1\n";
}

TEST(Fetch, OfflineMissingAndCorrupted) {
  const fs::path dir = fresh_dir("offline");
  FetchOptions offline;
  offline.offline = true;
  EXPECT_THROW(fetch_dataset("a1a", dir, offline), FetchError);
  served_body = "1 1:1\n";
  FetchOptions opt;
  opt.downloader = &fake_download;
  const fs::path p = fetch_dataset("a1a", dir, opt);
  overwrite(p, "garbage");
  EXPECT_THROW(fetch_dataset("a1a", dir, offline), IntegrityError);
}

TEST(Fetch, UnknownName) {
  const fs::path dir = fresh_dir("unknown");
  EXPECT_THROW(fetch_dataset("nope", dir), RegistryError);
}
