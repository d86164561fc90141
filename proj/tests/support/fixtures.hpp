#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "gridwatch/csv.hpp"
#include "gridwatch/ingest.hpp"

namespace fixture {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gridwatch-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write(const std::filesystem::path& p, const std::string& text) { gridwatch::csv::write_file(p, text); }

// Reduced corpus: `per_class` series of every class.
inline std::vector<gridwatch::GeneratedSeries> corpus(int per_class, std::uint64_t seed = 1) {
  gridwatch::CorpusSpec spec;
  spec.n_stations = per_class;
  spec.seed = seed;
  spec.class_counts.fill(per_class);
  return gridwatch::generate_corpus(spec);
}

}  // namespace fixture
