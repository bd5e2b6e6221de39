#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "xdalign/similarity.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(XDALIGN_FIXTURE_DIR) / name; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("xdalign-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::string> numbered_ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i + 1));
  return ids;
}

inline xdalign::SimilarityMatrix matrix(const std::vector<std::vector<double>>& rows, std::string date = {}) {
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  return xdalign::SimilarityMatrix::from_rows(numbered_ids("d", rows.size()), numbered_ids("f", cols), rows,
                                              std::move(date));
}

// Scores drawn on a coarse grid so ties are common.
inline std::vector<std::vector<double>> random_scores(std::mt19937_64& rng, std::size_t max_side = 8) {
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  std::uniform_int_distribution<int> grid(0, 200);
  const std::size_t r = side(rng), c = side(rng);
  std::vector<std::vector<double>> s(r, std::vector<double>(c));
  for (auto& row : s)
    for (auto& v : row) v = grid(rng) * 0.5;
  return s;
}

}  // namespace testing_support
