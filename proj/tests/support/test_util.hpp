#ifndef GRIDMERGE_TESTS_SUPPORT_TEST_UTIL_HPP_
#define GRIDMERGE_TESTS_SUPPORT_TEST_UTIL_HPP_

#include <cstdlib>
#include <filesystem>
#include <string>

namespace gridmerge_test {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() /
                        "gridmerge_test_XXXXXX")
                           .string();
    char* made = mkdtemp(tmpl.data());
    path_ = made ? std::filesystem::path(made) : std::filesystem::path();
  }
  ~TempDir() {
    if (!path_.empty()) {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace gridmerge_test

#endif
