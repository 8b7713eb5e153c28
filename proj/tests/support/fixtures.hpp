#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

namespace fixture {

inline std::string path(const std::string& name) { return std::string(POSGRAPH_FIXTURE_DIR) + "/" + name; }

inline bool exists(const std::string& name) { return std::filesystem::exists(path(name)); }

// Scratch file under the system temp dir, removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& stem)
      : path_((std::filesystem::temp_directory_path() / (stem + "." + std::to_string(::getpid()) + ".tmp")).string()) {
    std::filesystem::remove(path_);
  }
  ~TempFile() { std::filesystem::remove(path_); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& str() const { return path_; }

 private:
  std::string path_;
};

}  // namespace fixture
