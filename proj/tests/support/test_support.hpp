#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "primmdebug/challenge/challenge.hpp"

namespace primmdebug::testing {

std::filesystem::path source_dir();
std::filesystem::path challenge_dir();
std::filesystem::path golden_dir();

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Loads challenges/<id>.json.
Challenge bundled(std::string_view id);

// Number Timeline with range end corrected to B+1.
std::string number_timeline_fixed();

// Unique directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace primmdebug::testing
