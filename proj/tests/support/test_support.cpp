#include "test_support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace primmdebug::testing {

std::filesystem::path source_dir() { return PRIMMDEBUG_SOURCE_DIR; }
std::filesystem::path challenge_dir() { return source_dir() / "challenges"; }
std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

Challenge bundled(std::string_view id) {
  return load_challenge(challenge_dir() / (std::string(id) + ".json"));
}

std::string number_timeline_fixed() {
  std::string p = bundled("number-timeline").program;
  const std::string from = "range(A, B)";
  p.replace(p.find(from), from.size(), "range(A, B+1)");
  return p;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "primmdebug-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace primmdebug::testing
