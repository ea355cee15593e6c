#pragma once

// Run directories, artifact files and the manifest that lists them.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace whitham {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// %.17g
std::string format_number(double v);

/// Rows of numbers as CSV with a header line; NaN is written as "nan".
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Output root: $WHITHAM_OUTPUT_ROOT if set, else ./runs.
std::filesystem::path default_output_root();

/// `<root>/<command>-YYYYmmdd-HHMMSS`, with a numeric suffix if taken.
std::filesystem::path timestamped_run_dir(const std::filesystem::path& root, std::string_view command);

struct Artifact {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Single writer for one run directory. Every file goes through `write`,
/// which records its hash for the manifest. Throws IoError on failure.
class RunWriter {
 public:
  explicit RunWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const std::vector<Artifact>& artifacts() const noexcept { return artifacts_; }

  void write(const std::string& name, std::string_view bytes);

 private:
  std::filesystem::path dir_;
  std::vector<Artifact> artifacts_;
};

}  // namespace whitham
