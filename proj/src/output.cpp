#include "whitham/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "whitham/error.hpp"

namespace whitham {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("WHITHAM_OUTPUT_ROOT"); env && *env) return env;
  return "runs";
}

std::filesystem::path timestamped_run_dir(const std::filesystem::path& root, std::string_view command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const std::string base = std::string(command) + "-" + stamp;
  auto dir = root / base;
  for (int k = 2; std::filesystem::exists(dir); ++k) dir = root / (base + "-" + std::to_string(k));
  return dir;
}

RunWriter::RunWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void RunWriter::write(const std::string& name, std::string_view bytes) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
  for (auto& a : artifacts_) {
    if (a.name == name) {
      a.sha256 = sha256_hex(bytes);
      a.bytes = bytes.size();
      return;
    }
  }
  artifacts_.push_back({name, sha256_hex(bytes), bytes.size()});
}

}  // namespace whitham
