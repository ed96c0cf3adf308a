#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eddy/transport/experiment.hpp"

namespace eddy {

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline constexpr const char* kCsvHeader = "n,theta_linf,D,stderr,M,seconds";

// All columns except `seconds` are bit-reproducible; doubles are written with
// 17 significant digits so they round-trip exactly.
inline std::string format_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%zu,%.3f\n", r.n, r.theta_linf, r.D, r.stderr_D, r.M, r.seconds);
    out += buf;
  }
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// Drops the trailing wallclock column of a CSV row.
inline std::string mask_seconds(const std::string& line) {
  const auto pos = line.rfind(',');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

struct CsvComparison {
  bool match = true;
  std::size_t row = 0;  // 1-based data row of the first difference (0 = header)
  std::string detail;
};

inline CsvComparison compare_csv(const std::string& expected, const std::string& actual) {
  const auto a = split_lines(expected);
  const auto b = split_lines(actual);
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    const bool header = i == 0;
    const std::string x = header ? a[i] : mask_seconds(a[i]);
    const std::string y = header ? b[i] : mask_seconds(b[i]);
    if (x != y) return {false, i, "stored '" + a[i] + "' vs replayed '" + b[i] + "'"};
  }
  if (a.size() != b.size())
    return {false, common, "row count differs: stored " + std::to_string(a.size() == 0 ? 0 : a.size() - 1) +
                               " vs replayed " + std::to_string(b.size() == 0 ? 0 : b.size() - 1)};
  return {};
}

}  // namespace eddy
