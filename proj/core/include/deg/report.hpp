#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace deg {

/// Shortest round-trip decimal representation of a double (std::to_chars),
/// so reruns are byte-identical and files stay readable.
[[nodiscard]] std::string format_double(double v);

/// Provenance stamped at the top of every output file.
struct FileStamp {
  std::string_view tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// Line-oriented writer for CSV and structured-text outputs. Every file
/// starts with '#' comment lines carrying the stamp; extra header comments
/// (e.g. abort flags) follow the stamp.
class OutputFile {
 public:
  OutputFile(const std::filesystem::path& path, const FileStamp& stamp,
             const std::vector<std::string>& extra_comments = {});

  void comment(const std::string& text);
  /// Writes one raw line.
  void line(const std::string& text);
  /// Joins cells with commas.
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

}  // namespace deg
