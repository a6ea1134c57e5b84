#include "deg/report.hpp"

#include <charconv>
#include <cstddef>
#include <system_error>

#include "deg/errors.hpp"

namespace deg {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

OutputFile::OutputFile(const std::filesystem::path& path,
                       const FileStamp& stamp,
                       const std::vector<std::string>& extra_comments) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary);
  if (!out_)
    throw ConfigError("report", "cannot open output file for writing",
                      {path.string()});
  out_ << "# tool_version: " << stamp.tool_version << '\n';
  out_ << "# config_hash: " << stamp.config_hash << '\n';
  out_ << "# seed: " << stamp.seed << '\n';
  for (const auto& c : extra_comments) out_ << "# " << c << '\n';
}

void OutputFile::comment(const std::string& text) {
  out_ << "# " << text << '\n';
}

void OutputFile::line(const std::string& text) { out_ << text << '\n'; }

void OutputFile::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace deg
