#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace hjcone {

/// Rows of text fields with a mandatory header; floats are rendered with 17
/// significant digits so emitted values round-trip bit-exactly.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& fields);
  std::string str() const;

  static std::string num(double v);    ///< %.17g
  static std::string num(long v);
  static std::string flag(bool b);     ///< "0"/"1"

 private:
  size_t width_;
  std::ostringstream out_;
};

/// Write-to-temp-then-rename in the target directory; readers never observe a
/// partial file.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace hjcone
