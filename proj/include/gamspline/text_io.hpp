#ifndef GAMSPLINE_TEXT_IO_HPP_
#define GAMSPLINE_TEXT_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gamspline {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Whole-string decimal parse; throws kInvalidInput on trailing garbage.
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view line, char delimiter);
std::string trim(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, creating
// parent directories as needed. Throws kIo on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace gamspline

#endif  // GAMSPLINE_TEXT_IO_HPP_
